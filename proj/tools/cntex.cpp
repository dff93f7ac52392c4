// cntex command-line front end: extract, split, run, synth.

#include "cntex/error.hpp"
#include "cntex/pipeline.hpp"
#include "cntex/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

void add_extract_options(CLI::App& cmd, cntex::ExtractOptions& opts, bool& no_normalize) {
    cmd.add_option("--radius", opts.params.radius, "Search radius in pixels")->capture_default_str();
    cmd.add_option("--threshold", opts.params.threshold, "Similarity threshold")->capture_default_str();
    cmd.add_option("--size", opts.image_size, "Side length images are resized to")->capture_default_str();
    cmd.add_option("--threads", opts.threads, "Extraction workers (0 = all cores)")->capture_default_str();
    cmd.add_flag("--no-normalize-hist", no_normalize, "Keep raw ULBP counts instead of L1-normalised histograms");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complex-network texture features: extraction, splitting and classification"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string out_path;
    bool no_normalize = false;

    cntex::ExtractOptions extract_opts;
    std::string dump_dir;
    auto* extract = app.add_subcommand("extract", "Write global feature vectors (FVEC1) for every manifest image");
    extract->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    extract->add_option("--out", out_path, "Output FVEC1 file")->required();
    extract->add_option("--dump-feature-images", dump_dir, "Also write BI/CC/DC/EC PNGs per image into DIR");
    add_extract_options(*extract, extract_opts, no_normalize);

    std::uint64_t split_seed = 42;
    auto* split = app.add_subcommand("split", "Write the stratified finetune/train/test assignment");
    split->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    split->add_option("--seed", split_seed, "PRNG seed")->capture_default_str();
    split->add_option("--out", out_path, "Output split file")->required();

    cntex::RunOptions run_opts;
    std::string local_path, report_path, out_dir, reduce = "none";
    std::size_t pca_k = 0;
    double pca_threshold = 0.99;
    std::size_t chi2_k = 0;
    auto* run = app.add_subcommand("run", "Split, extract, reduce, train and evaluate");
    run->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    run->add_option("--seed", run_opts.seed, "PRNG seed for the split and the solver")->capture_default_str();
    run->add_option("--local", local_path, "FVEC1 file of local vectors aligned with the manifest");
    run->add_option("--reduce", reduce, "Dimension reduction")
        ->check(CLI::IsMember({"none", "pca", "chi2"}))
        ->capture_default_str();
    auto* k_opt = run->add_option("--pca-k", pca_k, "Number of PCA components");
    auto* t_opt = run->add_option("--pca-threshold", pca_threshold, "Cumulative explained variance to retain");
    k_opt->excludes(t_opt);
    run->add_option("--chi2-k", chi2_k, "Features kept by chi-square selection (default: class count)");
    run->add_option("--svm-c", run_opts.svm_c, "SVM penalty")->capture_default_str();
    run->add_option("--svm-gamma", run_opts.svm_gamma, "Kernel coefficient; ignored by the linear kernel");
    run->add_option("--repeats", run_opts.repeats, "Independent repeats with seeds seed, seed+1, ...")
        ->capture_default_str();
    run->add_option("--report", report_path, "Text report path")->required();
    run->add_option("--out-dir", out_dir, "Artifact directory (default: report directory)");
    add_extract_options(*run, run_opts.extract, no_normalize);

    cntex::SyntheticCorpusOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Generate the synthetic grating corpus and its manifest");
    synth->add_option("--out", out_path, "Output directory")->required();
    synth->add_option("--seed", synth_opts.seed, "PRNG seed")->capture_default_str();
    synth->add_option("--classes", synth_opts.classes, "Number of classes")->capture_default_str();
    synth->add_option("--per-class", synth_opts.per_class, "Images per class")->capture_default_str();
    synth->add_option("--size", synth_opts.size, "Image side length")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            extract_opts.normalize_hist = !no_normalize;
            if (!dump_dir.empty()) extract_opts.dump_feature_images = dump_dir;
            const auto manifest = cntex::read_manifest(manifest_path);
            const auto vectors = cntex::extract_features(manifest, extract_opts);
            cntex::write_fvec(out_path, vectors);
            std::cout << "wrote " << vectors.count() << " vectors of dimension " << vectors.dim() << " to " << out_path
                      << "\n";
        } else if (*split) {
            const auto manifest = cntex::read_manifest(manifest_path);
            const auto assignment = cntex::split_dataset(manifest, split_seed);
            cntex::write_split(out_path, assignment, manifest);
            std::cout << "wrote split of " << assignment.tags.size() << " entries to " << out_path << "\n";
        } else if (*run) {
            run_opts.extract.normalize_hist = !no_normalize;
            run_opts.report = report_path;
            if (!out_dir.empty()) run_opts.out_dir = out_dir;
            if (!local_path.empty()) run_opts.local_vectors = local_path;
            static const std::map<std::string, cntex::ReduceMethod> methods{
                {"none", cntex::ReduceMethod::None}, {"pca", cntex::ReduceMethod::Pca}, {"chi2", cntex::ReduceMethod::Chi2}};
            run_opts.reduce = methods.at(reduce);
            if (*k_opt)
                run_opts.pca = cntex::ComponentCount{pca_k};
            else
                run_opts.pca = cntex::VarianceThreshold{pca_threshold};
            if (chi2_k > 0) run_opts.chi2_k = chi2_k;
            const auto manifest = cntex::read_manifest(manifest_path);
            const auto result = cntex::run_pipeline(manifest, run_opts);
            std::cout << "mean OA " << result.mean_accuracy << " over " << result.repeats.size()
                      << " repeat(s); report written to " << report_path << "\n";
        } else if (*synth) {
            const auto manifest = cntex::write_synthetic_corpus(out_path, synth_opts);
            std::cout << "wrote " << synth_opts.classes * synth_opts.per_class << " images; manifest " << manifest.string()
                      << "\n";
        }
    } catch (const cntex::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
