#include "cntex/pipeline.hpp"

#include "cntex/cn_measures.hpp"
#include "cntex/error.hpp"
#include "cntex/rng.hpp"
#include "cntex/text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace cntex {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string index_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%05zu", i);
    return buf;
}

void dump_feature_set(const std::filesystem::path& dir, std::size_t index, const ImageTensor& resized,
                      const std::vector<FeatureImages>& features) {
    std::vector<Band> cc, dc, ec;
    for (const auto& f : features) {
        cc.push_back(f.cc);
        dc.push_back(f.dc);
        ec.push_back(f.ec);
    }
    const auto stem = index_name(index);
    save_png(dir / (stem + "_bi.png"), resized);
    save_png(dir / (stem + "_cc.png"), ImageTensor::from_bands(cc));
    save_png(dir / (stem + "_dc.png"), ImageTensor::from_bands(dc));
    save_png(dir / (stem + "_ec.png"), ImageTensor::from_bands(ec));
}

std::string csv_row(std::span<const double> values) {
    std::string out;
    for (double v : values) {
        out += ',';
        out += format_double(v);
    }
    return out;
}

std::string_view reduce_name(ReduceMethod m) {
    switch (m) {
        case ReduceMethod::None: return "none";
        case ReduceMethod::Pca: return "pca";
        case ReduceMethod::Chi2: return "chi2";
    }
    return "none";
}

}  // namespace

std::vector<int> DatasetManifest::labels() const {
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.class_id);
    return out;
}

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    DatasetManifest m;
    std::size_t line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.rfind(',');
        if (comma == std::string_view::npos)
            throw Error(ErrorCode::InvalidManifest, "line " + std::to_string(line_no) + ": expected '<path>,<class_id>'");
        const auto path = trim(line.substr(0, comma));
        const auto id = parse_int(trim(line.substr(comma + 1)));
        if (path.empty() || !id || *id < 0)
            throw Error(ErrorCode::InvalidManifest, "line " + std::to_string(line_no) + ": bad path or class id");
        std::filesystem::path p{std::string(path)};
        if (p.is_relative()) p = base_dir / p;
        m.entries.push_back({p, static_cast<int>(*id)});
    }
    if (m.entries.empty()) throw Error(ErrorCode::InvalidManifest, "manifest has no entries");
    std::set<int> ids;
    for (const auto& e : m.entries) ids.insert(e.class_id);
    if (ids.size() < 2) throw Error(ErrorCode::InvalidManifest, "manifest needs at least two classes");
    if (*ids.rbegin() != static_cast<int>(ids.size()) - 1)
        throw Error(ErrorCode::InvalidManifest, "class ids must be contiguous from 0");
    for (int id : ids) m.class_names.push_back(std::to_string(id));
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_text_file(path.string()), path.parent_path());
}

std::string_view to_string(SplitTag tag) noexcept {
    switch (tag) {
        case SplitTag::Finetune: return "finetune";
        case SplitTag::Train: return "train";
        case SplitTag::Test: return "test";
    }
    return "test";
}

std::vector<std::size_t> SplitAssignment::indices(SplitTag tag) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == tag) out.push_back(i);
    return out;
}

SplitCounts split_counts(std::size_t n) {
    constexpr std::array<std::size_t, 3> percent{20, 50, 30};
    std::array<std::size_t, 3> counts{}, remainder{};
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        counts[k] = n * percent[k] / 100;
        remainder[k] = n * percent[k] % 100;
        assigned += counts[k];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k]];
    return {counts[0], counts[1], counts[2]};
}

SplitAssignment split_dataset(const DatasetManifest& manifest, std::uint64_t seed) {
    const std::size_t classes = manifest.num_classes();
    std::vector<std::vector<std::size_t>> members(classes);
    for (std::size_t i = 0; i < manifest.entries.size(); ++i)
        members[static_cast<std::size_t>(manifest.entries[i].class_id)].push_back(i);

    SplitAssignment split;
    split.seed = seed;
    split.tags.assign(manifest.entries.size(), SplitTag::Test);
    Xoshiro256 rng(seed);
    for (std::size_t c = 0; c < classes; ++c) {
        auto& idx = members[c];
        if (idx.size() < 2)
            throw Error(ErrorCode::TooFewSamples, "class " + manifest.class_names[c] + " has " +
                                                      std::to_string(idx.size()) + " entries, need at least 2");
        rng.shuffle(std::span<std::size_t>(idx));
        const auto counts = split_counts(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            split.tags[idx[k]] = k < counts.finetune                ? SplitTag::Finetune
                                 : k < counts.finetune + counts.train ? SplitTag::Train
                                                                      : SplitTag::Test;
        }
    }
    return split;
}

std::string format_split(const SplitAssignment& split, const DatasetManifest& manifest) {
    if (split.tags.size() != manifest.entries.size())
        throw Error(ErrorCode::LengthMismatch, "split size differs from manifest size");
    std::string out = "SPLIT1 " + std::to_string(split.tags.size()) + " " + std::to_string(split.seed) + "\n";
    for (std::size_t i = 0; i < split.tags.size(); ++i) {
        out += std::string(to_string(split.tags[i])) + "," + std::to_string(manifest.entries[i].class_id) + "," +
               manifest.entries[i].path.string() + "\n";
    }
    return out;
}

void write_split(const std::filesystem::path& path, const SplitAssignment& split, const DatasetManifest& manifest) {
    write_text_file(path.string(), format_split(split, manifest));
}

SplitAssignment read_split(const std::filesystem::path& path) {
    const auto text = read_text_file(path.string());
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty split file");
    const auto header = split_whitespace(lines.front());
    if (header.size() != 3 || header[0] != "SPLIT1") throw Error(ErrorCode::MalformedHeader, "expected 'SPLIT1 <count> <seed>'");
    const auto count = parse_int(header[1]);
    const auto seed = parse_int(header[2]);
    if (!count || !seed || *count < 0) throw Error(ErrorCode::MalformedHeader, "bad SPLIT1 header");
    SplitAssignment split;
    split.seed = static_cast<std::uint64_t>(*seed);
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const auto line = trim(lines[ln]);
        if (line.empty()) continue;
        const auto tag = line.substr(0, line.find(','));
        if (tag == "finetune")
            split.tags.push_back(SplitTag::Finetune);
        else if (tag == "train")
            split.tags.push_back(SplitTag::Train);
        else if (tag == "test")
            split.tags.push_back(SplitTag::Test);
        else
            throw Error(ErrorCode::MalformedRecord, "unknown split tag on line " + std::to_string(ln + 1));
    }
    if (split.tags.size() != static_cast<std::size_t>(*count))
        throw Error(ErrorCode::MalformedHeader, "split header count does not match its records");
    return split;
}

GlobalFeatureVector extract_global(const ImageTensor& image, const ExtractOptions& options,
                                   std::vector<FeatureImages>* features_out) {
    const auto resized = resize_bilinear(image, options.image_size, options.image_size);
    std::vector<FeatureImages> features;
    features.reserve(resized.bands());
    for (std::size_t b = 0; b < resized.bands(); ++b) features.push_back(feature_images(resized.band(b), options.params));
    auto global = global_vector(resized, features, options.normalize_hist);
    if (features_out) *features_out = std::move(features);
    return global;
}

LabeledVectors extract_features(const DatasetManifest& manifest, const ExtractOptions& options) {
    options.params.validate();
    const std::size_t n = manifest.entries.size();
    if (n == 0) throw Error(ErrorCode::EmptyData, "manifest has no images");
    if (options.dump_feature_images) std::filesystem::create_directories(*options.dump_feature_images);

    std::vector<std::vector<double>> rows(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                const auto image = load_image(manifest.entries[i].path);
                std::vector<FeatureImages> features;
                auto global = extract_global(image, options, options.dump_feature_images ? &features : nullptr);
                if (options.dump_feature_images)
                    dump_feature_set(*options.dump_feature_images, i,
                                     resize_bilinear(image, options.image_size, options.image_size), features);
                rows[i] = std::move(global.values);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        const auto where = manifest.entries[i].path.string();
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw Error(e.code(), where + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::UnreadableFile, where + ": " + e.what());
        }
    }

    LabeledVectors set;
    set.labels = manifest.labels();
    set.vectors = Matrix::from_rows(rows);
    return set;
}

RunResult run_pipeline(const DatasetManifest& manifest, const RunOptions& options) {
    if (options.repeats == 0) throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
    const auto out_dir = options.out_dir ? *options.out_dir
                                         : (options.report.has_parent_path() ? options.report.parent_path()
                                                                             : std::filesystem::path("."));
    std::filesystem::create_directories(out_dir);

    LabeledVectors features = extract_features(manifest, options.extract);
    if (options.local_vectors) {
        const auto local = read_fvec(*options.local_vectors);
        if (local.count() != features.count())
            throw Error(ErrorCode::MisalignedLocalVectors, "local file has " + std::to_string(local.count()) +
                                                               " records for " + std::to_string(features.count()) +
                                                               " manifest entries");
        if (local.labels != features.labels)
            throw Error(ErrorCode::MisalignedLocalVectors, "local file labels do not follow manifest order");
        std::vector<std::vector<double>> fused(features.count());
        for (std::size_t i = 0; i < features.count(); ++i) {
            const auto g = features.vectors.row(i);
            GlobalFeatureVector global{0, std::vector<double>(g.begin(), g.end())};
            fused[i] = fuse(global, local.vectors.row(i));
        }
        features.vectors = Matrix::from_rows(fused);
    }
    write_fvec(out_dir / "features.fvec", features);

    const std::size_t classes = manifest.num_classes();
    RunResult result;
    result.feature_dim = features.dim();
    std::vector<double> spectrum;
    for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        RepeatResult rr;
        rr.seed = options.seed + rep;
        const auto split = split_dataset(manifest, rr.seed);
        const auto train_idx = split.indices(SplitTag::Train);
        const auto test_idx = split.indices(SplitTag::Test);
        rr.sizes = {split.indices(SplitTag::Finetune).size(), train_idx.size(), test_idx.size()};

        Matrix train = features.vectors.select_rows(train_idx);
        Matrix test = features.vectors.select_rows(test_idx);
        std::vector<int> train_y, test_y;
        for (auto i : train_idx) train_y.push_back(features.labels[i]);
        for (auto i : test_idx) test_y.push_back(features.labels[i]);

        if (options.reduce == ReduceMethod::Pca) {
            const auto fit = pca_fit(train, options.pca);
            train = pca_transform(fit.model, train);
            test = pca_transform(fit.model, test);
            if (rep == 0) {
                write_pca_model(out_dir / "pca.model", fit.model);
                spectrum = fit.spectrum;
            }
        } else if (options.reduce == ReduceMethod::Chi2) {
            const auto sel = chi2_select(train, train_y, std::min(options.chi2_k.value_or(classes), train.cols()));
            train = chi2_apply(sel, train);
            test = chi2_apply(sel, test);
            if (rep == 0) {
                std::string text = "CHI2 " + std::to_string(sel.scores.size()) + " " + std::to_string(sel.selected.size()) + "\n";
                for (std::size_t i = 0; i < sel.selected.size(); ++i)
                    text += (i ? " " : "") + std::to_string(sel.selected[i]);
                text += "\n";
                for (std::size_t i = 0; i < sel.scores.size(); ++i) text += (i ? " " : "") + format_double(sel.scores[i]);
                text += "\n";
                write_text_file((out_dir / "chi2.selector").string(), text);
            }
        }
        rr.reduced_dim = train.cols();

        SvmOptions svm;
        svm.c = options.svm_c;
        svm.seed = rr.seed;
        svm.gamma = options.svm_gamma;
        const auto model = svm_train(train, train_y, svm);
        const auto predicted = svm_predict(model, test);
        rr.eval = evaluate(predicted, test_y, classes);
        if (rep == 0) {
            write_split(out_dir / "split.split", split, manifest);
            write_svm_model(out_dir / "svm.model", model);
        }
        result.repeats.push_back(std::move(rr));
    }
    double oa_sum = 0.0;
    for (const auto& r : result.repeats) oa_sum += r.eval.overall_accuracy;
    result.mean_accuracy = oa_sum / static_cast<double>(result.repeats.size());

    const auto& first = result.repeats.front();
    std::string confusion = "true\\pred";
    for (std::size_t c = 0; c < classes; ++c) confusion += "," + manifest.class_names[c];
    confusion += "\n";
    for (std::size_t c = 0; c < classes; ++c)
        confusion += manifest.class_names[c] + csv_row(first.eval.confusion.row(c)) + "\n";
    write_text_file((out_dir / "confusion.csv").string(), confusion);

    if (!spectrum.empty()) {
        std::string curve = "component,ratio,cumulative\n";
        double cumulative = 0.0;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            cumulative += spectrum[i];
            curve += std::to_string(i + 1) + "," + format_double(spectrum[i]) + "," + format_double(cumulative) + "\n";
        }
        write_text_file((out_dir / "variance_curve.csv").string(), curve);
    }

    std::string text;
    text += "images: " + std::to_string(manifest.entries.size()) + "\n";
    text += "classes: " + std::to_string(classes) + "\n";
    text += "radius: " + format_double(options.extract.params.radius) + "\n";
    text += "threshold: " + format_double(options.extract.params.threshold) + "\n";
    text += "image_size: " + std::to_string(options.extract.image_size) + "\n";
    text += "histogram_normalization: " + std::string(options.extract.normalize_hist ? "on" : "off") + "\n";
    text += "local_features: " + std::string(options.local_vectors ? "yes" : "no") + "\n";
    text += "feature_dim: " + std::to_string(result.feature_dim) + "\n";
    text += "reduce: " + std::string(reduce_name(options.reduce)) + "\n";
    text += "svm_c: " + format_double(options.svm_c) + "\n";
    text += "repeats: " + std::to_string(options.repeats) + "\n";
    for (std::size_t r = 0; r < result.repeats.size(); ++r) {
        const auto& rr = result.repeats[r];
        text += "repeat " + std::to_string(r) + ": seed " + std::to_string(rr.seed) + ", split " +
                std::to_string(rr.sizes.finetune) + "/" + std::to_string(rr.sizes.train) + "/" +
                std::to_string(rr.sizes.test) + ", reduced_dim " + std::to_string(rr.reduced_dim) + ", OA " +
                format_double(rr.eval.overall_accuracy) + "\n";
    }
    text += "mean_OA: " + format_double(result.mean_accuracy) + "\n";
    text += "confusion (repeat 0, rows = true class, row-normalized):\n";
    for (std::size_t c = 0; c < classes; ++c) {
        text += "  " + manifest.class_names[c] + ":";
        for (double v : first.eval.confusion.row(c)) text += " " + format_double(v);
        text += "\n";
    }
    write_text_file(options.report.string(), text);

    nlohmann::ordered_json j;
    j["images"] = manifest.entries.size();
    j["classes"] = classes;
    j["params"] = {{"radius", options.extract.params.radius},
                   {"threshold", options.extract.params.threshold},
                   {"image_size", options.extract.image_size},
                   {"normalize_hist", options.extract.normalize_hist}};
    j["local_features"] = options.local_vectors.has_value();
    j["feature_dim"] = result.feature_dim;
    j["reduce"] = reduce_name(options.reduce);
    j["svm_c"] = options.svm_c;
    j["repeats"] = nlohmann::ordered_json::array();
    for (const auto& rr : result.repeats) {
        nlohmann::ordered_json e;
        e["seed"] = rr.seed;
        e["split"] = {{"finetune", rr.sizes.finetune}, {"train", rr.sizes.train}, {"test", rr.sizes.test}};
        e["reduced_dim"] = rr.reduced_dim;
        e["overall_accuracy"] = rr.eval.overall_accuracy;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < classes; ++c) {
            const auto row = rr.eval.confusion.row(c);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        e["confusion"] = rows;
        j["repeats"].push_back(e);
    }
    j["mean_overall_accuracy"] = result.mean_accuracy;
    auto json_path = options.report;
    json_path.replace_extension(".json");
    if (json_path == options.report) json_path += ".json";
    write_text_file(json_path.string(), j.dump(2) + "\n");
    return result;
}

}  // namespace cntex
