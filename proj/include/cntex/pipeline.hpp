#pragma once

#include "cntex/classify.hpp"
#include "cntex/cn_graph.hpp"
#include "cntex/fusion.hpp"
#include "cntex/image.hpp"
#include "cntex/lbp.hpp"
#include "cntex/reduce.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cntex {

struct ManifestEntry {
    std::filesystem::path path;
    int class_id = 0;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> class_names;

    std::size_t num_classes() const noexcept { return class_names.size(); }
    std::vector<int> labels() const;
};

/// Lines of "<path>,<class_id>"; '#' starts a comment. Relative paths are
/// resolved against the manifest's directory. Class ids must be contiguous
/// from 0 with at least two classes.
DatasetManifest read_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

enum class SplitTag { Finetune, Train, Test };

std::string_view to_string(SplitTag tag) noexcept;

struct SplitAssignment {
    std::uint64_t seed = 0;
    std::vector<SplitTag> tags;  // one per manifest entry

    std::vector<std::size_t> indices(SplitTag tag) const;
};

struct SplitCounts {
    std::size_t finetune = 0;
    std::size_t train = 0;
    std::size_t test = 0;
};

/// 20/50/30 largest-remainder apportionment of n samples; leftover units go
/// to the largest fractional parts, ties resolved finetune, train, test.
SplitCounts split_counts(std::size_t n);

/// Stratified per-class shuffle (classes in id order, one xoshiro256**
/// stream seeded by `seed`). Each class needs at least two entries.
SplitAssignment split_dataset(const DatasetManifest& manifest, std::uint64_t seed);

/// "SPLIT1 <count> <seed>" then "<tag>,<class_id>,<path>" per manifest entry.
std::string format_split(const SplitAssignment& split, const DatasetManifest& manifest);
void write_split(const std::filesystem::path& path, const SplitAssignment& split, const DatasetManifest& manifest);
SplitAssignment read_split(const std::filesystem::path& path);

struct ExtractOptions {
    CnParams params;
    std::size_t image_size = 128;
    bool normalize_hist = true;
    std::size_t threads = 0;  // 0 = hardware concurrency
    std::optional<std::filesystem::path> dump_feature_images;
};

/// Full global extractor for one image: resize, per-band graph measures,
/// ULBP histograms and concatenation. `features_out`, when given, receives
/// the per-band feature images.
GlobalFeatureVector extract_global(const ImageTensor& image, const ExtractOptions& options,
                                   std::vector<FeatureImages>* features_out = nullptr);

/// One record per manifest entry, in manifest order. Failures name the
/// offending image path.
LabeledVectors extract_features(const DatasetManifest& manifest, const ExtractOptions& options);

enum class ReduceMethod { None, Pca, Chi2 };

struct RunOptions {
    ExtractOptions extract;
    std::uint64_t seed = 42;
    std::optional<std::filesystem::path> local_vectors;
    ReduceMethod reduce = ReduceMethod::None;
    PcaSelector pca = VarianceThreshold{0.99};
    std::optional<std::size_t> chi2_k;  // defaults to the class count
    double svm_c = 1.0;
    double svm_gamma = 0.0;  // ignored by the linear kernel
    std::size_t repeats = 1;
    std::filesystem::path report;
    std::optional<std::filesystem::path> out_dir;  // defaults to the report's directory
};

struct RepeatResult {
    std::uint64_t seed = 0;
    SplitCounts sizes;
    std::size_t reduced_dim = 0;
    EvalReport eval;
};

struct RunResult {
    std::size_t feature_dim = 0;
    std::vector<RepeatResult> repeats;
    double mean_accuracy = 0.0;
};

/// split -> extract -> optional fuse -> optional reduce -> train -> evaluate,
/// repeated with seeds seed, seed + 1, ... Writes the text report, a JSON
/// report, confusion.csv, features.fvec, split.split, svm.model and (with
/// PCA) pca.model plus variance_curve.csv. Artifacts other than the report
/// summary describe the first repeat.
RunResult run_pipeline(const DatasetManifest& manifest, const RunOptions& options);

}  // namespace cntex
