#pragma once

#include "cntex/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cntex {

struct SvmOptions {
    double c = 1.0;
    std::uint64_t seed = 0;
    double gap_tolerance = 1e-4;
    /// Coordinate updates allowed per binary problem, as a multiple of n.
    std::size_t max_epochs = 10 * 1000;
    /// Accepted for parity with kernel SVM front ends; unused by the linear kernel.
    double gamma = 0.0;
};

/// One-vs-rest linear SVM over standardised features.
struct SvmModel {
    std::size_t num_classes = 0;
    std::size_t dim = 0;
    std::vector<double> mean;
    std::vector<double> stddev;
    Matrix weights;            // num_classes x dim
    std::vector<double> bias;  // num_classes
};

/// Per-class training diagnostics.
struct SvmTrace {
    std::size_t epochs = 0;
    double duality_gap = 0.0;
};

/// Trains one binary L1-loss SVM per class by dual coordinate descent. The
/// bias is learned as the weight of a constant unit feature. Coordinates are
/// visited in a per-epoch shuffle drawn from `seed`; every class problem
/// uses the same shuffle stream.
SvmModel svm_train(const Matrix& vectors, std::span<const int> labels, const SvmOptions& options = {},
                   std::vector<SvmTrace>* trace = nullptr);

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x);
std::vector<int> svm_predict(const SvmModel& model, const Matrix& vectors);

std::string format_svm_model(const SvmModel& model);
SvmModel parse_svm_model(const std::string& text);
void write_svm_model(const std::filesystem::path& path, const SvmModel& model);
SvmModel read_svm_model(const std::filesystem::path& path);

struct EvalReport {
    double overall_accuracy = 0.0;
    Matrix counts;     // rows = true class, columns = predicted class
    Matrix confusion;  // counts with each non-empty row scaled to sum 1
};

EvalReport evaluate(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes);

}  // namespace cntex
