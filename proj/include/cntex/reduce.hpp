#pragma once

#include "cntex/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cntex {

struct ComponentCount {
    std::size_t k;
};

/// Keep the smallest number of components whose cumulative explained
/// variance ratio reaches `tau`, with tau in (0, 1].
struct VarianceThreshold {
    double tau = 0.99;
};

using PcaSelector = std::variant<ComponentCount, VarianceThreshold>;

struct PcaModel {
    std::vector<double> mean;
    Matrix components;  // k x d, orthonormal rows, decreasing variance
    std::vector<double> explained_variance_ratio;

    std::size_t dim() const noexcept { return mean.size(); }
    std::size_t k() const noexcept { return components.rows(); }
};

struct PcaFit {
    PcaModel model;
    /// Ratio of every available component (min(n, d) of them), not only the
    /// retained ones; feeds the cumulative-variance curve.
    std::vector<double> spectrum;
};

PcaFit pca_fit(const Matrix& vectors, const PcaSelector& selector = VarianceThreshold{});
Matrix pca_transform(const PcaModel& model, const Matrix& vectors);

std::string format_pca_model(const PcaModel& model);
PcaModel parse_pca_model(const std::string& text);
void write_pca_model(const std::filesystem::path& path, const PcaModel& model);
PcaModel read_pca_model(const std::filesystem::path& path);

struct Chi2Selector {
    std::vector<double> scores;
    std::vector<std::size_t> selected;  // ascending
};

/// Chi-square between per-class feature sums and the sums expected if the
/// feature were independent of the class. Features must be non-negative.
/// Labels are class ids 0..C-1.
Chi2Selector chi2_select(const Matrix& vectors, std::span<const int> labels, std::size_t k);
Matrix chi2_apply(const Chi2Selector& selector, const Matrix& vectors);

}  // namespace cntex
