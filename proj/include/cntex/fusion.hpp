#pragma once

#include "cntex/lbp.hpp"
#include "cntex/matrix.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cntex {

/// [global | local]; local may be absent, giving the global-only vector.
std::vector<double> fuse(const GlobalFeatureVector& global, std::optional<std::span<const double>> local);

/// A labelled set of equal-length vectors, as stored in FVEC1 files.
struct LabeledVectors {
    std::vector<int> labels;
    Matrix vectors;

    std::size_t count() const noexcept { return labels.size(); }
    std::size_t dim() const noexcept { return vectors.cols(); }
};

/// FVEC1 text: "FVEC1 <count> <dim>" then "<label> <v_0> ... <v_{dim-1}>" per
/// line, values printed with 17 significant digits.
void write_fvec(const std::filesystem::path& path, const LabeledVectors& set);
std::string format_fvec(const LabeledVectors& set);
LabeledVectors read_fvec(const std::filesystem::path& path);
LabeledVectors parse_fvec(const std::string& text);

}  // namespace cntex
