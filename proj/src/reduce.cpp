#include "cntex/reduce.hpp"

#include "cntex/error.hpp"
#include "cntex/text_format.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cntex {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_double(values[i]);
    }
    out += '\n';
    return out;
}

std::vector<double> parse_values(std::string_view line, std::size_t expected, const char* what) {
    const auto tokens = split_whitespace(line);
    if (tokens.size() != expected)
        throw Error(ErrorCode::MalformedRecord, std::string(what) + ": expected " + std::to_string(expected) + " values");
    std::vector<double> out;
    out.reserve(expected);
    for (auto t : tokens) {
        const auto v = parse_double(t);
        if (!v) throw Error(ErrorCode::MalformedRecord, std::string(what) + ": bad number");
        out.push_back(*v);
    }
    return out;
}

}  // namespace

PcaFit pca_fit(const Matrix& vectors, const PcaSelector& selector) {
    const std::size_t n = vectors.rows();
    const std::size_t d = vectors.cols();
    if (n < 2) throw Error(ErrorCode::DegenerateData, "PCA needs at least two samples");
    if (d < 1) throw Error(ErrorCode::DegenerateData, "PCA needs at least one feature");
    if (const auto* thr = std::get_if<VarianceThreshold>(&selector); thr && !(thr->tau > 0.0 && thr->tau <= 1.0))
        throw Error(ErrorCode::InvalidThreshold, "variance threshold must lie in (0, 1]");

    const auto x = view(vectors);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const Eigen::MatrixXd& v = svd.matrixV();

    const double total = sv.squaredNorm();
    if (!(total > 0.0)) throw Error(ErrorCode::DegenerateData, "all samples are identical");

    PcaFit fit;
    fit.spectrum.resize(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) fit.spectrum[static_cast<std::size_t>(i)] = sv[i] * sv[i] / total;

    std::size_t k = 0;
    if (const auto* count = std::get_if<ComponentCount>(&selector)) {
        k = count->k;
    } else {
        const double tau = std::get<VarianceThreshold>(selector).tau;
        double cumulative = 0.0;
        k = fit.spectrum.size();
        for (std::size_t i = 0; i < fit.spectrum.size(); ++i) {
            cumulative += fit.spectrum[i];
            if (cumulative >= tau - 1e-12) {
                k = i + 1;
                break;
            }
        }
    }
    k = std::min({k, n - 1, d});
    if (k == 0) throw Error(ErrorCode::BadK, "PCA must retain at least one component");

    PcaModel& model = fit.model;
    model.mean.assign(mean.data(), mean.data() + d);
    model.components = Matrix(k, d);
    model.explained_variance_ratio.assign(fit.spectrum.begin(), fit.spectrum.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t c = 0; c < k; ++c) {
        const auto col = v.col(static_cast<Eigen::Index>(c));
        Eigen::Index pivot = 0;
        col.cwiseAbs().maxCoeff(&pivot);
        const double sign = col[pivot] < 0.0 ? -1.0 : 1.0;
        auto row = model.components.row(c);
        for (std::size_t j = 0; j < d; ++j) row[j] = sign * col[static_cast<Eigen::Index>(j)];
    }
    return fit;
}

Matrix pca_transform(const PcaModel& model, const Matrix& vectors) {
    if (vectors.cols() != model.dim())
        throw Error(ErrorCode::DimensionMismatch, "PCA model expects dimension " + std::to_string(model.dim()) +
                                                      ", got " + std::to_string(vectors.cols()));
    const Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(model.dim()));
    const RowMajor projected = (view(vectors).rowwise() - mean) * view(model.components).transpose();
    Matrix out(vectors.rows(), model.k());
    std::copy(projected.data(), projected.data() + projected.size(), out.data().begin());
    return out;
}

std::string format_pca_model(const PcaModel& model) {
    std::string out = "PCA1 " + std::to_string(model.dim()) + " " + std::to_string(model.k()) + "\n";
    out += join(model.mean);
    for (std::size_t c = 0; c < model.k(); ++c) out += join(model.components.row(c));
    out += join(model.explained_variance_ratio);
    return out;
}

PcaModel parse_pca_model(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty PCA1 input");
    const auto header = split_whitespace(lines.front());
    if (header.size() != 3 || header[0] != "PCA1") throw Error(ErrorCode::MalformedHeader, "expected 'PCA1 <d> <k>'");
    const auto d = parse_int(header[1]);
    const auto k = parse_int(header[2]);
    if (!d || !k || *d < 1 || *k < 0) throw Error(ErrorCode::MalformedHeader, "bad PCA1 dimensions");
    const auto dim = static_cast<std::size_t>(*d);
    const auto comps = static_cast<std::size_t>(*k);
    if (lines.size() < comps + 3) throw Error(ErrorCode::MalformedHeader, "PCA1 file truncated");

    PcaModel model;
    model.mean = parse_values(lines[1], dim, "mean");
    model.components = Matrix(comps, dim);
    for (std::size_t c = 0; c < comps; ++c) {
        const auto row = parse_values(lines[2 + c], dim, "component");
        std::copy(row.begin(), row.end(), model.components.row(c).begin());
    }
    model.explained_variance_ratio = parse_values(lines[2 + comps], comps, "ratio");
    return model;
}

void write_pca_model(const std::filesystem::path& path, const PcaModel& model) {
    write_text_file(path.string(), format_pca_model(model));
}

PcaModel read_pca_model(const std::filesystem::path& path) { return parse_pca_model(read_text_file(path.string())); }

Chi2Selector chi2_select(const Matrix& vectors, std::span<const int> labels, std::size_t k) {
    const std::size_t n = vectors.rows();
    const std::size_t d = vectors.cols();
    if (labels.size() != n) throw Error(ErrorCode::LengthMismatch, "label count differs from sample count");
    if (n == 0) throw Error(ErrorCode::EmptyData, "chi-square selection on empty data");
    if (k > d || k == 0) throw Error(ErrorCode::BadK, "k must lie in [1, " + std::to_string(d) + "]");
    if (std::any_of(vectors.data().begin(), vectors.data().end(), [](double v) { return v < 0.0; }))
        throw Error(ErrorCode::NegativeFeature, "chi-square selection needs non-negative features");
    if (std::any_of(labels.begin(), labels.end(), [](int l) { return l < 0; }))
        throw Error(ErrorCode::InvalidArgument, "negative class id");

    const std::size_t classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    Matrix observed(classes, d);
    std::vector<double> class_count(classes, 0.0);
    std::vector<double> feature_total(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        class_count[c] += 1.0;
        const auto row = vectors.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            observed(c, j) += row[j];
            feature_total[j] += row[j];
        }
    }

    Chi2Selector sel;
    sel.scores.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double score = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            const double expected = class_count[c] / static_cast<double>(n) * feature_total[j];
            if (expected > 0.0) {
                const double diff = observed(c, j) - expected;
                score += diff * diff / expected;
            }
        }
        sel.scores[j] = score;
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sel.scores[a] > sel.scores[b]; });
    sel.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(sel.selected.begin(), sel.selected.end());
    return sel;
}

Matrix chi2_apply(const Chi2Selector& selector, const Matrix& vectors) {
    if (vectors.cols() != selector.scores.size())
        throw Error(ErrorCode::DimensionMismatch, "chi-square selector fitted on a different dimension");
    return vectors.select_cols(selector.selected);
}

}  // namespace cntex
