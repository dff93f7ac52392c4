#include "cntex/classify.hpp"

#include "cntex/error.hpp"
#include "cntex/rng.hpp"
#include "cntex/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cntex {

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

struct BinaryProblem {
    const Matrix& x;  // standardised samples
    std::span<const double> sq_norms;
    std::vector<double> y;
};

struct BinarySolution {
    std::vector<double> w;
    double b = 0.0;
    SvmTrace trace;
};

double duality_gap(const BinaryProblem& p, const BinarySolution& s, std::span<const double> alpha, double c) {
    const double reg = 0.5 * (dot(s.w, s.w) + s.b * s.b);
    double hinge = 0.0;
    for (std::size_t i = 0; i < p.y.size(); ++i)
        hinge += std::max(0.0, 1.0 - p.y[i] * (dot(s.w, p.x.row(i)) + s.b));
    const double primal = reg + c * hinge;
    const double dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - reg;
    return (primal - dual) / std::max(1.0, std::abs(primal));
}

// Dual coordinate descent for min 1/2 |(w, b)|^2 + C sum hinge(y_i (w.x_i + b)).
BinarySolution solve_binary(const BinaryProblem& p, const SvmOptions& opt) {
    const std::size_t n = p.y.size();
    const std::size_t d = p.x.cols();
    BinarySolution s;
    s.w.assign(d, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Xoshiro256 rng(opt.seed);

    for (std::size_t epoch = 1; epoch <= opt.max_epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t i : order) {
            const auto xi = p.x.row(i);
            const double grad = p.y[i] * (dot(s.w, xi) + s.b) - 1.0;
            double projected = grad;
            if (alpha[i] <= 0.0)
                projected = std::min(grad, 0.0);
            else if (alpha[i] >= opt.c)
                projected = std::max(grad, 0.0);
            if (std::abs(projected) <= 1e-12) continue;
            const double old = alpha[i];
            alpha[i] = std::clamp(old - grad / (p.sq_norms[i] + 1.0), 0.0, opt.c);
            const double step = (alpha[i] - old) * p.y[i];
            for (std::size_t j = 0; j < d; ++j) s.w[j] += step * xi[j];
            s.b += step;
        }
        s.trace.epochs = epoch;
        s.trace.duality_gap = duality_gap(p, s, alpha, opt.c);
        if (s.trace.duality_gap <= opt.gap_tolerance) break;
    }
    return s;
}

std::vector<double> standardize_row(const SvmModel& m, std::span<const double> x) {
    std::vector<double> out(m.dim);
    for (std::size_t j = 0; j < m.dim; ++j) out[j] = (x[j] - m.mean[j]) / m.stddev[j];
    return out;
}

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_double(values[i]);
    }
    return out;
}

std::vector<double> parse_values(std::string_view line, std::size_t expected) {
    const auto tokens = split_whitespace(line);
    if (tokens.size() != expected)
        throw Error(ErrorCode::MalformedRecord, "SVM1: expected " + std::to_string(expected) + " values per line");
    std::vector<double> out;
    for (auto t : tokens) {
        const auto v = parse_double(t);
        if (!v) throw Error(ErrorCode::MalformedRecord, "SVM1: bad number");
        out.push_back(*v);
    }
    return out;
}

}  // namespace

SvmModel svm_train(const Matrix& vectors, std::span<const int> labels, const SvmOptions& options,
                   std::vector<SvmTrace>* trace) {
    const std::size_t n = vectors.rows();
    const std::size_t d = vectors.cols();
    if (n == 0) throw Error(ErrorCode::EmptyData, "no training samples");
    if (labels.size() != n) throw Error(ErrorCode::LengthMismatch, "label count differs from sample count");
    if (std::any_of(labels.begin(), labels.end(), [](int l) { return l < 0; }))
        throw Error(ErrorCode::InvalidArgument, "negative class id");
    if (std::set<int>(labels.begin(), labels.end()).size() < 2)
        throw Error(ErrorCode::SingleClass, "training data holds a single class");
    if (!(options.c > 0.0)) throw Error(ErrorCode::InvalidArgument, "penalty C must be positive");

    SvmModel model;
    model.num_classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    model.dim = d;
    model.mean.assign(d, 0.0);
    model.stddev.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += vectors(i, j);
    for (auto& m : model.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = vectors(i, j) - model.mean[j];
            model.stddev[j] += diff * diff;
        }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(model.stddev[j] / static_cast<double>(n));
        // constant features (up to summation rounding) keep unit scale
        model.stddev[j] = sd > 1e-12 * std::max(1.0, std::abs(model.mean[j])) ? sd : 1.0;
    }

    Matrix x(n, d);
    std::vector<double> sq_norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = standardize_row(model, vectors.row(i));
        std::copy(row.begin(), row.end(), x.row(i).begin());
        sq_norms[i] = dot(row, row);
    }

    model.weights = Matrix(model.num_classes, d);
    model.bias.assign(model.num_classes, 0.0);
    if (trace) trace->clear();
    for (std::size_t c = 0; c < model.num_classes; ++c) {
        BinaryProblem problem{x, sq_norms, std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) problem.y[i] = labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
        auto sol = solve_binary(problem, options);
        std::copy(sol.w.begin(), sol.w.end(), model.weights.row(c).begin());
        model.bias[c] = sol.b;
        if (trace) trace->push_back(sol.trace);
    }
    return model;
}

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.dim)
        throw Error(ErrorCode::DimensionMismatch, "SVM model expects dimension " + std::to_string(model.dim) +
                                                      ", got " + std::to_string(x.size()));
    const auto xs = standardize_row(model, x);
    std::vector<double> scores(model.num_classes);
    for (std::size_t c = 0; c < model.num_classes; ++c) scores[c] = dot(model.weights.row(c), xs) + model.bias[c];
    return scores;
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& vectors) {
    if (vectors.cols() != model.dim && vectors.rows() > 0)
        throw Error(ErrorCode::DimensionMismatch, "SVM model expects dimension " + std::to_string(model.dim) +
                                                      ", got " + std::to_string(vectors.cols()));
    std::vector<int> out(vectors.rows());
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        const auto scores = svm_scores(model, vectors.row(i));
        // first maximum wins, so ties go to the lowest class id
        out[i] = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    }
    return out;
}

std::string format_svm_model(const SvmModel& model) {
    std::string out = "SVM1 " + std::to_string(model.num_classes) + " " + std::to_string(model.dim) + "\n";
    out += join(model.mean) + "\n";
    out += join(model.stddev) + "\n";
    for (std::size_t c = 0; c < model.num_classes; ++c) {
        out += join(model.weights.row(c));
        out += (model.dim ? " " : "") + format_double(model.bias[c]) + "\n";
    }
    return out;
}

SvmModel parse_svm_model(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty SVM1 input");
    const auto header = split_whitespace(lines.front());
    if (header.size() != 3 || header[0] != "SVM1") throw Error(ErrorCode::MalformedHeader, "expected 'SVM1 <C> <d>'");
    const auto classes = parse_int(header[1]);
    const auto dim = parse_int(header[2]);
    if (!classes || !dim || *classes < 1 || *dim < 1) throw Error(ErrorCode::MalformedHeader, "bad SVM1 dimensions");
    SvmModel m;
    m.num_classes = static_cast<std::size_t>(*classes);
    m.dim = static_cast<std::size_t>(*dim);
    if (lines.size() < m.num_classes + 3) throw Error(ErrorCode::MalformedHeader, "SVM1 file truncated");
    m.mean = parse_values(lines[1], m.dim);
    m.stddev = parse_values(lines[2], m.dim);
    m.weights = Matrix(m.num_classes, m.dim);
    m.bias.resize(m.num_classes);
    for (std::size_t c = 0; c < m.num_classes; ++c) {
        const auto row = parse_values(lines[3 + c], m.dim + 1);
        std::copy(row.begin(), row.end() - 1, m.weights.row(c).begin());
        m.bias[c] = row.back();
    }
    return m;
}

void write_svm_model(const std::filesystem::path& path, const SvmModel& model) {
    write_text_file(path.string(), format_svm_model(model));
}

SvmModel read_svm_model(const std::filesystem::path& path) { return parse_svm_model(read_text_file(path.string())); }

EvalReport evaluate(std::span<const int> predicted, std::span<const int> truth, std::size_t num_classes) {
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::LengthMismatch, "prediction count differs from truth count");
    if (truth.empty()) throw Error(ErrorCode::EmptyData, "nothing to evaluate");
    EvalReport r;
    r.counts = Matrix(num_classes, num_classes);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= num_classes ||
            static_cast<std::size_t>(predicted[i]) >= num_classes)
            throw Error(ErrorCode::InvalidArgument, "class id outside [0, " + std::to_string(num_classes) + ")");
        r.counts(static_cast<std::size_t>(truth[i]), static_cast<std::size_t>(predicted[i])) += 1.0;
        correct += truth[i] == predicted[i];
    }
    r.overall_accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    r.confusion = r.counts;
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto row = r.confusion.row(c);
        const double total = std::accumulate(row.begin(), row.end(), 0.0);
        if (total > 0.0)
            for (auto& v : row) v /= total;
    }
    return r;
}

}  // namespace cntex
