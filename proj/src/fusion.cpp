#include "cntex/fusion.hpp"

#include "cntex/error.hpp"
#include "cntex/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cntex {

std::vector<double> fuse(const GlobalFeatureVector& global, std::optional<std::span<const double>> local) {
    std::vector<double> out(global.values.begin(), global.values.end());
    if (!local) return out;
    if (!std::all_of(local->begin(), local->end(), [](double v) { return std::isfinite(v); }))
        throw Error(ErrorCode::NonFiniteLocal, "local feature vector contains NaN or Inf");
    out.insert(out.end(), local->begin(), local->end());
    return out;
}

std::string format_fvec(const LabeledVectors& set) {
    if (set.vectors.rows() != set.labels.size())
        throw Error(ErrorCode::LengthMismatch, "label count differs from vector count");
    std::string out = "FVEC1 " + std::to_string(set.count()) + " " + std::to_string(set.dim()) + "\n";
    for (std::size_t r = 0; r < set.count(); ++r) {
        out += std::to_string(set.labels[r]);
        for (double v : set.vectors.row(r)) {
            out += ' ';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_fvec(const std::filesystem::path& path, const LabeledVectors& set) {
    write_text_file(path.string(), format_fvec(set));
}

LabeledVectors parse_fvec(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty FVEC1 input");
    const auto header = split_whitespace(lines.front());
    if (header.size() != 3 || header[0] != "FVEC1") throw Error(ErrorCode::MalformedHeader, "expected 'FVEC1 <count> <dim>'");
    const auto count = parse_int(header[1]);
    const auto dim = parse_int(header[2]);
    if (!count || !dim || *count < 0 || *dim < 0) throw Error(ErrorCode::MalformedHeader, "bad count or dim in header");

    LabeledVectors set;
    set.vectors = Matrix(static_cast<std::size_t>(*count), static_cast<std::size_t>(*dim));
    set.labels.reserve(static_cast<std::size_t>(*count));
    std::size_t record = 0;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const auto tokens = split_whitespace(lines[ln]);
        if (tokens.empty()) continue;
        if (record >= static_cast<std::size_t>(*count))
            throw Error(ErrorCode::MalformedHeader, "more records than the header count " + std::to_string(*count));
        if (tokens.size() != static_cast<std::size_t>(*dim) + 1)
            throw Error(ErrorCode::RecordDimMismatch, "line " + std::to_string(ln + 1) + " has " +
                                                          std::to_string(tokens.size() - 1) + " values, expected " +
                                                          std::to_string(*dim));
        const auto label = parse_int(tokens[0]);
        if (!label) throw Error(ErrorCode::MalformedRecord, "bad label on line " + std::to_string(ln + 1));
        set.labels.push_back(static_cast<int>(*label));
        auto row = set.vectors.row(record);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto v = parse_double(tokens[c + 1]);
            if (!v) throw Error(ErrorCode::MalformedRecord, "bad value on line " + std::to_string(ln + 1));
            row[c] = *v;
        }
        ++record;
    }
    if (record != static_cast<std::size_t>(*count))
        throw Error(ErrorCode::MalformedHeader, "header promises " + std::to_string(*count) + " records, found " +
                                                    std::to_string(record));
    return set;
}

LabeledVectors read_fvec(const std::filesystem::path& path) { return parse_fvec(read_text_file(path.string())); }

}  // namespace cntex
