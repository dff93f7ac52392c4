#include "cntex/lbp.hpp"

#include "cntex/error.hpp"

#include <string>

namespace cntex {

namespace {

inline std::uint8_t code_at(const Band& band, std::size_t y, std::size_t x) noexcept {
    const int centre = band.at(y, x);
    unsigned code = 0;
    for (std::size_t p = 0; p < kLbpNeighbors; ++p) {
        const auto ny = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(y) + kRing[p][1]);
        const auto nx = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(x) + kRing[p][0]);
        if (band.at(ny, nx) > centre) code |= 1u << p;
    }
    return static_cast<std::uint8_t>(code);
}

void append(std::vector<double>& out, const UlbpHistogram& h) { out.insert(out.end(), h.begin(), h.end()); }

}  // namespace

std::uint8_t lbp_code(const Band& band, std::size_t y, std::size_t x) {
    if (y < 1 || x < 1 || y + 1 >= band.height || x + 1 >= band.width)
        throw Error(ErrorCode::BorderPixel,
                    "pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") has no full 8-neighbour ring");
    return code_at(band, y, x);
}

UlbpHistogram ulbp_histogram(const Band& band, const UlbpTable& table, bool normalize) {
    if (band.height < 3 || band.width < 3) throw Error(ErrorCode::ImageTooSmall, "ULBP needs at least 3x3 pixels");
    UlbpHistogram h{};
    for (std::size_t y = 1; y + 1 < band.height; ++y)
        for (std::size_t x = 1; x + 1 < band.width; ++x) h[table.bin_of(code_at(band, y, x))] += 1.0;
    if (normalize) {
        const double total = static_cast<double>((band.height - 2) * (band.width - 2));
        for (auto& v : h) v /= total;
    }
    return h;
}

GlobalFeatureVector global_vector(const ImageTensor& bands, std::span<const FeatureImages> features, bool normalize) {
    const std::size_t b_count = bands.bands();
    if (features.size() != b_count)
        throw Error(ErrorCode::BandMismatch, std::to_string(features.size()) + " feature sets for " +
                                                 std::to_string(b_count) + " bands");
    for (const auto& f : features) {
        for (const Band* img : {&f.cc, &f.dc, &f.ec})
            if (img->height != bands.height() || img->width != bands.width())
                throw Error(ErrorCode::BandMismatch, "feature image size differs from band size");
    }

    GlobalFeatureVector out;
    out.bands = b_count;
    out.values.reserve(b_count * kUlbpBins * 4);
    for (std::size_t b = 0; b < b_count; ++b) append(out.values, ulbp_histogram(bands.band(b), kUlbpTable, normalize));
    for (const auto& f : features) append(out.values, ulbp_histogram(f.cc, kUlbpTable, normalize));
    for (const auto& f : features) append(out.values, ulbp_histogram(f.dc, kUlbpTable, normalize));
    for (const auto& f : features) append(out.values, ulbp_histogram(f.ec, kUlbpTable, normalize));
    return out;
}

}  // namespace cntex
