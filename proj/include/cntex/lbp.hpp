#pragma once

#include "cntex/cn_measures.hpp"
#include "cntex/image.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cntex {

inline constexpr std::size_t kLbpNeighbors = 8;
inline constexpr std::size_t kUlbpBins = 59;
inline constexpr std::size_t kNonUniformBin = kUlbpBins - 1;

/// Ring offsets (dx, dy), counter-clockwise from the right neighbour with y
/// growing downwards: right, up-right, up, up-left, left, down-left, down,
/// down-right. Bit p of a code belongs to kRing[p].
inline constexpr std::array<std::array<int, 2>, kLbpNeighbors> kRing{{
    {{1, 0}}, {{1, -1}}, {{0, -1}}, {{-1, -1}}, {{-1, 0}}, {{-1, 1}}, {{0, 1}}, {{1, 1}},
}};

/// Circular 0/1 transition count of an 8-bit code.
constexpr int uniformity(std::uint8_t code) noexcept {
    int transitions = 0;
    for (int p = 0; p < 8; ++p) {
        const int cur = (code >> p) & 1;
        const int prev = (code >> ((p + 7) % 8)) & 1;
        transitions += cur != prev;
    }
    return transitions;
}

/// Maps the 58 uniform codes (U <= 2) to bins 0..57 in ascending code
/// order and every other code to bin 58.
class UlbpTable {
public:
    constexpr UlbpTable() noexcept {
        std::uint8_t next = 0;
        for (int code = 0; code < 256; ++code) {
            bins_[code] = uniformity(static_cast<std::uint8_t>(code)) <= 2 ? next++ : kNonUniformBin;
        }
    }

    constexpr std::uint8_t bin_of(std::uint8_t code) const noexcept { return bins_[code]; }

private:
    std::array<std::uint8_t, 256> bins_{};
};

inline constexpr UlbpTable kUlbpTable{};

using UlbpHistogram = std::array<double, kUlbpBins>;

/// 8-neighbour LBP code of an interior pixel; BorderPixel otherwise.
std::uint8_t lbp_code(const Band& band, std::size_t y, std::size_t x);

/// Histogram of interior-pixel ULBP bins, (M-2)(N-2) counts in total before
/// the optional L1 normalisation.
UlbpHistogram ulbp_histogram(const Band& band, const UlbpTable& table = kUlbpTable, bool normalize = true);

/// Layout: [BI bands | CC bands | DC bands | EC bands], 59 bins per band.
struct GlobalFeatureVector {
    std::size_t bands = 0;
    std::vector<double> values;
};

GlobalFeatureVector global_vector(const ImageTensor& bands, std::span<const FeatureImages> features,
                                  bool normalize = true);

}  // namespace cntex
