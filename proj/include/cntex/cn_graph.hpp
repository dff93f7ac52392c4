#pragma once

#include "cntex/image.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cntex {

/// Search radius (pixels) and similarity threshold of the pixel-graph mapping.
struct CnParams {
    double radius = 3.0;
    double threshold = 0.315;

    /// Throws InvalidArgument unless radius > 0 and 0 < threshold <= 1.
    void validate() const;
};

using NodeId = std::uint32_t;

/// Undirected simple graph in compressed sparse row form. Every neighbour
/// list is sorted ascending and each edge is stored in both directions.
class PixelGraph {
public:
    PixelGraph() = default;

    /// Builds a graph from an unordered edge list. Duplicate edges collapse,
    /// self-loops are rejected.
    static PixelGraph from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(std::size_t i) const noexcept {
        return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
    bool has_edge(std::size_t i, std::size_t j) const noexcept;

    bool operator==(const PixelGraph&) const = default;

private:
    friend PixelGraph build_graph(const Band& band, const CnParams& params);

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Euclidean distance between pixels i and j (row-major indices, row width `width`).
double pixel_distance(std::size_t i, std::size_t j, std::size_t width) noexcept;

/// Similarity weight of a candidate pair; nullopt when the pair is not a
/// candidate (distance zero or beyond the radius).
std::optional<double> edge_weight(double distance, double intensity_delta, double radius) noexcept;

/// Connects pixels that lie within the radius and whose weight does not
/// exceed the threshold. Only the upper half of the offset window is
/// scanned; each accepted pair is mirrored.
PixelGraph build_graph(const Band& band, const CnParams& params);

}  // namespace cntex
