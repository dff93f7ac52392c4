#include "cntex/cn_graph.hpp"

#include "cntex/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace cntex {

namespace {

struct Offset {
    std::ptrdiff_t dy;
    std::ptrdiff_t dx;
    double distance;
};

// Offsets of the half window that follow the current pixel in row-major
// order, ordered so that target indices increase.
std::vector<Offset> forward_offsets(double radius) {
    const auto reach = static_cast<std::ptrdiff_t>(std::floor(radius));
    std::vector<Offset> out;
    for (std::ptrdiff_t dy = 0; dy <= reach; ++dy) {
        for (std::ptrdiff_t dx = -reach; dx <= reach; ++dx) {
            if (dy == 0 && dx <= 0) continue;
            const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy));
            if (d <= radius) out.push_back({dy, dx, d});
        }
    }
    return out;
}

void assemble_csr(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges, std::vector<std::size_t>& offsets,
                  std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& [a, b] : edges) {
        ++offsets[a + 1];
        ++offsets[b + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.assign(offsets[n], 0);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [a, b] : edges) {
        targets[cursor[a]++] = b;
        targets[cursor[b]++] = a;
    }
    for (std::size_t i = 0; i < n; ++i) std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
}

}  // namespace

void CnParams::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorCode::InvalidArgument, "radius must be positive, got " + std::to_string(radius));
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1], got " + std::to_string(threshold));
}

PixelGraph PixelGraph::from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::pair<NodeId, NodeId>> canon;
    canon.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop on node " + std::to_string(a));
        if (a >= node_count || b >= node_count) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
        canon.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    PixelGraph g;
    assemble_csr(node_count, canon, g.offsets_, g.targets_);
    return g;
}

bool PixelGraph::has_edge(std::size_t i, std::size_t j) const noexcept {
    const auto row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), static_cast<NodeId>(j));
}

double pixel_distance(std::size_t i, std::size_t j, std::size_t width) noexcept {
    const auto yi = static_cast<std::ptrdiff_t>(i / width), xi = static_cast<std::ptrdiff_t>(i % width);
    const auto yj = static_cast<std::ptrdiff_t>(j / width), xj = static_cast<std::ptrdiff_t>(j % width);
    const auto dx = xi - xj, dy = yi - yj;
    return std::sqrt(static_cast<double>(dx * dx + dy * dy));
}

std::optional<double> edge_weight(double distance, double intensity_delta, double radius) noexcept {
    if (distance <= 0.0 || distance > radius) return std::nullopt;
    return (distance * distance + radius * radius * intensity_delta / 255.0) / (2.0 * radius * radius);
}

PixelGraph build_graph(const Band& band, const CnParams& params) {
    params.validate();
    const std::size_t n = band.height * band.width;
    if (n < 2) throw Error(ErrorCode::EmptyImage, "pixel graph needs at least two pixels");
    if (n > std::numeric_limits<NodeId>::max()) throw Error(ErrorCode::InvalidArgument, "band too large");

    const auto offsets = forward_offsets(params.radius);
    const auto height = static_cast<std::ptrdiff_t>(band.height);
    const auto width = static_cast<std::ptrdiff_t>(band.width);

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(n * offsets.size() / 2);
    for (std::ptrdiff_t y = 0; y < height; ++y) {
        for (std::ptrdiff_t x = 0; x < width; ++x) {
            const int centre = band.pixels[static_cast<std::size_t>(y * width + x)];
            for (const auto& o : offsets) {
                const auto ny = y + o.dy, nx = x + o.dx;
                if (ny >= height || nx < 0 || nx >= width) continue;
                const auto j = static_cast<std::size_t>(ny * width + nx);
                const double delta = std::abs(centre - static_cast<int>(band.pixels[j]));
                const auto w = edge_weight(o.distance, delta, params.radius);
                if (w && *w <= params.threshold)
                    edges.emplace_back(static_cast<NodeId>(y * width + x), static_cast<NodeId>(j));
            }
        }
    }

    PixelGraph g;
    assemble_csr(n, edges, g.offsets_, g.targets_);
    return g;
}

}  // namespace cntex
