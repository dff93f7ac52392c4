#include "cntex/cn_graph.hpp"
#include "cntex/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cntex;

TEST_CASE("pixel_distance") {
    // width 10: (0,0) is index 0, (3,4) is index 43
    CHECK(pixel_distance(0, 43, 10) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(pixel_distance(43, 0, 10) == pixel_distance(0, 43, 10));
    CHECK(pixel_distance(17, 17, 10) == 0.0);
    CHECK(pixel_distance(0, 11, 10) == doctest::Approx(1.41421356).epsilon(1e-9));
}

TEST_CASE("edge_weight") {
    CHECK(*edge_weight(3.0, 0.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*edge_weight(3.0, 255.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*edge_weight(1.0, 0.0, 3.0) == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
    CHECK_FALSE(edge_weight(3.0001, 0.0, 3.0).has_value());
    CHECK_FALSE(edge_weight(0.0, 0.0, 3.0).has_value());
}

TEST_CASE("3x3 constant band") {
    const Band band(3, 3, 90);
    const auto g = build_graph(band, {});
    CHECK(g.node_count() == 9);
    CHECK(g.degree(4) == 8);
    for (std::size_t corner : {0u, 2u, 6u, 8u}) CHECK(g.degree(corner) == 7);
    // opposite corner: d = 2 sqrt 2, w = 8/18 > 0.315
    CHECK_FALSE(g.has_edge(0, 8));
    CHECK_FALSE(g.has_edge(2, 6));
    // edge midpoints see everything
    for (std::size_t mid : {1u, 3u, 5u, 7u}) CHECK(g.degree(mid) == 8);
    CHECK(oracle::edges_of(g) == oracle::all_pairs_edges(band, 3.0, 0.315));
}

TEST_CASE("1x2 bands") {
    const auto far = build_graph(Band(1, 2, {0, 255}), {});
    CHECK(far.edge_count() == 0);
    const auto near = build_graph(Band(1, 2, {0, 0}), {});
    CHECK(near.edge_count() == 1);
    CHECK(near.degree(0) == 1);
    CHECK(near.degree(1) == 1);
}

TEST_CASE("build_graph errors") {
    CHECK_THROWS_AS(build_graph(Band(1, 1, 0), {}), Error);
    try {
        build_graph(Band(1, 1, 0), {});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyImage);
    }
    CHECK_THROWS_AS(build_graph(Band(3, 3, 0), {3.0, 0.0}), Error);
    CHECK_THROWS_AS(build_graph(Band(3, 3, 0), {-1.0, 0.3}), Error);
    CHECK_THROWS_AS(build_graph(Band(3, 3, 0), {3.0, 1.5}), Error);
}

TEST_CASE("structural invariants on random bands") {
    Xoshiro256 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t h = 2 + rng.below(14), w = 2 + rng.below(14);
        const auto band = oracle::random_band(h, w, rng, trial % 2 ? 256 : 8);
        const CnParams params{1.0 + rng.uniform() * 3.0, 0.05 + rng.uniform() * 0.6};
        const auto g = build_graph(band, params);

        std::vector<std::size_t> column_degree(g.node_count(), 0);
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            const auto nb = g.neighbors(i);
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            for (auto j : nb) {
                REQUIRE(j != i);
                REQUIRE(g.has_edge(j, i));
                const double d = pixel_distance(i, j, w);
                CHECK(d > 0.0);
                CHECK(d <= params.radius);
                const double di = std::abs(int(band.pixels[i]) - int(band.pixels[j]));
                CHECK(*edge_weight(d, di, params.radius) <= params.threshold);
                ++column_degree[j];
            }
        }
        for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(column_degree[i] == g.degree(i));
        CHECK(oracle::edges_of(g) == oracle::all_pairs_edges(band, params.radius, params.threshold));
    }
}

TEST_CASE("max degree with r = 3 is bounded by the 28 lattice points") {
    // t = 1 admits every pair within the radius
    const auto g = build_graph(Band(16, 16, 0), {3.0, 1.0});
    std::size_t max_degree = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) max_degree = std::max(max_degree, g.degree(i));
    CHECK(max_degree == 28);

    Xoshiro256 rng(5);
    const auto noisy = build_graph(oracle::random_band(20, 20, rng), {});
    for (std::size_t i = 0; i < noisy.node_count(); ++i) CHECK(noisy.degree(i) <= 28);
}

TEST_CASE("adding a constant intensity leaves the graph unchanged") {
    Xoshiro256 rng(9);
    Band band(12, 12);
    for (auto& p : band.pixels) p = static_cast<std::uint8_t>(rng.below(200));
    Band shifted = band;
    for (auto& p : shifted.pixels) p = static_cast<std::uint8_t>(p + 55);
    CHECK(build_graph(band, {}) == build_graph(shifted, {}));
}

TEST_CASE("deterministic construction") {
    Xoshiro256 rng(10);
    const auto band = oracle::random_band(32, 24, rng);
    CHECK(build_graph(band, {}) == build_graph(band, {}));
}

TEST_CASE("from_edges collapses duplicates and rejects self-loops") {
    std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 0}, {1, 2}};
    const auto g = PixelGraph::from_edges(3, edges);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
    CHECK_THROWS_AS(PixelGraph::from_edges(3, loop), Error);
}
