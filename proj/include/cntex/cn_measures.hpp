#pragma once

#include "cntex/cn_graph.hpp"
#include "cntex/image.hpp"

#include <cstddef>
#include <vector>

namespace cntex {

/// Fraction of realised edges among the neighbours of node i; 0 when the
/// node has fewer than two neighbours.
double clustering_coefficient(const PixelGraph& g, std::size_t i);

/// Squared degree normalised by the largest possible degree (n - 1).
double degree_centrality(const PixelGraph& g, std::size_t i);

struct EigenSolverOptions {
    /// Stop once the estimated residual of the L1-normalised vector drops
    /// below this.
    double tolerance = 1e-10;
    /// Hitting the step cap is only an error above this residual.
    double residual_tolerance = 1e-6;
    int max_iterations = 1000;
};

struct EigenvectorCentrality {
    std::vector<double> perron;   // (A u) / lambda for the L1-normalised dominant eigenvector u
    std::vector<double> entropy;  // -z log2 z with z = (A u)_i / lambda
    double eigenvalue = 0.0;
    double residual = 0.0;        // max_i |(A u)_i - lambda u_i|
    int iterations = 0;
};

/// Dominant eigenvector reached from the uniform start: the limit of power
/// iteration, computed by Lanczos steps (max_iterations caps their number).
/// Edgeless graphs give all zeros. Throws ConvergenceFailure when the cap is
/// reached with a residual above `residual_tolerance`.
EigenvectorCentrality eigenvector_centrality(const PixelGraph& g, const EigenSolverOptions& opts = {});

struct CentralityMaps {
    ScalarMap cc;
    ScalarMap dc;
    ScalarMap ec;
};

CentralityMaps centrality_maps(const PixelGraph& g, std::size_t height, std::size_t width);

/// Quantised CC, DC and EC images of one band, in that order.
struct FeatureImages {
    Band cc;
    Band dc;
    Band ec;
};

FeatureImages feature_images(const Band& band, const CnParams& params);

}  // namespace cntex
