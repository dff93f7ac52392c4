#include "cntex/cn_measures.hpp"

#include "cntex/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace cntex {

namespace {

std::size_t count_common(std::span<const NodeId> a, std::span<const NodeId> b) noexcept {
    std::size_t common = 0;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return common;
}

void adjacency_product(const PixelGraph& g, std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (NodeId j : g.neighbors(i)) acc += x[j];
        y[i] = acc;
    }
}

double entropy_term(double u) noexcept { return u > 0.0 ? -u * std::log2(u) : 0.0; }

}  // namespace

double clustering_coefficient(const PixelGraph& g, std::size_t i) {
    const auto nbrs = g.neighbors(i);
    const std::size_t k = nbrs.size();
    if (k < 2) return 0.0;
    std::size_t twice_links = 0;
    for (NodeId j : nbrs) twice_links += count_common(nbrs, g.neighbors(j));
    // each link between two neighbours is seen from both ends
    return static_cast<double>(twice_links) / static_cast<double>(k * (k - 1));
}

double degree_centrality(const PixelGraph& g, std::size_t i) {
    if (g.node_count() < 2) throw Error(ErrorCode::SingleNodeGraph, "degree centrality needs at least two nodes");
    const double ratio = static_cast<double>(g.degree(i)) / static_cast<double>(g.node_count() - 1);
    return ratio * ratio;
}

EigenvectorCentrality eigenvector_centrality(const PixelGraph& g, const EigenSolverOptions& opts) {
    const std::size_t n = g.node_count();
    EigenvectorCentrality out;
    out.perron.assign(n, 0.0);
    out.entropy.assign(n, 0.0);
    if (n == 0 || g.edge_count() == 0) return out;

    // Lanczos with full reorthogonalisation from the uniform vector. The
    // Krylov space of the uniform start holds exactly the direction power
    // iteration converges to, so both share the same limit.
    const auto cap = static_cast<Eigen::Index>(std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.max_iterations, 1)), n));
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd basis(rows, std::min<Eigen::Index>(cap + 1, 64));
    basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> alpha, beta;
    Eigen::VectorXd z(rows), ritz(rows), h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    bool converged = false;
    Eigen::Index m = 0;
    for (Eigen::Index j = 0; j < cap; ++j) {
        adjacency_product(g, {basis.col(j).data(), n}, {z.data(), n});
        alpha.push_back(basis.col(j).dot(z));
        for (int pass = 0; pass < 2; ++pass) {
            h.noalias() = basis.leftCols(j + 1).transpose() * z;
            z.noalias() -= basis.leftCols(j + 1) * h;
        }
        const double b = z.norm();
        m = j + 1;
        const bool exhausted = b <= 1e-12 * std::max(1.0, std::abs(alpha.front()));
        if (exhausted || m % 5 == 0 || m == cap) {
            const Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), m);
            const Eigen::Map<const Eigen::VectorXd> sub(beta.data(), m - 1);
            tri.computeFromTridiagonal(diag, sub);
            const auto s = tri.eigenvectors().col(m - 1);
            ritz.noalias() = basis.leftCols(m) * s;
            // residual of the L1-normalised Ritz vector
            const double estimate = b * std::abs(s(m - 1)) / ritz.lpNorm<1>();
            if (exhausted || estimate <= opts.tolerance) {
                converged = true;
                break;
            }
        }
        if (m == cap) break;
        if (basis.cols() < m + 1) basis.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(cap + 1, 2 * basis.cols()));
        beta.push_back(b);
        basis.col(m) = z / b;
    }
    out.iterations = static_cast<int>(m);

    std::vector<double> u(n);
    const double l1 = ritz.lpNorm<1>();
    for (std::size_t i = 0; i < n; ++i) u[i] = std::abs(ritz(static_cast<Eigen::Index>(i))) / l1;

    std::vector<double> au(n);
    adjacency_product(g, u, au);
    double lambda = 0.0;
    for (double v : au) lambda += v;  // sum(u) == 1, so this is the Rayleigh ratio in L1
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(au[i] - lambda * u[i]));
    out.eigenvalue = lambda;
    out.residual = residual;
    if (!converged && residual > opts.residual_tolerance)
        throw Error(ErrorCode::ConvergenceFailure, "eigenvector solver stopped after " + std::to_string(out.iterations) +
                                                       " steps with residual " + std::to_string(residual));

    // one more product step: isolated nodes come out exactly zero
    for (std::size_t i = 0; i < n; ++i) {
        out.perron[i] = au[i] / lambda;
        out.entropy[i] = entropy_term(out.perron[i]);
    }
    return out;
}

CentralityMaps centrality_maps(const PixelGraph& g, std::size_t height, std::size_t width) {
    const std::size_t n = g.node_count();
    if (n != height * width) throw Error(ErrorCode::DimensionMismatch, "graph size does not match map size");
    std::vector<double> cc(n), dc(n);
    for (std::size_t i = 0; i < n; ++i) {
        cc[i] = clustering_coefficient(g, i);
        dc[i] = degree_centrality(g, i);
    }
    auto ec = eigenvector_centrality(g);
    return {ScalarMap(height, width, std::move(cc)), ScalarMap(height, width, std::move(dc)),
            ScalarMap(height, width, std::move(ec.entropy))};
}

FeatureImages feature_images(const Band& band, const CnParams& params) {
    const auto graph = build_graph(band, params);
    const auto maps = centrality_maps(graph, band.height, band.width);
    return {quantize_map(maps.cc), quantize_map(maps.dc), quantize_map(maps.ec)};
}

}  // namespace cntex
