#pragma once

// Shared fixtures and dense reference implementations used as oracles.

#include <Eigen/Dense>
#include <fmt/format.h>

#include <sstream>
#include <string>
#include <vector>

#include "dpor/baselines.hpp"
#include "dpor/flowrank.hpp"
#include "dpor/ledger.hpp"
#include "dpor/rng.hpp"

namespace dpor::testing {

inline LedgerRound parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_ledger(in);
}

inline std::string ledger_text(const LedgerRound& round) {
    std::ostringstream out;
    write_ledger(round, out);
    return out.str();
}

inline std::vector<AccountId> numbered_accounts(std::size_t m) {
    std::vector<AccountId> ids;
    for (std::size_t i = 0; i < m; ++i) ids.push_back(fmt::format("n{:02}", i));
    return ids;
}

/// Random edge flow on m nodes; each pair is an edge with probability `density`.
inline EdgeFlow random_flow(Rng& rng, std::size_t m, double density) {
    EdgeFlow flow;
    flow.accounts = numbered_accounts(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (rng.uniform() < density) {
                flow.edges.push_back({i, j});
                flow.values.push_back(4.0 * rng.uniform() - 2.0);
            }
    if (flow.edges.empty()) {
        flow.edges.push_back({0, 1});
        flow.values.push_back(1.0);
    }
    return flow;
}

/// Edge-node incidence: row e has -1 at tail, +1 at head.
inline Eigen::MatrixXd incidence(const EdgeFlow& flow) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(flow.edges.size()),
                                              static_cast<Eigen::Index>(flow.node_count()));
    for (std::size_t e = 0; e < flow.edges.size(); ++e) {
        b(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(flow.edges[e].tail)) = -1.0;
        b(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(flow.edges[e].head)) = 1.0;
    }
    return b;
}

/// Dense least-squares split of a flow: minimum-norm s per the pseudo-inverse,
/// then the projection of the residual onto the column space of the
/// triangle-curl adjoint. Brute-force triangle search over all triples.
struct DenseHodge {
    Eigen::VectorXd gradient;
    Eigen::VectorXd curl;
    Eigen::VectorXd harmonic;
    Eigen::VectorXd score;
};

inline DenseHodge dense_hodge(const EdgeFlow& flow) {
    const auto b = incidence(flow);
    Eigen::VectorXd y(static_cast<Eigen::Index>(flow.values.size()));
    for (std::size_t e = 0; e < flow.values.size(); ++e) y(static_cast<Eigen::Index>(e)) = flow.values[e];
    DenseHodge out;
    out.score = b.completeOrthogonalDecomposition().solve(y);
    out.gradient = b * out.score;
    const Eigen::VectorXd residual = y - out.gradient;

    std::vector<std::array<std::ptrdiff_t, 3>> tris;
    const auto m = flow.node_count();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c1 = a + 1; c1 < m; ++c1)
            for (std::size_t c2 = c1 + 1; c2 < m; ++c2) {
                const auto ab = flow.edge_index(a, c1), bc = flow.edge_index(c1, c2), ac = flow.edge_index(a, c2);
                if (ab >= 0 && bc >= 0 && ac >= 0) tris.push_back({ab, bc, ac});
            }
    if (tris.empty()) {
        out.curl = Eigen::VectorXd::Zero(y.size());
    } else {
        Eigen::MatrixXd ct = Eigen::MatrixXd::Zero(y.size(), static_cast<Eigen::Index>(tris.size()));
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const auto col = static_cast<Eigen::Index>(t);
            ct(tris[t][0], col) = 1.0;
            ct(tris[t][1], col) = 1.0;
            ct(tris[t][2], col) = -1.0;
        }
        const Eigen::VectorXd z = ct.completeOrthogonalDecomposition().solve(residual);
        out.curl = ct * z;
    }
    out.harmonic = residual - out.curl;
    return out;
}

/// Dense stationary vector of a row-stochastic matrix via its left eigenvector.
inline Eigen::VectorXd dense_stationary(const Eigen::MatrixXd& h) {
    const auto n = h.rows();
    // Solve (H^T - I) pi = 0 with sum(pi) = 1 as a least-squares system.
    Eigen::MatrixXd a(n + 1, n);
    a.topRows(n) = h.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    return a.colPivHouseholderQr().solve(rhs);
}

inline Eigen::MatrixXd dense(const StochasticMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return out;
}

/// Random weighted digraph with `m` nodes and no self links.
inline std::vector<WeightedLink> random_links(Rng& rng, std::size_t m, double density) {
    std::vector<WeightedLink> links;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && rng.uniform() < density) links.push_back({i, j, 1.0 + 99.0 * rng.uniform()});
    return links;
}

}  // namespace dpor::testing
