#pragma once

// HodgeRank over the transfer graph: damped Markov chain, log-ratio edge
// flow, least-squares gradient/curl/harmonic split, and loop detection from
// the inconsistent part of the flow.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dpor/txgraph.hpp"

namespace dpor {

/// Row-stochastic chain stored as a per-row constant plus sparse corrections,
/// so M(i, j) = rows[i].base + (link correction for j).
class MarkovChain {
public:
    struct Row {
        double base = 0.0;
        std::vector<std::pair<std::size_t, double>> links;  // sorted by column
    };

    MarkovChain() = default;
    MarkovChain(double alpha, std::vector<Row> rows) : alpha_(alpha), rows_(std::move(rows)) {}

    /// Wraps an explicit matrix (rows must be stochastic and strictly positive).
    static MarkovChain from_dense(const std::vector<std::vector<double>>& m);

    std::size_t size() const { return rows_.size(); }
    double alpha() const { return alpha_; }
    double operator()(std::size_t i, std::size_t j) const;
    double row_sum(std::size_t i) const;
    const Row& row(std::size_t i) const { return rows_[i]; }

private:
    double alpha_ = 0.0;
    std::vector<Row> rows_;
};

/// M_ij = alpha * L_ij / a_i + (1 - alpha) / m with a_i the row sum of L;
/// rows without out-transfers are uniform. Throws DataError on a degenerate graph.
MarkovChain markov_chain(const TransferGraph& graph, double alpha);

/// Undirected edge with tail < head; flow values are oriented tail -> head.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;

    auto operator<=>(const Edge&) const = default;
};

/// F: pairs with L_ij + L_ji > 0, sorted.
std::vector<Edge> support_edges(const TransferGraph& graph);

struct EdgeFlow {
    std::vector<AccountId> accounts;
    std::vector<Edge> edges;
    std::vector<double> values;  // Y on edges[e], oriented tail -> head

    std::size_t node_count() const { return accounts.size(); }
    /// Antisymmetric lookup; 0 for pairs outside F.
    double value(std::size_t i, std::size_t j) const;
    std::ptrdiff_t edge_index(std::size_t i, std::size_t j) const;
};

/// Y_ij = log M_ij - log M_ji on each edge of F.
EdgeFlow edge_flow(const MarkovChain& chain, std::span<const Edge> edges, std::vector<AccountId> accounts);

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_iter = 0;  // 0 = 10 * system size
};

struct Triangle {
    std::size_t a = 0, b = 0, c = 0;       // a < b < c
    std::size_t ab = 0, bc = 0, ac = 0;    // edge indices
};

/// Squared norms; edge weights are 1 on F.
struct FlowEnergies {
    double total = 0.0;
    double gradient = 0.0;
    double curl = 0.0;
    double harmonic = 0.0;
};

struct HodgeResult {
    std::vector<AccountId> accounts;
    std::vector<Edge> edges;
    std::vector<double> flow;          // Y
    std::vector<double> score;         // s, mean zero on every connected component
    std::vector<std::size_t> component;
    std::vector<double> gradient;      // s_head - s_tail
    std::vector<double> residual;      // Y - gradient
    std::vector<double> curl;          // projection of residual onto the triangle-curl space
    std::vector<double> harmonic;      // residual - curl
    std::vector<Triangle> triangles;   // T(F), sorted (a, b, c)
    FlowEnergies energies;
    double consistency_ratio = 1.0;    // |grad|^2 / |Y|^2, 1 for the zero flow
    std::size_t gradient_iterations = 0;
    std::size_t curl_iterations = 0;
};

std::vector<Triangle> enumerate_triangles(std::size_t node_count, std::span<const Edge> edges);

/// Throws DataError when the flow has no edges and NumericalError when a
/// solve fails to reach the tolerance.
HodgeResult hodge_decompose(const EdgeFlow& flow, const SolveOptions& options = {});

struct GlobalRanking {
    std::vector<AccountId> accounts;
    std::vector<double> scores;
    std::vector<std::size_t> order;  // best first; ties by account id
};

GlobalRanking global_ranking(const HodgeResult& result);
GlobalRanking global_ranking(std::vector<AccountId> accounts, std::vector<double> scores);

struct TriangleCurl {
    std::size_t a = 0, b = 0, c = 0;
    double curl = 0.0;  // Y_ab + Y_bc + Y_ca
};

struct LoopReport {
    std::vector<AccountId> accounts;
    std::vector<double> energy;            // inconsistent energy attributed to each account
    std::vector<double> shares;            // energy / total inconsistent energy
    std::vector<std::size_t> flagged;      // share > tau, ascending index
    std::vector<TriangleCurl> triangles;
    double total_inconsistent = 0.0;       // |harmonic|^2 + |curl|^2
    double tau = 0.0;
};

/// Splits each edge's harmonic^2 + curl^2 evenly between its two endpoints.
LoopReport detect_loops(const HodgeResult& result, double tau);

}  // namespace dpor
