#pragma once

// Comparison rankers: PageRank, NCDawareRank and the NEM net-flow outlink
// matrix, all built from the same weighted transfer totals as HodgeRank.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpor/txgraph.hpp"

namespace dpor {

struct WeightedLink {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 0.0;
};

using OutLinks = std::vector<std::vector<std::size_t>>;

/// Row-normalized out-link matrix; rows without out-weight are uniform.
class StochasticMatrix {
public:
    using Row = std::vector<std::pair<std::size_t, double>>;

    StochasticMatrix() = default;
    static StochasticMatrix from_links(std::size_t size, std::span<const WeightedLink> links);
    static StochasticMatrix from_graph(const TransferGraph& graph);

    std::size_t size() const { return rows_.size(); }
    bool is_dangling(std::size_t i) const { return rows_[i].empty(); }
    const Row& row(std::size_t i) const { return rows_[i]; }
    double operator()(std::size_t i, std::size_t j) const;
    OutLinks out_links() const;

    /// y = x^T A
    void left_multiply(std::span<const double> x, std::vector<double>& y) const;

private:
    std::vector<Row> rows_;
};

struct RankVector {
    std::vector<double> scores;  // nonnegative, sums to 1
    std::size_t iterations = 0;
};

struct PowerIterationOptions {
    double tol = 1e-12;          // L1 change between iterates
    std::size_t max_iter = 10000;
};

/// Stationary vector of H = alpha A + (1 - alpha) e p^T with uniform p.
RankVector pagerank(const StochasticMatrix& a, double alpha, const PowerIterationOptions& options = {});

class BlockPartition {
public:
    BlockPartition() = default;
    static BlockPartition singletons(std::size_t size);
    /// `assignment` maps account id to block id; every account must be present.
    static BlockPartition from_assignment(std::span<const AccountId> accounts,
                                          const std::map<AccountId, std::string>& assignment);
    static BlockPartition from_blocks(std::size_t size, const std::vector<std::vector<std::size_t>>& blocks);

    std::size_t size() const { return block_of_.size(); }
    std::size_t block_count() const { return members_.size(); }
    std::size_t block_of(std::size_t account) const { return block_of_[account]; }
    const std::vector<std::size_t>& members(std::size_t block) const { return members_[block]; }

private:
    std::vector<std::size_t> block_of_;
    std::vector<std::vector<std::size_t>> members_;
};

/// Inter-level proximity: P_uv = 1 / (N_u |B(v)|) for v in X_u, where X_u is
/// the union of the blocks of u and its out-neighbours and N_u is the number
/// of distinct blocks in X_u. Rows are stochastic.
using ProximityMatrix = std::vector<std::vector<std::pair<std::size_t, double>>>;
ProximityMatrix ncd_proximity(const BlockPartition& partition, const OutLinks& links);

/// Stationary vector of Q = alpha A + mu P + (1 - alpha - mu) e p^T.
RankVector ncdawarerank(const StochasticMatrix& a, const BlockPartition& partition, double alpha, double mu,
                        const PowerIterationOptions& options = {});

struct NetFlowEntry {
    std::size_t from = 0;
    std::size_t to = 0;
    double net = 0.0;      // positive part of W_ji - W_ij at (i, j)
    double outlink = 0.0;  // net / row total
};

struct NetFlowMatrix {
    std::size_t size = 0;
    std::vector<NetFlowEntry> entries;  // nonzero only, sorted by (from, to)

    bool is_zero() const { return entries.empty(); }
    double net(std::size_t i, std::size_t j) const;
    double outlink(std::size_t i, std::size_t j) const;
};

NetFlowMatrix nem_netflow_matrix(const TransferGraph& graph);

/// Stationary vector of the chain with rows proportional to alpha L_ij + (1 - alpha) / m,
/// i.e. teleport added to absolute volume shares before row normalization.
/// Unlike `pagerank`, an account's row reacts to how much volume it moves.
RankVector volume_pagerank(const TransferGraph& graph, double alpha, const PowerIterationOptions& options = {});

}  // namespace dpor
