#pragma once

// Shrinkage-weighted out-transfer matrix of a round.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dpor/ledger.hpp"

namespace dpor {

enum class Normalizer {
    automatic,  // shrunk iff eta > 0
    raw,        // C = sum of block totals
    shrunk,     // C-hat = sum of shrunk block totals
};

struct ShrinkParams {
    double phi = 2.0;
    double eta = 0.02;
    Normalizer normalizer = Normalizer::automatic;

    /// Base e with 10% daily decay.
    static ShrinkParams nem();

    bool uses_shrunk_normalizer() const;
    void validate() const;
};

/// phi^(-eta * block_day)
double shrink_factor(std::int64_t block_day, const ShrinkParams& params);

double transaction_weight(double amount, std::int64_t block_day, const ShrinkParams& params);

/// Same, with the block day derived as ceil(k * d / n).
double transaction_weight(double amount, std::uint64_t k, std::int64_t days, std::uint64_t blocks,
                          const ShrinkParams& params);

using PairTotals = std::map<std::pair<AccountId, AccountId>, TokenAmount>;

/// Sums repeated transfers between the same ordered pair within one block.
PairTotals aggregate_block_transfers(const Block& block);

/// Sparse entry keyed by account indices into TransferGraph::accounts.
struct GraphEntry {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 0.0;  // W_ij
    double share = 0.0;   // L_ij = W_ij / normalizer
};

struct TransferGraph {
    std::vector<AccountId> accounts;    // sorted; index space for everything downstream
    std::vector<GraphEntry> entries;    // sorted by (from, to), W_ij > 0 only
    double normalizer = 0.0;
    bool shrunk_normalizer = false;
    bool degenerate = false;            // no positive volume in the round

    // Round statistics.
    std::size_t block_count = 0;
    std::size_t transaction_count = 0;          // T
    std::vector<std::size_t> block_tx_counts;   // T_k
    TokenAmount raw_volume;                     // C

    std::size_t size() const { return accounts.size(); }
    std::optional<std::size_t> index_of(const AccountId& id) const;
    const GraphEntry* find(std::size_t from, std::size_t to) const;
    double weight(std::size_t from, std::size_t to) const;
    double share(std::size_t from, std::size_t to) const;
};

/// W_ij = sum over blocks of shrunk per-block pair totals, L = W / normalizer.
TransferGraph build_transfer_graph(const LedgerRound& round, const ShrinkParams& params);

}  // namespace dpor
