#pragma once

// End-to-end scoring round and the loop-attack sweep.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpor/config.hpp"
#include "dpor/scenario.hpp"

namespace dpor {

struct RoundOutcome {
    TransferGraph graph;
    std::optional<HodgeResult> hodge;   // empty for a round without transfer volume
    ReputationReport report;
    LoopReport loops;
    std::optional<ElectionResult> election;  // only when ballots are given
};

/// stake -> P, usage -> U, graph -> chain -> flow -> Hodge -> R, then Rep and the tally.
RoundOutcome run_round(const LedgerRound& round, const Params& params, std::span<const Ballot> ballots = {});

/// 1-based position of the best-placed account of `group` under `scores`
/// (descending, ties by account id).
std::size_t best_rank(std::span<const AccountId> accounts, std::span<const double> scores, std::span<const AccountId> group);

struct ExperimentRow {
    std::int64_t multiplicity = 0;
    double attacker_score = 0.0;        // s of the ring entry account
    std::size_t attacker_rank = 0;      // HodgeRank position of the best ring account
    double ring_energy_share = 0.0;     // combined inconsistent-energy share of the ring
    bool ring_top_shares = false;       // ring accounts hold the top ring_size shares
    std::size_t pagerank_rank = 0;      // row-normalized PageRank
    std::size_t volume_pagerank_rank = 0;
    double score_range = 0.0;           // max s - min s over the round
    double consistency_ratio = 0.0;
    bool loop_netflow_zero = false;     // NEM net flow vanishes on the symmetric bounce pair
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::string rng_algorithm;
};

/// Runs the base scenario once per multiplicity; requires a ring attacker.
ExperimentResult loop_attack_experiment(const ScenarioConfig& base, std::span<const std::int64_t> multiplicities,
                                        const Params& params);

}  // namespace dpor
