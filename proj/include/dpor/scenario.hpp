#pragma once

// Deterministic scenario ledgers: honest traffic plus optional whale staker,
// ring-loop attacker, symmetric bounce pair and Sybil fan-out.

#include <cstdint>
#include <string>
#include <vector>

#include "dpor/config.hpp"
#include "dpor/consensus.hpp"
#include "dpor/ledger.hpp"

namespace dpor {

/// random: popularity-weighted pairs (cyclic, like a real economy);
/// chain: h000 -> h001 -> ... only, a tree whose flow is pure gradient.
enum class HonestTopology { random, chain };

struct ScenarioConfig {
    std::uint64_t seed = 42;

    std::size_t honest_accounts = 30;
    std::size_t blocks = 120;
    std::int64_t days = 10;
    std::size_t honest_transactions = 400;  // at least one per block
    std::int64_t amount_min = 1;            // tokens
    std::int64_t amount_max = 100;
    double popularity_skew = 1.0;           // receiver weight 1 / (rank + 1)^skew
    HonestTopology topology = HonestTopology::random;

    double stake_fraction = 0.6;
    std::int64_t stake_min = 50;
    std::int64_t stake_max = 5000;
    double usage_min = 0.3;
    double usage_max = 1.0;

    std::size_t ring_size = 0;        // 0 disables the ring attacker
    std::int64_t multiplicity = 1;    // loop repetitions k
    std::int64_t hop_amount = 100;
    std::int64_t funding_amount = 50;
    std::int64_t bounce_amount = 0;   // mutual pair traffic per repetition; 0 disables

    std::int64_t whale_stake = 0;
    std::size_t sybil_fanout = 0;
    std::int64_t sybil_amount = 10;

    std::size_t ballot_choices = 5;
    double voter_fraction = 1.0;

    /// Reads `scenario.*` keys; unknown scenario keys are rejected.
    static ScenarioConfig from_config(const Config& config);
    void validate() const;
    std::map<std::string, std::string> snapshot() const;
};

struct ScenarioRoles {
    std::vector<AccountId> honest;
    AccountId funder;                 // honest account paying into the ring
    std::vector<AccountId> ring;
    std::vector<AccountId> bounce;
    AccountId whale;
    AccountId sybil_hub;
    std::vector<AccountId> sybils;
};

struct Scenario {
    LedgerRound round;
    std::vector<Ballot> ballots;
    ScenarioRoles roles;
};

/// Same config and seed give the same ledger, byte for byte. Honest traffic,
/// stakes, usage and ballots are drawn first, so they do not depend on the
/// attacker settings.
Scenario generate_scenario(const ScenarioConfig& config);

/// Tokens moved by the deterministic (non-honest) parts of the scenario.
TokenAmount attack_volume(const ScenarioConfig& config);

}  // namespace dpor
