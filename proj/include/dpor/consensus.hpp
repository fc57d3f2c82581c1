#pragma once

// Reputation = w1 P + w2 U + w3 R, and reputation-weighted delegate elections.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dpor/ledger.hpp"

namespace dpor {

struct RepWeights {
    double stake = 0.4;
    double usage = 0.3;
    double ranking = 0.3;

    void validate() const;
};

/// Min-max rescaling to [0, 1]; a constant input maps to 0.5 everywhere.
std::vector<double> normalize_ranking(std::span<const double> raw);

double reputation_score(double stake_power, double usage_score, double ranking, const RepWeights& weights);

struct ReputationRow {
    AccountId account;
    double stake_power = 0.0;   // P
    double usage_score = 0.0;   // U
    double ranking_raw = 0.0;   // s
    double ranking_norm = 0.0;  // R
    double reputation = 0.0;    // Rep
};

struct ReputationReport {
    std::vector<ReputationRow> rows;             // sorted by account
    std::map<std::string, std::string> metadata; // parameters, block range, day span

    const ReputationRow* find(const AccountId& account) const;
};

struct Ballot {
    AccountId voter;
    std::vector<AccountId> choices;
};

struct ElectionParams {
    std::size_t max_choices = 30;
    std::size_t producers = 21;
    std::size_t standby_through = 72;

    void validate() const;
};

struct DelegateTally {
    AccountId delegate;
    double total = 0.0;
    std::size_t votes = 0;
};

struct ElectionResult {
    std::vector<DelegateTally> ordering;  // descending total, ties by id
    std::vector<AccountId> producers;
    std::vector<AccountId> standby;
};

/// Every chosen delegate receives the voter's full reputation. Throws
/// DataError for oversized or duplicate ballots, repeated voters and
/// accounts missing from the report.
ElectionResult tally_votes(std::span<const Ballot> ballots, const ReputationReport& report, const ElectionParams& params);

}  // namespace dpor
