#include "dpor/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

void RepWeights::validate() const {
    if (stake < 0.0 || usage < 0.0 || ranking < 0.0) throw UsageError("reputation weights must be nonnegative");
    if (std::abs(stake + usage + ranking - 1.0) > 1e-12)
        throw UsageError(fmt::format("reputation weights must sum to 1 (got {})", stake + usage + ranking));
}

std::vector<double> normalize_ranking(std::span<const double> raw) {
    std::vector<double> out(raw.size(), 0.5);
    if (raw.empty()) return out;
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double span = *hi - *lo;
    if (!(span > 0.0)) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = std::clamp((raw[i] - *lo) / span, 0.0, 1.0);
    return out;
}

double reputation_score(double stake_power, double usage_score, double ranking, const RepWeights& weights) {
    weights.validate();
    return weights.stake * stake_power + weights.usage * usage_score + weights.ranking * ranking;
}

const ReputationRow* ReputationReport::find(const AccountId& account) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), account,
                               [](const ReputationRow& r, const AccountId& id) { return r.account < id; });
    return it != rows.end() && it->account == account ? &*it : nullptr;
}

void ElectionParams::validate() const {
    if (max_choices == 0) throw UsageError("election.vmax must be positive");
    if (standby_through < producers) throw UsageError("election.standby_through must be >= election.producers");
}

ElectionResult tally_votes(std::span<const Ballot> ballots, const ReputationReport& report, const ElectionParams& params) {
    params.validate();
    // delegate -> (voter -> weight); summing in voter order makes the totals
    // independent of ballot order.
    std::map<AccountId, std::map<AccountId, double>> received;
    std::set<AccountId> voters;
    for (const auto& ballot : ballots) {
        const auto* voter = report.find(ballot.voter);
        if (!voter) throw DataError("voter '" + ballot.voter + "' is not in the reputation report");
        if (!voters.insert(ballot.voter).second) throw DataError("voter '" + ballot.voter + "' cast more than one ballot");
        if (ballot.choices.size() > params.max_choices)
            throw DataError(fmt::format("ballot of '{}' has {} choices (max {})", ballot.voter, ballot.choices.size(), params.max_choices));
        std::set<AccountId> seen;
        for (const auto& choice : ballot.choices) {
            if (!seen.insert(choice).second) throw DataError("ballot of '" + ballot.voter + "' repeats '" + choice + "'");
            if (!report.find(choice)) throw DataError("'" + choice + "' is not a registered delegate");
            received[choice][ballot.voter] = voter->reputation;
        }
    }

    ElectionResult result;
    for (const auto& [delegate, by_voter] : received) {
        DelegateTally t{delegate, 0.0, by_voter.size()};
        for (const auto& [voter, weight] : by_voter) t.total += weight;
        result.ordering.push_back(std::move(t));
    }
    std::stable_sort(result.ordering.begin(), result.ordering.end(), [](const DelegateTally& a, const DelegateTally& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.delegate < b.delegate;
    });
    for (std::size_t i = 0; i < result.ordering.size() && i < params.standby_through; ++i)
        (i < params.producers ? result.producers : result.standby).push_back(result.ordering[i].delegate);
    return result;
}

}  // namespace dpor
