#include "dpor/resource.hpp"

#include <vector>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

void UsageParams::validate() const {
    if (!(0.0 < lo && lo < hi && hi < 1.0)) throw UsageError(fmt::format("usage band must satisfy 0 < lo < hi < 1 (lo={}, hi={})", lo, hi));
}

double usage_weight(double x, const UsageParams& params) {
    if (!(x >= 0.0 && x <= 1.0)) throw DataError(fmt::format("usage ratio {} outside [0,1]", x));
    if (x < params.lo) return x / params.lo;
    if (x <= params.hi) return 1.0;
    return (1.0 - x) / (1.0 - params.hi);
}

double account_usage_score(std::span<const double> ratios, const UsageParams& params) {
    if (ratios.empty()) return 0.0;
    double sum = 0.0;
    for (double x : ratios) sum += usage_weight(x, params);
    return sum / static_cast<double>(ratios.size());
}

std::map<AccountId, double> usage_scores(const LedgerRound& round, const UsageParams& params) {
    params.validate();
    std::map<AccountId, std::vector<double>> readings;
    for (const auto& u : round.usage) readings[u.account].push_back(u.ratio);
    std::map<AccountId, double> scores;
    for (const auto& id : round.accounts) {
        auto it = readings.find(id);
        scores[id] = it == readings.end() ? 0.0 : account_usage_score(it->second, params);
    }
    return scores;
}

}  // namespace dpor
