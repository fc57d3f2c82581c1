#pragma once

#include <map>
#include <span>

#include "dpor/ledger.hpp"

namespace dpor {

/// Edges of the optimal usage band, where the weight is 1.
struct UsageParams {
    double lo = 0.68;
    double hi = 0.88;

    void validate() const;
};

/// Tent weight: rises linearly to 1 at `lo`, flat through `hi`, falls to 0 at x = 1.
/// Throws DataError for x outside [0, 1].
double usage_weight(double x, const UsageParams& params);

/// Mean weight over the readings; 0 when there are none.
double account_usage_score(std::span<const double> ratios, const UsageParams& params);

std::map<AccountId, double> usage_scores(const LedgerRound& round, const UsageParams& params);

}  // namespace dpor
