#include "dpor/stake.hpp"

#include <cmath>

#include "dpor/error.hpp"

namespace dpor {

void StakeParams::validate() const {
    if (!(theta > 0.0)) throw UsageError("stake.theta must be positive");
}

double convertible_amount(double staked, double theta, std::int64_t days_elapsed) {
    if (days_elapsed < 0) days_elapsed = 0;
    const double pending = staked * std::pow(1.0 - kDailyConversionRate, static_cast<double>(days_elapsed));
    if (pending < theta) return staked;
    return staked - pending;
}

StakeState compute_stake_state(const LedgerRound& round, const StakeParams& params, std::int64_t evaluation_day) {
    params.validate();
    StakeState state;
    for (const auto& event : round.stakes) {
        const double amount = event.amount.to_double();
        auto& acc = state.accounts[event.account];
        acc.staked += amount;
        if (event.day <= evaluation_day)
            acc.convertible += convertible_amount(amount, params.theta, evaluation_day - event.day);
    }
    for (const auto& [id, acc] : state.accounts) state.total_convertible += acc.convertible;
    return state;
}

std::map<AccountId, double> stake_power(const std::map<AccountId, double>& convertibles) {
    double total = 0.0;
    for (const auto& [id, a] : convertibles) total += a;
    std::map<AccountId, double> power;
    for (const auto& [id, a] : convertibles) power[id] = total > 0.0 ? a / total : 0.0;
    return power;
}

std::map<AccountId, double> stake_power(const StakeState& state) {
    std::map<AccountId, double> convertibles;
    for (const auto& [id, acc] : state.accounts) convertibles[id] = acc.convertible;
    return stake_power(convertibles);
}

}  // namespace dpor
