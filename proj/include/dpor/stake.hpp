#pragma once

// Stake converter: a staked amount moves into the staking contract at 10% of
// the pending remainder per day, and the remainder is released in one piece
// once it falls below the network threshold.

#include <cstdint>
#include <map>

#include "dpor/ledger.hpp"

namespace dpor {

inline constexpr double kDailyConversionRate = 0.10;

struct StakeParams {
    double theta = 100.0;  // tokens

    void validate() const;
};

/// Tokens converted after `days_elapsed` days (day 0 is the staking day).
double convertible_amount(double staked, double theta, std::int64_t days_elapsed);

struct AccountStake {
    double staked = 0.0;
    double convertible = 0.0;
};

struct StakeState {
    std::map<AccountId, AccountStake> accounts;
    double total_convertible = 0.0;  // A
};

/// Each stake event converts on its own schedule; an account's convertible
/// amount is the sum over its events, evaluated at `evaluation_day`.
StakeState compute_stake_state(const LedgerRound& round, const StakeParams& params, std::int64_t evaluation_day);

/// P_i = a_i / A, or all zeros when nothing has been converted.
std::map<AccountId, double> stake_power(const std::map<AccountId, double>& convertibles);
std::map<AccountId, double> stake_power(const StakeState& state);

}  // namespace dpor
