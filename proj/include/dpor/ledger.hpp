#pragma once

// Round input data: blocks of transfers, stake commitments and daily
// resource-usage readings, plus the line-delimited text format they travel in.

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "dpor/amount.hpp"

namespace dpor {

using AccountId = std::string;

struct TransactionRecord {
    std::uint64_t block_height = 0;
    AccountId from;
    AccountId to;
    TokenAmount amount;

    bool operator==(const TransactionRecord&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    std::vector<TransactionRecord> transactions;

    /// C_k, the sum of all transferred tokens in the block.
    TokenAmount total() const;

    bool operator==(const Block&) const = default;
};

struct StakeEvent {
    AccountId account;
    std::int64_t day = 0;  // day the tokens were committed
    TokenAmount amount;

    bool operator==(const StakeEvent&) const = default;
};

struct UsageReading {
    AccountId account;
    std::int64_t day = 0;
    double ratio = 0.0;

    bool operator==(const UsageReading&) const = default;
};

struct LedgerRound {
    std::vector<Block> blocks;
    std::vector<StakeEvent> stakes;
    std::vector<UsageReading> usage;
    std::int64_t round_days = 0;
    std::set<AccountId> accounts;
    std::size_t dropped_self_transfers = 0;

    std::size_t block_count() const { return blocks.size(); }

    /// ceil(k * d / n): the day block k falls on within the round.
    std::int64_t block_day(std::uint64_t height) const;

    /// C = sum of C_k over all blocks.
    TokenAmount total_volume() const;
    std::size_t transaction_count() const;

    /// Adds every account referenced by a record to `accounts`.
    void register_referenced_accounts();

    bool operator==(const LedgerRound& other) const {
        return blocks == other.blocks && stakes == other.stakes && usage == other.usage &&
               round_days == other.round_days && accounts == other.accounts;
    }
};

/// Reads the `tx` / `stake` / `usage` / `meta` record format.
///
/// Self transfers are dropped and counted in `dropped_self_transfers`.
/// Throws ParseError on malformed lines, negative amounts, out-of-range
/// ratios and gaps in the block heights.
LedgerRound parse_ledger(std::istream& in);
LedgerRound load_ledger(const std::string& path);

void write_ledger(const LedgerRound& round, std::ostream& out);

struct Violation {
    std::string record;  // e.g. "block 3", "usage alice@2"
    std::string rule;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_ledger(const LedgerRound& round);

}  // namespace dpor
