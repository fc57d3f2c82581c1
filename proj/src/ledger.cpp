#include "dpor/ledger.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

TokenAmount Block::total() const {
    TokenAmount sum;
    for (const auto& tx : transactions) sum += tx.amount;
    return sum;
}

std::int64_t LedgerRound::block_day(std::uint64_t height) const {
    const auto n = static_cast<std::int64_t>(blocks.size());
    if (n == 0) return 0;
    const auto k = static_cast<std::int64_t>(height);
    return (k * round_days + n - 1) / n;
}

TokenAmount LedgerRound::total_volume() const {
    TokenAmount sum;
    for (const auto& b : blocks) sum += b.total();
    return sum;
}

std::size_t LedgerRound::transaction_count() const {
    std::size_t count = 0;
    for (const auto& b : blocks) count += b.transactions.size();
    return count;
}

void LedgerRound::register_referenced_accounts() {
    for (const auto& b : blocks)
        for (const auto& tx : b.transactions) {
            accounts.insert(tx.from);
            accounts.insert(tx.to);
        }
    for (const auto& s : stakes) accounts.insert(s.account);
    for (const auto& u : usage) accounts.insert(u.account);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool valid_account_token(std::string_view id) {
    if (id.empty()) return false;
    for (unsigned char c : id)
        if (c <= 0x20 || c >= 0x7f) return false;
    return true;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

class LineParser {
public:
    LineParser(std::size_t line, std::vector<std::string_view> fields) : line_(line), fields_(std::move(fields)) {}

    void expect_arity(std::size_t n, std::string_view tag) const {
        if (fields_.size() != n)
            fail(std::string(tag), fmt::format("expected {} fields, found {}", n, fields_.size()));
    }

    AccountId account(std::size_t i, const char* name) const {
        if (!valid_account_token(fields_[i])) fail(name, "invalid account id '" + std::string(fields_[i]) + "'");
        return AccountId(fields_[i]);
    }

    template <typename Int>
    Int integer(std::size_t i, const char* name) const {
        auto v = parse_int<Int>(fields_[i]);
        if (!v) fail(name, "not an integer: '" + std::string(fields_[i]) + "'");
        return *v;
    }

    TokenAmount amount(std::size_t i, const char* name) const {
        auto v = TokenAmount::parse(fields_[i]);
        if (!v) fail(name, "malformed amount '" + std::string(fields_[i]) + "'");
        if (v->is_negative()) fail(name, "negative amount " + std::string(fields_[i]));
        return *v;
    }

    double real(std::size_t i, const char* name) const {
        auto v = parse_real(fields_[i]);
        if (!v || !std::isfinite(*v)) fail(name, "not a number: '" + std::string(fields_[i]) + "'");
        return *v;
    }

    [[noreturn]] void fail(std::string field, const std::string& message) const {
        throw ParseError(line_, std::move(field), message);
    }

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
    std::vector<std::string_view> fields_;
};

}  // namespace

LedgerRound parse_ledger(std::istream& in) {
    LedgerRound round;
    std::map<std::uint64_t, Block> blocks;
    std::map<std::uint64_t, std::size_t> first_line;
    std::optional<std::int64_t> days;
    std::size_t line_no = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_fields(line);
        const LineParser p(line_no, fields);
        const std::string_view tag = fields[0];

        if (tag == "tx") {
            p.expect_arity(5, "tx");
            TransactionRecord tx;
            tx.block_height = p.integer<std::uint64_t>(1, "block_height");
            if (tx.block_height == 0) p.fail("block_height", "block heights start at 1");
            tx.from = p.account(2, "from");
            tx.to = p.account(3, "to");
            tx.amount = p.amount(4, "amount");
            first_line.try_emplace(tx.block_height, line_no);
            if (tx.from == tx.to) {
                ++round.dropped_self_transfers;
                blocks[tx.block_height].height = tx.block_height;
                continue;
            }
            auto& block = blocks[tx.block_height];
            block.height = tx.block_height;
            block.transactions.push_back(std::move(tx));
        } else if (tag == "stake") {
            p.expect_arity(4, "stake");
            StakeEvent s;
            s.account = p.account(1, "account");
            s.day = p.integer<std::int64_t>(2, "day");
            if (s.day < 0) p.fail("day", "stake day must be >= 0");
            s.amount = p.amount(3, "amount");
            if (s.amount.is_zero()) p.fail("amount", "stake amount must be positive");
            round.stakes.push_back(std::move(s));
        } else if (tag == "usage") {
            p.expect_arity(4, "usage");
            UsageReading u;
            u.account = p.account(1, "account");
            u.day = p.integer<std::int64_t>(2, "day");
            u.ratio = p.real(3, "ratio");
            if (u.ratio < 0.0 || u.ratio > 1.0) p.fail("ratio", fmt::format("ratio {} outside [0,1]", u.ratio));
            round.usage.push_back(std::move(u));
        } else if (tag == "meta") {
            p.expect_arity(3, "meta");
            if (fields[1] != "d") p.fail("meta", "unknown meta key '" + std::string(fields[1]) + "'");
            if (days) p.fail("meta", "duplicate meta,d record");
            const auto d = p.integer<std::int64_t>(2, "round_days");
            if (d <= 0) p.fail("round_days", "round length must be positive");
            days = d;
        } else {
            p.fail("tag", "unknown record tag '" + std::string(tag) + "'");
        }
    }

    if (!days) throw ParseError(line_no, "meta", "missing meta,d record");
    round.round_days = *days;

    std::uint64_t expected = 1;
    for (auto& [height, block] : blocks) {
        if (height != expected)
            throw ParseError(first_line.at(height), "block_height",
                             fmt::format("non-consecutive block height {} (expected {})", height, expected));
        round.blocks.push_back(std::move(block));
        ++expected;
    }
    round.register_referenced_accounts();
    return round;
}

LedgerRound load_ledger(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open ledger file '" + path + "'");
    return parse_ledger(in);
}

void write_ledger(const LedgerRound& round, std::ostream& out) {
    out << "meta,d," << round.round_days << '\n';
    for (const auto& block : round.blocks)
        for (const auto& tx : block.transactions)
            out << "tx," << tx.block_height << ',' << tx.from << ',' << tx.to << ',' << tx.amount.to_string() << '\n';
    for (const auto& s : round.stakes) out << "stake," << s.account << ',' << s.day << ',' << s.amount.to_string() << '\n';
    for (const auto& u : round.usage) out << fmt::format("usage,{},{},{}\n", u.account, u.day, u.ratio);
}

std::vector<Violation> validate_ledger(const LedgerRound& round) {
    std::vector<Violation> out;
    auto add = [&](std::string record, std::string rule) { out.push_back({std::move(record), std::move(rule)}); };
    auto registered = [&](const AccountId& id) { return round.accounts.contains(id); };

    if (round.round_days < 1) add("meta", "round length must be positive");

    for (std::size_t i = 0; i < round.blocks.size(); ++i) {
        const auto& block = round.blocks[i];
        const std::string name = fmt::format("block {}", block.height);
        if (block.height != i + 1) add(name, fmt::format("non-consecutive height (expected {})", i + 1));
        for (std::size_t t = 0; t < block.transactions.size(); ++t) {
            const auto& tx = block.transactions[t];
            const std::string rec = fmt::format("block {} tx {}", block.height, t);
            if (tx.block_height != block.height) add(rec, "transaction height differs from its block");
            if (tx.amount.is_negative()) add(rec, "negative amount");
            if (tx.from == tx.to) add(rec, "self transfer");
            if (!valid_account_token(tx.from) || !valid_account_token(tx.to)) add(rec, "invalid account id");
            if (!registered(tx.from) || !registered(tx.to)) add(rec, "unregistered account");
        }
    }
    for (const auto& s : round.stakes) {
        const std::string rec = fmt::format("stake {}@{}", s.account, s.day);
        if (s.amount.micros() <= 0) add(rec, "non-positive stake amount");
        if (s.day < 0) add(rec, "negative stake day");
        if (s.day > round.round_days) add(rec, "stake committed after round end");
        if (!registered(s.account)) add(rec, "unregistered account");
    }
    for (const auto& u : round.usage) {
        const std::string rec = fmt::format("usage {}@{}", u.account, u.day);
        if (!(u.ratio >= 0.0 && u.ratio <= 1.0)) add(rec, "ratio out of range");
        if (!registered(u.account)) add(rec, "unregistered account");
    }
    return out;
}

}  // namespace dpor
