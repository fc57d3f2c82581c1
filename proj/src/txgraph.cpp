#include "dpor/txgraph.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dpor/error.hpp"

namespace dpor {

ShrinkParams ShrinkParams::nem() {
    ShrinkParams p;
    p.phi = std::exp(1.0);
    p.eta = -std::log(0.9);
    return p;
}

bool ShrinkParams::uses_shrunk_normalizer() const {
    switch (normalizer) {
        case Normalizer::raw: return false;
        case Normalizer::shrunk: return true;
        case Normalizer::automatic: break;
    }
    return eta > 0.0;
}

void ShrinkParams::validate() const {
    if (!(phi > 1.0)) throw UsageError(fmt::format("graph.phi must be > 1 (got {})", phi));
    if (!(eta >= 0.0)) throw UsageError(fmt::format("graph.eta must be >= 0 (got {})", eta));
}

double shrink_factor(std::int64_t block_day, const ShrinkParams& params) {
    if (params.eta == 0.0) return 1.0;
    return std::pow(params.phi, -params.eta * static_cast<double>(block_day));
}

double transaction_weight(double amount, std::int64_t block_day, const ShrinkParams& params) {
    return amount * shrink_factor(block_day, params);
}

double transaction_weight(double amount, std::uint64_t k, std::int64_t days, std::uint64_t blocks,
                          const ShrinkParams& params) {
    const auto n = static_cast<std::int64_t>(blocks);
    const auto day = (static_cast<std::int64_t>(k) * days + n - 1) / n;
    return transaction_weight(amount, day, params);
}

PairTotals aggregate_block_transfers(const Block& block) {
    PairTotals totals;
    for (const auto& tx : block.transactions) totals[{tx.from, tx.to}] += tx.amount;
    return totals;
}

std::optional<std::size_t> TransferGraph::index_of(const AccountId& id) const {
    auto it = std::lower_bound(accounts.begin(), accounts.end(), id);
    if (it == accounts.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - accounts.begin());
}

const GraphEntry* TransferGraph::find(std::size_t from, std::size_t to) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{from, to}, [](const GraphEntry& e, const auto& key) {
        return std::pair{e.from, e.to} < key;
    });
    if (it == entries.end() || it->from != from || it->to != to) return nullptr;
    return &*it;
}

double TransferGraph::weight(std::size_t from, std::size_t to) const {
    const auto* e = find(from, to);
    return e ? e->weight : 0.0;
}

double TransferGraph::share(std::size_t from, std::size_t to) const {
    const auto* e = find(from, to);
    return e ? e->share : 0.0;
}

TransferGraph build_transfer_graph(const LedgerRound& round, const ShrinkParams& params) {
    params.validate();
    TransferGraph g;
    g.accounts.assign(round.accounts.begin(), round.accounts.end());
    g.shrunk_normalizer = params.uses_shrunk_normalizer();
    g.block_count = round.blocks.size();

    std::map<std::pair<std::size_t, std::size_t>, double> weights;
    // Without shrinkage the pair totals stay in fixed point until the end.
    std::map<std::pair<std::size_t, std::size_t>, TokenAmount> exact;
    double shrunk_total = 0.0;

    for (const auto& block : round.blocks) {
        g.block_tx_counts.push_back(block.transactions.size());
        g.transaction_count += block.transactions.size();
        const TokenAmount block_total = block.total();
        g.raw_volume += block_total;
        const double factor = shrink_factor(round.block_day(block.height), params);
        shrunk_total += block_total.to_double() * factor;

        for (const auto& [pair, amount] : aggregate_block_transfers(block)) {
            if (amount.micros() <= 0) continue;
            const auto from = g.index_of(pair.first);
            const auto to = g.index_of(pair.second);
            if (!from || !to) throw DataError("transfer references an unregistered account");
            if (params.eta == 0.0)
                exact[{*from, *to}] += amount;
            else
                weights[{*from, *to}] += amount.to_double() * factor;
        }
    }
    for (const auto& [key, amount] : exact) weights[key] = amount.to_double();

    g.normalizer = g.shrunk_normalizer ? shrunk_total : g.raw_volume.to_double();
    if (!(g.normalizer > 0.0) || weights.empty()) {
        g.degenerate = true;
        return g;
    }
    g.entries.reserve(weights.size());
    for (const auto& [key, w] : weights) g.entries.push_back({key.first, key.second, w, w / g.normalizer});
    return g;
}

}  // namespace dpor
