#include "dpor/pipeline.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dpor/error.hpp"
#include "dpor/rng.hpp"

namespace dpor {

RoundOutcome run_round(const LedgerRound& round, const Params& params, std::span<const Ballot> ballots) {
    params.validate();
    if (auto violations = validate_ledger(round); !violations.empty())
        throw DataError(fmt::format("invalid round: {}: {}", violations.front().record, violations.front().rule));

    RoundOutcome out;
    const auto stake = compute_stake_state(round, params.stake, round.round_days);
    const auto power = stake_power(stake);
    const auto usage = usage_scores(round, params.usage);

    out.graph = build_transfer_graph(round, params.graph);
    const std::size_t m = out.graph.size();
    std::vector<double> raw(m, 0.0);
    if (!out.graph.degenerate) {
        const auto chain = markov_chain(out.graph, params.alpha);
        const auto edges = support_edges(out.graph);
        const auto flow = edge_flow(chain, edges, out.graph.accounts);
        out.hodge = hodge_decompose(flow, params.solve);
        raw = out.hodge->score;
        out.loops = detect_loops(*out.hodge, params.tau);
    } else {
        out.loops.accounts = out.graph.accounts;
        out.loops.energy.assign(m, 0.0);
        out.loops.shares.assign(m, 0.0);
        out.loops.tau = params.tau;
    }
    const auto norm = normalize_ranking(raw);

    out.report.rows.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& id = out.graph.accounts[i];
        ReputationRow row;
        row.account = id;
        if (auto it = power.find(id); it != power.end()) row.stake_power = it->second;
        if (auto it = usage.find(id); it != usage.end()) row.usage_score = it->second;
        row.ranking_raw = raw[i];
        row.ranking_norm = norm[i];
        row.reputation = std::clamp(reputation_score(row.stake_power, row.usage_score, row.ranking_norm, params.weights), 0.0, 1.0);
        out.report.rows.push_back(std::move(row));
    }

    auto& meta = out.report.metadata;
    meta = params.snapshot();
    meta["round.blocks"] = fmt::format("{}", round.block_count());
    meta["round.block_range"] = round.blocks.empty() ? "none" : fmt::format("1-{}", round.block_count());
    meta["round.days"] = fmt::format("{}", round.round_days);
    meta["round.transactions"] = fmt::format("{}", round.transaction_count());
    meta["round.accounts"] = fmt::format("{}", m);
    meta["round.degenerate"] = out.graph.degenerate ? "true" : "false";
    if (out.hodge) meta["hodge.consistency_ratio"] = fmt::format("{:.12g}", out.hodge->consistency_ratio);

    if (!ballots.empty()) out.election = tally_votes(ballots, out.report, params.election);
    return out;
}

std::size_t best_rank(std::span<const AccountId> accounts, std::span<const double> scores, std::span<const AccountId> group) {
    const auto ranking = global_ranking(std::vector<AccountId>(accounts.begin(), accounts.end()),
                                        std::vector<double>(scores.begin(), scores.end()));
    for (std::size_t pos = 0; pos < ranking.order.size(); ++pos)
        if (std::find(group.begin(), group.end(), ranking.accounts[ranking.order[pos]]) != group.end()) return pos + 1;
    return 0;
}

ExperimentResult loop_attack_experiment(const ScenarioConfig& base, std::span<const std::int64_t> multiplicities,
                                        const Params& params) {
    if (multiplicities.empty()) throw UsageError("loop attack sweep needs at least one multiplicity");
    if (base.ring_size < 2) throw UsageError("loop attack sweep needs scenario.ring_size >= 2");

    ExperimentResult result;
    result.rng_algorithm = Rng::kAlgorithm;
    for (const auto k : multiplicities) {
        ScenarioConfig config = base;
        config.multiplicity = k;
        const auto scenario = generate_scenario(config);
        const auto outcome = run_round(scenario.round, params);
        if (!outcome.hodge) throw DataError("loop attack sweep produced a round without transfers");
        const auto& g = outcome.graph;
        const auto& ring = scenario.roles.ring;

        ExperimentRow row;
        row.multiplicity = k;
        row.attacker_score = outcome.hodge->score[*g.index_of(ring.front())];
        row.attacker_rank = best_rank(g.accounts, outcome.hodge->score, ring);
        const auto [lo, hi] = std::minmax_element(outcome.hodge->score.begin(), outcome.hodge->score.end());
        row.score_range = *hi - *lo;
        row.consistency_ratio = outcome.hodge->consistency_ratio;

        const auto& shares = outcome.loops.shares;
        std::vector<std::size_t> by_share(shares.size());
        for (std::size_t i = 0; i < by_share.size(); ++i) by_share[i] = i;
        std::stable_sort(by_share.begin(), by_share.end(), [&](std::size_t a, std::size_t b) { return shares[a] > shares[b]; });
        row.ring_top_shares = outcome.loops.total_inconsistent > 0.0 && by_share.size() >= ring.size();
        for (std::size_t p = 0; p < ring.size() && row.ring_top_shares; ++p)
            row.ring_top_shares = std::find(ring.begin(), ring.end(), g.accounts[by_share[p]]) != ring.end();
        for (const auto& id : ring)
            if (auto idx = g.index_of(id)) row.ring_energy_share += shares[*idx];

        const auto pr = pagerank(StochasticMatrix::from_graph(g), params.alpha, params.power);
        row.pagerank_rank = best_rank(g.accounts, pr.scores, ring);
        const auto vpr = volume_pagerank(g, params.alpha, params.power);
        row.volume_pagerank_rank = best_rank(g.accounts, vpr.scores, ring);

        const auto nem = nem_netflow_matrix(g);
        row.loop_netflow_zero = true;
        for (const auto& id : scenario.roles.bounce) {
            const auto idx = g.index_of(id);
            if (!idx) continue;
            for (const auto& e : nem.entries)
                if (e.from == *idx || e.to == *idx) row.loop_netflow_zero = false;
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace dpor
