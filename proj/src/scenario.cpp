#include "dpor/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "dpor/error.hpp"
#include "dpor/rng.hpp"

namespace dpor {

namespace {

const std::set<std::string>& scenario_keys() {
    static const std::set<std::string> keys{
        "scenario.seed",          "scenario.honest_accounts", "scenario.blocks",         "scenario.days",
        "scenario.honest_transactions", "scenario.amount_min", "scenario.amount_max",    "scenario.popularity_skew", "scenario.honest_topology",
        "scenario.stake_fraction", "scenario.stake_min",      "scenario.stake_max",      "scenario.usage_min",
        "scenario.usage_max",     "scenario.ring_size",       "scenario.multiplicity",   "scenario.hop_amount",
        "scenario.funding_amount", "scenario.bounce_amount",  "scenario.whale_stake",    "scenario.sybil_fanout",
        "scenario.sybil_amount",  "scenario.ballot_choices",  "scenario.voter_fraction",
    };
    return keys;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_config(const Config& config) {
    for (const auto& [key, value] : config.values())
        if (key.starts_with("scenario.") && !scenario_keys().contains(key)) throw UsageError("unknown scenario key '" + key + "'");
    ScenarioConfig c;
    c.seed = static_cast<std::uint64_t>(config.get_int("scenario.seed", static_cast<std::int64_t>(c.seed)));
    c.honest_accounts = config.get_size("scenario.honest_accounts", c.honest_accounts);
    c.blocks = config.get_size("scenario.blocks", c.blocks);
    c.days = config.get_int("scenario.days", c.days);
    c.honest_transactions = config.get_size("scenario.honest_transactions", c.honest_transactions);
    c.amount_min = config.get_int("scenario.amount_min", c.amount_min);
    c.amount_max = config.get_int("scenario.amount_max", c.amount_max);
    c.popularity_skew = config.get_double("scenario.popularity_skew", c.popularity_skew);
    if (const auto t = config.get_string("scenario.honest_topology", "random"); t == "chain")
        c.topology = HonestTopology::chain;
    else if (t != "random")
        throw UsageError("scenario.honest_topology must be 'random' or 'chain', got '" + t + "'");
    c.stake_fraction = config.get_double("scenario.stake_fraction", c.stake_fraction);
    c.stake_min = config.get_int("scenario.stake_min", c.stake_min);
    c.stake_max = config.get_int("scenario.stake_max", c.stake_max);
    c.usage_min = config.get_double("scenario.usage_min", c.usage_min);
    c.usage_max = config.get_double("scenario.usage_max", c.usage_max);
    c.ring_size = config.get_size("scenario.ring_size", c.ring_size);
    c.multiplicity = config.get_int("scenario.multiplicity", c.multiplicity);
    c.hop_amount = config.get_int("scenario.hop_amount", c.hop_amount);
    c.funding_amount = config.get_int("scenario.funding_amount", c.funding_amount);
    c.bounce_amount = config.get_int("scenario.bounce_amount", c.bounce_amount);
    c.whale_stake = config.get_int("scenario.whale_stake", c.whale_stake);
    c.sybil_fanout = config.get_size("scenario.sybil_fanout", c.sybil_fanout);
    c.sybil_amount = config.get_int("scenario.sybil_amount", c.sybil_amount);
    c.ballot_choices = config.get_size("scenario.ballot_choices", c.ballot_choices);
    c.voter_fraction = config.get_double("scenario.voter_fraction", c.voter_fraction);
    c.validate();
    return c;
}

void ScenarioConfig::validate() const {
    if (honest_accounts < 2) throw UsageError("scenario.honest_accounts must be at least 2");
    if (blocks == 0 || days <= 0) throw UsageError("scenario.blocks and scenario.days must be positive");
    if (honest_transactions < blocks) throw UsageError("scenario.honest_transactions must be >= scenario.blocks (no empty blocks)");
    if (amount_min <= 0 || amount_max < amount_min) throw UsageError("scenario amounts need 0 < amount_min <= amount_max");
    if (stake_min <= 0 || stake_max < stake_min) throw UsageError("scenario stakes need 0 < stake_min <= stake_max");
    if (!(stake_fraction >= 0.0 && stake_fraction <= 1.0)) throw UsageError("scenario.stake_fraction must lie in [0,1]");
    if (!(0.0 <= usage_min && usage_min <= usage_max && usage_max <= 1.0)) throw UsageError("scenario usage bounds must satisfy 0 <= min <= max <= 1");
    if (ring_size == 1) throw UsageError("scenario.ring_size must be 0 (disabled) or at least 2");
    if (multiplicity < 0) throw UsageError("scenario.multiplicity must be >= 0");
    if (ring_size >= 2 && (hop_amount <= 0 || funding_amount <= 0)) throw UsageError("ring attacker needs positive hop and funding amounts");
    if (bounce_amount < 0 || whale_stake < 0 || sybil_amount <= 0) throw UsageError("scenario amounts must be nonnegative");
    if (!(voter_fraction >= 0.0 && voter_fraction <= 1.0)) throw UsageError("scenario.voter_fraction must lie in [0,1]");
}

std::map<std::string, std::string> ScenarioConfig::snapshot() const {
    return {
        {"scenario.seed", fmt::format("{}", seed)},
        {"scenario.honest_accounts", fmt::format("{}", honest_accounts)},
        {"scenario.blocks", fmt::format("{}", blocks)},
        {"scenario.days", fmt::format("{}", days)},
        {"scenario.honest_transactions", fmt::format("{}", honest_transactions)},
        {"scenario.amount_min", fmt::format("{}", amount_min)},
        {"scenario.amount_max", fmt::format("{}", amount_max)},
        {"scenario.popularity_skew", fmt::format("{}", popularity_skew)},
        {"scenario.honest_topology", topology == HonestTopology::chain ? "chain" : "random"},
        {"scenario.stake_fraction", fmt::format("{}", stake_fraction)},
        {"scenario.stake_min", fmt::format("{}", stake_min)},
        {"scenario.stake_max", fmt::format("{}", stake_max)},
        {"scenario.usage_min", fmt::format("{}", usage_min)},
        {"scenario.usage_max", fmt::format("{}", usage_max)},
        {"scenario.ring_size", fmt::format("{}", ring_size)},
        {"scenario.multiplicity", fmt::format("{}", multiplicity)},
        {"scenario.hop_amount", fmt::format("{}", hop_amount)},
        {"scenario.funding_amount", fmt::format("{}", funding_amount)},
        {"scenario.bounce_amount", fmt::format("{}", bounce_amount)},
        {"scenario.whale_stake", fmt::format("{}", whale_stake)},
        {"scenario.sybil_fanout", fmt::format("{}", sybil_fanout)},
        {"scenario.sybil_amount", fmt::format("{}", sybil_amount)},
        {"scenario.ballot_choices", fmt::format("{}", ballot_choices)},
        {"scenario.voter_fraction", fmt::format("{}", voter_fraction)},
        {"scenario.rng", Rng::kAlgorithm},
    };
}

TokenAmount attack_volume(const ScenarioConfig& c) {
    TokenAmount total;
    if (c.ring_size >= 2)
        total += TokenAmount::from_tokens(c.funding_amount) +
                 TokenAmount::from_tokens(c.hop_amount) * (static_cast<std::int64_t>(c.ring_size) * c.multiplicity);
    total += TokenAmount::from_tokens(c.bounce_amount) * (2 * c.multiplicity);
    total += TokenAmount::from_tokens(c.sybil_amount) * (2 * static_cast<std::int64_t>(c.sybil_fanout));
    return total;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    config.validate();
    Rng rng(config.seed);
    Scenario sc;
    auto& roles = sc.roles;
    auto& round = sc.round;
    round.round_days = config.days;
    round.blocks.resize(config.blocks);
    for (std::size_t b = 0; b < config.blocks; ++b) round.blocks[b].height = b + 1;

    auto push_tx = [&](std::size_t block_index, const AccountId& from, const AccountId& to, TokenAmount amount) {
        auto& block = round.blocks[block_index % config.blocks];
        block.transactions.push_back({block.height, from, to, amount});
    };

    for (std::size_t i = 0; i < config.honest_accounts; ++i) roles.honest.push_back(fmt::format("h{:03}", i));

    // Honest traffic: uniform senders, popularity-weighted receivers (or the
    // next account along the chain).
    std::vector<double> cumulative;
    double acc = 0.0;
    for (std::size_t j = 0; j < config.honest_accounts; ++j) {
        acc += 1.0 / std::pow(static_cast<double>(j + 1), config.popularity_skew);
        cumulative.push_back(acc);
    }
    auto draw_receiver = [&](std::size_t sender) {
        while (true) {
            const double u = rng.uniform() * acc;
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const auto j = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), config.honest_accounts - 1);
            if (j != sender) return j;
        }
    };
    for (std::size_t q = 0; q < config.honest_transactions; ++q) {
        const std::size_t block = q < config.blocks ? q : rng.below(config.blocks);
        std::size_t sender = 0, receiver = 0;
        if (config.topology == HonestTopology::chain) {
            sender = rng.below(config.honest_accounts - 1);
            receiver = sender + 1;
        } else {
            sender = rng.below(config.honest_accounts);
            receiver = draw_receiver(sender);
        }
        const auto cents = rng.range(config.amount_min * 100, config.amount_max * 100);
        push_tx(block, roles.honest[sender], roles.honest[receiver], TokenAmount::from_micros(cents * 10'000));
    }

    for (const auto& id : roles.honest) {
        if (rng.uniform() < config.stake_fraction) {
            const auto amount = TokenAmount::from_tokens(rng.range(config.stake_min, config.stake_max));
            const auto day = rng.range(0, config.days - 1);
            round.stakes.push_back({id, day, amount});
        }
    }
    for (const auto& id : roles.honest)
        for (std::int64_t day = 1; day <= config.days; ++day) {
            const double x = config.usage_min + rng.uniform() * (config.usage_max - config.usage_min);
            round.usage.push_back({id, day, std::clamp(std::round(x * 1e4) / 1e4, 0.0, 1.0)});
        }

    std::vector<AccountId> candidates = roles.honest;
    if (config.whale_stake > 0) {
        roles.whale = "whale";
        candidates.push_back(roles.whale);
        std::sort(candidates.begin(), candidates.end());
    }
    for (const auto& voter : roles.honest) {
        if (rng.uniform() >= config.voter_fraction) continue;
        std::vector<AccountId> pool = candidates;
        Ballot ballot{voter, {}};
        const std::size_t picks = std::min(config.ballot_choices, pool.size());
        for (std::size_t p = 0; p < picks; ++p) {
            const auto j = p + rng.below(pool.size() - p);
            std::swap(pool[p], pool[j]);
            ballot.choices.push_back(pool[p]);
        }
        sc.ballots.push_back(std::move(ballot));
    }

    // Deterministic attacker traffic from here on; no further draws.
    if (config.whale_stake > 0) round.stakes.push_back({roles.whale, 0, TokenAmount::from_tokens(config.whale_stake)});

    std::size_t slot = 0;  // round-robin block cursor
    if (config.ring_size >= 2) {
        roles.funder = roles.honest.front();
        for (std::size_t i = 0; i < config.ring_size; ++i) roles.ring.push_back(fmt::format("ring{}", i));
        push_tx(0, roles.funder, roles.ring.front(), TokenAmount::from_tokens(config.funding_amount));
        const auto hop = TokenAmount::from_tokens(config.hop_amount);
        for (std::int64_t rep = 0; rep < config.multiplicity; ++rep)
            for (std::size_t i = 0; i < config.ring_size; ++i)
                push_tx(slot++, roles.ring[i], roles.ring[(i + 1) % config.ring_size], hop);
    }
    if (config.bounce_amount > 0) {
        roles.bounce = {"bounce0", "bounce1"};
        const auto amount = TokenAmount::from_tokens(config.bounce_amount);
        for (std::int64_t rep = 0; rep < config.multiplicity; ++rep) {
            push_tx(slot, roles.bounce[0], roles.bounce[1], amount);
            push_tx(slot++, roles.bounce[1], roles.bounce[0], amount);
        }
    }
    if (config.sybil_fanout > 0) {
        roles.sybil_hub = "sybil_hub";
        const auto amount = TokenAmount::from_tokens(config.sybil_amount);
        for (std::size_t i = 0; i < config.sybil_fanout; ++i) {
            roles.sybils.push_back(fmt::format("sybil{:03}", i));
            push_tx(slot, roles.sybil_hub, roles.sybils.back(), amount);
            push_tx(slot++, roles.sybils.back(), roles.sybil_hub, amount);
        }
    }

    round.register_referenced_accounts();
    return sc;
}

}  // namespace dpor
