#include <gtest/gtest.h>

#include "dpor/error.hpp"
#include "dpor/scenario.hpp"
#include "test_support.hpp"

namespace dpor {
namespace {

std::size_t ring_transactions(const LedgerRound& round, TokenAmount* total = nullptr) {
    std::size_t n = 0;
    for (const auto& b : round.blocks)
        for (const auto& t : b.transactions)
            if (t.from.starts_with("ring") && t.to.starts_with("ring")) {
                ++n;
                if (total) *total += t.amount;
            }
    return n;
}

TEST(GenerateScenario, SameSeedSameBytes) {
    ScenarioConfig c;
    c.ring_size = 3;
    c.whale_stake = 10000;
    c.sybil_fanout = 4;
    const auto a = generate_scenario(c), b = generate_scenario(c);
    EXPECT_EQ(testing::ledger_text(a.round), testing::ledger_text(b.round));
    c.seed = 43;
    EXPECT_NE(testing::ledger_text(generate_scenario(c).round), testing::ledger_text(a.round));
}

TEST(GenerateScenario, ZeroMultiplicityHasNoRingTransfers) {
    ScenarioConfig c;
    c.ring_size = 3;
    c.multiplicity = 0;
    EXPECT_EQ(ring_transactions(generate_scenario(c).round), 0u);
}

TEST(GenerateScenario, RingCounting) {
    ScenarioConfig c;
    c.ring_size = 3;
    c.multiplicity = 5;
    c.hop_amount = 100;
    TokenAmount total;
    EXPECT_EQ(ring_transactions(generate_scenario(c).round, &total), 15u);
    EXPECT_EQ(total, TokenAmount::from_tokens(1500));
}

TEST(GenerateScenario, RingHopsRoundRobinOverConsecutiveBlocks) {
    ScenarioConfig c;
    c.ring_size = 3;
    c.multiplicity = 2;
    const auto round = generate_scenario(c).round;
    std::vector<std::uint64_t> heights;
    for (const auto& b : round.blocks)
        for (const auto& t : b.transactions)
            if (t.from.starts_with("ring")) heights.push_back(b.height);
    EXPECT_EQ(heights, (std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6}));
}

TEST(GenerateScenario, AttackerSettingsDoNotPerturbHonestTraffic) {
    ScenarioConfig plain;
    ScenarioConfig attacked = plain;
    attacked.ring_size = 4;
    attacked.multiplicity = 9;
    attacked.sybil_fanout = 3;
    const auto a = generate_scenario(plain), b = generate_scenario(attacked);
    for (std::size_t i = 0; i < a.round.blocks.size(); ++i) {
        std::vector<TransactionRecord> honest;
        for (const auto& t : b.round.blocks[i].transactions)
            if (t.from.starts_with("h") && t.to.starts_with("h")) honest.push_back(t);
        EXPECT_EQ(honest, a.round.blocks[i].transactions);
    }
    EXPECT_EQ(a.ballots.size(), b.ballots.size());
}

TEST(GenerateScenario, ChainTopologyOnlyLinksNeighbours) {
    ScenarioConfig c;
    c.topology = HonestTopology::chain;
    for (const auto& b : generate_scenario(c).round.blocks)
        for (const auto& t : b.transactions) EXPECT_EQ(std::stoi(t.to.substr(1)), std::stoi(t.from.substr(1)) + 1);
}

TEST(ScenarioConfig, RejectsInfeasibleSettings) {
    ScenarioConfig c;
    c.ring_size = 1;
    EXPECT_THROW(generate_scenario(c), UsageError);
    c = {};
    c.multiplicity = -1;
    EXPECT_THROW(c.validate(), UsageError);
    c = {};
    c.honest_transactions = c.blocks - 1;
    EXPECT_THROW(c.validate(), UsageError);
    Config bad;
    bad.set("scenario.ring_sz", "3");
    EXPECT_THROW(ScenarioConfig::from_config(bad), UsageError);
    Config topo;
    topo.set("scenario.honest_topology", "star");
    EXPECT_THROW(ScenarioConfig::from_config(topo), UsageError);
}

TEST(ScenarioConfig, ReadsKeysAndSnapshotsRng) {
    Config cfg;
    cfg.set("scenario.seed", "7");
    cfg.set("scenario.ring_size", "3");
    cfg.set("scenario.honest_topology", "chain");
    const auto c = ScenarioConfig::from_config(cfg);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.ring_size, 3u);
    EXPECT_EQ(c.topology, HonestTopology::chain);
    EXPECT_EQ(c.snapshot().at("scenario.rng"), "mt19937_64");
}

// Property: every generated token is accounted for by the honest draws plus
// the analytic attacker volume.
TEST(ScenarioProperty, VolumeAccounting) {
    Rng rng(59);
    for (int trial = 0; trial < 30; ++trial) {
        ScenarioConfig c;
        c.seed = rng.next();
        c.ring_size = rng.below(2) ? 0 : 2 + rng.below(5);
        c.multiplicity = static_cast<std::int64_t>(rng.below(20));
        c.bounce_amount = static_cast<std::int64_t>(rng.below(3)) * 15;
        c.sybil_fanout = rng.below(4);
        const auto round = generate_scenario(c).round;
        TokenAmount honest, attack;
        for (const auto& b : round.blocks)
            for (const auto& t : b.transactions) (t.from.starts_with("h") && t.to.starts_with("h") ? honest : attack) += t.amount;
        EXPECT_EQ(attack, attack_volume(c));
        EXPECT_EQ(honest + attack, round.total_volume());
        EXPECT_GE(honest, TokenAmount::from_tokens(c.amount_min) * static_cast<std::int64_t>(c.honest_transactions));
    }
}

TEST(Rng, PortableDraws) {
    // First outputs of mt19937_64 seeded with 5489 are fixed by the standard.
    Rng rng(5489);
    EXPECT_EQ(rng.next(), 14514284786278117030ull);
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.below(7);
        EXPECT_LT(x, 7u);
        EXPECT_EQ(x, b.below(7));
        const auto r = a.range(-3, 3);
        EXPECT_GE(r, -3);
        EXPECT_LE(r, 3);
        b.range(-3, 3);
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        b.uniform();
    }
}

}  // namespace
}  // namespace dpor
