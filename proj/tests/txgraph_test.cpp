#include <gtest/gtest.h>

#include <cmath>

#include "dpor/error.hpp"
#include "dpor/scenario.hpp"
#include "dpor/txgraph.hpp"
#include "test_support.hpp"

namespace dpor {
namespace {

using testing::parse_text;

ShrinkParams no_shrink() {
    ShrinkParams p;
    p.eta = 0.0;
    return p;
}

TEST(TransactionWeight, HalvesAtDayFiftyForBaseTwo) {
    const ShrinkParams p{};
    EXPECT_EQ(transaction_weight(1000.0, std::int64_t{50}, p), 500.0);
    EXPECT_EQ(transaction_weight(1000.0, std::int64_t{50}, no_shrink()), 1000.0);
    EXPECT_NEAR(transaction_weight(1000.0, std::int64_t{1}, p), 986.2327044933592, 1e-9);
    // Same day through ceil(k d / n): block 60 of 120 over 100 days is day 50.
    EXPECT_EQ(transaction_weight(1000.0, std::uint64_t{60}, 100, std::uint64_t{120}, p), 500.0);
}

TEST(ShrinkParams, NemPresetAndValidation) {
    const auto nem = ShrinkParams::nem();
    EXPECT_DOUBLE_EQ(shrink_factor(1, nem), 0.9);
    EXPECT_THROW((ShrinkParams{1.0, 0.02}.validate()), UsageError);
    EXPECT_THROW((ShrinkParams{0.5, 0.02}.validate()), UsageError);
    EXPECT_TRUE(ShrinkParams{}.uses_shrunk_normalizer());
    EXPECT_FALSE(no_shrink().uses_shrunk_normalizer());
}

TEST(AggregateBlockTransfers, SumsRepeatsKeepsDirections) {
    const Block repeats{1, {{1, "i", "j", TokenAmount::from_tokens(30)}, {1, "i", "j", TokenAmount::from_tokens(70)}}};
    EXPECT_EQ(aggregate_block_transfers(repeats), (PairTotals{{{"i", "j"}, TokenAmount::from_tokens(100)}}));
    const Block mutual{1, {{1, "i", "j", TokenAmount::from_tokens(50)}, {1, "j", "i", TokenAmount::from_tokens(50)}}};
    EXPECT_EQ(aggregate_block_transfers(mutual),
              (PairTotals{{{"i", "j"}, TokenAmount::from_tokens(50)}, {{"j", "i"}, TokenAmount::from_tokens(50)}}));
    EXPECT_TRUE(aggregate_block_transfers(Block{1, {}}).empty());
}

TEST(BuildTransferGraph, SingleEdge) {
    const auto g = build_transfer_graph(parse_text("meta,d,1\ntx,1,i,j,100\n"), no_shrink());
    EXPECT_EQ(g.share(0, 1), 1.0);
    EXPECT_EQ(g.normalizer, 100.0);
}

TEST(BuildTransferGraph, SymmetricPair) {
    const auto g = build_transfer_graph(parse_text("meta,d,1\ntx,1,i,j,100\ntx,2,j,i,100\n"), no_shrink());
    EXPECT_EQ(g.share(0, 1), 0.5);
    EXPECT_EQ(g.share(1, 0), 0.5);
}

// Oracle values from an independent evaluation of the shrinkage sums.
TEST(BuildTransferGraph, MixedThreeAccountRound) {
    const auto round = parse_text(
        "meta,d,2\n"
        "tx,1,a,b,100\ntx,1,b,c,50\ntx,1,a,b,20\n"
        "tx,2,c,a,80\ntx,2,a,c,40\n");
    const auto g = build_transfer_graph(round, ShrinkParams{});
    const auto a = *g.index_of("a"), b = *g.index_of("b"), c = *g.index_of("c");
    EXPECT_NEAR(g.weight(a, b), 118.3479245392031, 1e-10);
    EXPECT_NEAR(g.weight(a, c), 38.90619789649142, 1e-10);
    EXPECT_NEAR(g.weight(b, c), 49.31163522466796, 1e-10);
    EXPECT_NEAR(g.weight(c, a), 77.81239579298284, 1e-10);
    EXPECT_EQ(g.weight(b, a), 0.0);
    EXPECT_NEAR(g.share(a, b), 0.41616391098277206, 1e-14);
    EXPECT_NEAR(g.share(a, c), 0.1368114864803576, 1e-14);
    EXPECT_NEAR(g.share(b, c), 0.17340162957615501, 1e-14);
    EXPECT_NEAR(g.share(c, a), 0.2736229729607152, 1e-14);
    EXPECT_NEAR(g.normalizer, 284.37815345334536, 1e-10);
    EXPECT_TRUE(g.shrunk_normalizer);
    EXPECT_EQ(g.raw_volume, TokenAmount::from_tokens(290));
    EXPECT_EQ(g.transaction_count, 5u);
    EXPECT_EQ(g.block_tx_counts, (std::vector<std::size_t>{3, 2}));

    ShrinkParams raw;
    raw.normalizer = Normalizer::raw;
    EXPECT_EQ(build_transfer_graph(round, raw).normalizer, 290.0);
}

TEST(BuildTransferGraph, EmptyRoundIsDegenerate) {
    const auto g = build_transfer_graph(parse_text("meta,d,1\nstake,a,0,10\n"), ShrinkParams{});
    EXPECT_TRUE(g.degenerate);
    EXPECT_TRUE(g.entries.empty());
    EXPECT_EQ(g.accounts, (std::vector<AccountId>{"a"}));
}

// Property: shares sum to 1 under the shrunk normalizer and the raw one with no shrinkage.
TEST(TxGraphProperty, SharesSumToOne) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        ScenarioConfig c;
        c.seed = seed;
        const auto round = generate_scenario(c).round;
        for (const auto& params : {ShrinkParams{}, no_shrink(), ShrinkParams::nem()}) {
            const auto g = build_transfer_graph(round, params);
            double sum = 0.0;
            for (const auto& e : g.entries) sum += e.share;
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

// Property: with eta > 0, the same transfer weighs strictly less in a later block day.
TEST(TxGraphProperty, ShrinkageIsMonotone) {
    for (const auto& params : {ShrinkParams{}, ShrinkParams::nem(), ShrinkParams{3.0, 0.5}}) {
        double previous = transaction_weight(1000.0, std::int64_t{0}, params);
        EXPECT_EQ(previous, 1000.0);
        for (std::int64_t d = 1; d <= 365; ++d) {
            const double w = transaction_weight(1000.0, d, params);
            EXPECT_LT(w, previous);
            previous = w;
        }
    }
}

}  // namespace
}  // namespace dpor
