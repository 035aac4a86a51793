#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace msens;

namespace {

MAryFunction sample_function() {
    return MAryFunction::dense(3, 2, Alphabet::integer, {2, 0, 1, 2, 2, 1, 2, 2, 1});
}

MAryFunction sum_mod(int m, int n) {
    return MAryFunction::tabulate(m, n, Alphabet::unity, [m](const Vertex& x) {
        int s = 0;
        for (int v : x) s += v;
        return s % m;
    });
}

MAryFunction dictator(int m, int n) {
    return MAryFunction::tabulate(m, n, Alphabet::unity, [](const Vertex& x) { return x[0]; });
}

}  // namespace

TEST(HammingSpace, IndexOrder) {
    HammingSpace s(3, 2);
    EXPECT_EQ(s.size(), 9u);
    EXPECT_EQ(s.index(std::vector<int>{1, 2}), 5u);
    EXPECT_EQ(s.vertex(5), (Vertex{1, 2}));
    EXPECT_EQ(s.digit(5, 0), 1);
    EXPECT_THROW(s.validate(std::vector<int>{3, 0}), InvalidParameter);
    EXPECT_THROW(HammingSpace(1, 2), InvalidParameter);
}

TEST(MAryFunction, RejectsBadTables) {
    EXPECT_THROW(MAryFunction::dense(3, 2, Alphabet::unity, {0, 1, 2}), InvalidParameter);
    EXPECT_THROW(MAryFunction::dense(2, 1, Alphabet::unity, {0, 2}), InvalidParameter);
}

TEST(ApplyBlock, Examples) {
    const auto b1 = ShiftBlock::from_multiset(std::vector<int>{0, 0, 1}, 3);
    ASSERT_TRUE(b1);
    EXPECT_EQ(b1->shifts, (std::map<int, int>{{0, 2}, {1, 1}}));
    EXPECT_EQ(apply_block(std::vector<int>{0, 0, 0}, *b1, 3), (Vertex{2, 1, 0}));
    EXPECT_EQ(apply_block(std::vector<int>{1, 0, 2}, ShiftBlock{{{0, 1}}}, 3), (Vertex{2, 0, 2}));
    EXPECT_THROW(apply_block(std::vector<int>{0, 0}, ShiftBlock{}, 3), InvalidParameter);
    EXPECT_THROW(apply_block(std::vector<int>{0, 0}, ShiftBlock{{{2, 1}}}, 3), InvalidParameter);
    const Vertex x{1, 2, 0};
    const Vertex y = apply_block(x, ShiftBlock{{{1, 2}}}, 3);
    EXPECT_EQ(apply_block(y, ShiftBlock{{{1, 1}}}, 3), x);
}

TEST(ApplyBlock, MultisetNormalization) {
    EXPECT_FALSE(ShiftBlock::from_multiset(std::vector<int>{1, 1, 1}, 3));
    const auto b = ShiftBlock::from_multiset(std::vector<int>{0, 1, 1, 1, 1}, 3);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->shifts, (std::map<int, int>{{0, 1}, {1, 1}}));
}

TEST(ApplyBlockProperty, DisjointBlocksCompose) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> val(0, 4), sh(1, 4);
    for (int t = 0; t < 200; ++t) {
        Vertex x(6);
        for (auto& v : x) v = val(rng);
        ShiftBlock a{{{0, sh(rng)}, {3, sh(rng)}}}, b{{{1, sh(rng)}, {5, sh(rng)}}}, merged = a;
        merged.shifts.insert(b.shifts.begin(), b.shifts.end());
        EXPECT_EQ(apply_block(apply_block(x, a, 5), b, 5), apply_block(x, merged, 5));
    }
}

TEST(Sensitivity, Examples) {
    const auto f = sample_function();
    EXPECT_EQ(local_sensitivity(f, std::vector<int>{0, 1}), 4);
    EXPECT_EQ(sensitivity(f), 4);
    EXPECT_EQ(sensitivity(MAryFunction::constant(3, 3, 1)), 0);
    EXPECT_EQ(sensitivity(sum_mod(3, 2)), 4);
    for (int m : {2, 3, 5}) {
        const auto d = dictator(m, 3);
        EXPECT_EQ(local_sensitivity(d, std::vector<int>{1, 0, 1}), m - 1);
        EXPECT_EQ(sensitivity(d), m - 1);
    }
}

TEST(Sensitivity, OracleBacked) {
    const auto f = sample_function();
    const auto g = MAryFunction::from_oracle(3, 2, Alphabet::integer, [f](std::span<const int> x) { return f(x); });
    EXPECT_EQ(local_sensitivity(g, std::vector<int>{0, 1}), 4);
    EXPECT_EQ(sensitivity(g), 4);
    const auto big = MAryFunction::from_oracle(3, 40, Alphabet::unity, [](std::span<const int> x) { return x[0]; });
    EXPECT_THROW(sensitivity(big), CapacityExceeded);
    std::mt19937_64 rng(1);
    const SampledBound b = sampled_sensitivity(big, 50, rng);
    EXPECT_EQ(b.value, 2);
    EXPECT_TRUE(b.is_lower_bound);
}

TEST(BlockSensitivity, Examples) {
    const auto f = sample_function();
    EXPECT_EQ(local_block_sensitivity(f, std::vector<int>{1, 0}), 1);
    EXPECT_EQ(local_block_sensitivity(f, std::vector<int>{0, 1}), 2);
    EXPECT_EQ(block_sensitivity(f), 2);
    EXPECT_EQ(block_sensitivity(MAryFunction::constant(3, 2, 0)), 0);
    EXPECT_EQ(block_sensitivity(dictator(3, 3)), 1);
    EXPECT_EQ(block_sensitivity(sum_mod(3, 3)), 3);
}

TEST(BlockSensitivity, CapacityLimit) {
    Limits tight;
    tight.max_bitmask_n = 2;
    EXPECT_THROW(block_sensitivity(sum_mod(2, 3), tight), CapacityExceeded);
}

TEST(BlockSensitivityProperty, MatchesBacktrackingOracle) {
    std::mt19937_64 rng(21);
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 2}, {3, 3}, {4, 2}}) {
        for (int t = 0; t < 15; ++t) {
            const auto f = oracle::random_function(m, n, Alphabet::unity, rng);
            for (const auto& x : oracle::all_vertices(m, n))
                ASSERT_EQ(local_block_sensitivity(f, x), oracle::local_block_sensitivity(f, x));
        }
    }
}

TEST(SensitivityProperty, MatchesPairScanOracle) {
    std::mt19937_64 rng(22);
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}, {4, 2}, {5, 2}}) {
        for (int t = 0; t < 10; ++t) {
            const auto f = oracle::random_function(m, n, Alphabet::unity, rng);
            EXPECT_EQ(sensitivity(f), oracle::sensitivity(f));
        }
    }
}

TEST(MeasuresProperty, ChainHoldsExhaustivelyAtThreeTwo) {
    oracle::for_each_table(3, 2, [](const std::vector<std::uint8_t>& t) {
        const auto f = MAryFunction::dense(3, 2, Alphabet::unity, t);
        const int s = sensitivity(f), bs = block_sensitivity(f);
        ASSERT_LE(s, 2 * bs);
        ASSERT_LE(bs, 2);
    });
}

TEST(MeasuresProperty, LocalBlockAtLeastScaledLocalSensitivity) {
    std::mt19937_64 rng(23);
    for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 4}, {4, 3}, {5, 2}}) {
        for (int t = 0; t < 10; ++t) {
            const auto f = oracle::random_function(m, n, Alphabet::unity, rng);
            for (std::uint64_t i = 0; i < f.space().size(); ++i) {
                const Vertex x = f.space().vertex(i);
                const int s = local_sensitivity(f, x), bs = local_block_sensitivity(f, x);
                ASSERT_LE(s, (m - 1) * bs);
                ASSERT_LE(bs, n);
            }
        }
    }
}

TEST(ShiftFunction, Examples) {
    const auto f = sample_function();
    EXPECT_EQ(shift_function(f, 0), f);
    EXPECT_EQ(shift_function(shift_function(f, 1), 2), f);
    const auto g = shift_function(MAryFunction::constant(3, 1, 0), 1);
    EXPECT_EQ(g.table(), (std::vector<std::uint8_t>{0, 1, 2}));
}

TEST(ShiftFunctionProperty, InverseShift) {
    std::mt19937_64 rng(24);
    for (int m : {2, 3, 4, 5}) {
        for (int t = 0; t < 20; ++t) {
            const auto f = oracle::random_function(m, 2, Alphabet::unity, rng);
            for (int i = 0; i < m; ++i) EXPECT_EQ(shift_function(shift_function(f, i), (m - i) % m), f);
        }
    }
}

TEST(ShiftFunction, OracleBackedStaysOracle) {
    const auto big = MAryFunction::from_oracle(3, 30, Alphabet::unity, [](std::span<const int> x) { return x[0]; });
    const auto g = shift_function(big, 1);
    EXPECT_FALSE(g.is_dense());
    Vertex x(30, 1);
    EXPECT_EQ(g(x), (1 + 30) % 3);
}

TEST(Relabel, PreservesMeasures) {
    const auto f = sample_function();
    const auto g = relabel(f, Alphabet::unity);
    EXPECT_EQ(g.alphabet(), Alphabet::unity);
    EXPECT_EQ(sensitivity(g), sensitivity(f));
    EXPECT_EQ(block_sensitivity(g), block_sensitivity(f));
    const int dg = degree(g);
    EXPECT_GE(dg, 1);
    EXPECT_LE(dg, 16);
}
