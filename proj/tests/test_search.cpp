#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace msens;

namespace {

SearchTask task(int m, int n, Constraint c, std::uint64_t seed = 1, std::uint64_t budget = 20000) {
    SearchTask t;
    t.m = m;
    t.n = n;
    t.constraint = c;
    t.seed = seed;
    t.budget = budget;
    return t;
}

// Optimum by enumeration with the pair-scan degree oracle.
int brute_optimum(int m, int n, Constraint c, int* feasible_count = nullptr) {
    int best = kDegreePlusInf, count = 0;
    oracle::for_each_table(m, n, [&](const std::vector<std::uint8_t>& t) {
        const VertexPartition p(m, n, t);
        const auto sizes = c == Constraint::rotated ? rotate(p).class_sizes() : p.class_sizes();
        bool ok;
        if (c == Constraint::unequal) {
            ok = std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) != sizes.end();
        } else {
            std::vector<BigInt> raw(sizes.begin(), sizes.end());
            ok = !cyc_reduce(m, raw).is_zero();
        }
        if (!ok) return;
        ++count;
        const auto d = oracle::class_degrees(p).max_degree;
        best = std::min(best, *std::max_element(d.begin(), d.end()));
    });
    if (feasible_count) *feasible_count = count;
    return best;
}

void expect_valid(const SearchResult& r, Constraint c) {
    ASSERT_TRUE(r.found());
    EXPECT_FALSE(cyc_is_zero(r.certificate));
    EXPECT_EQ(r.certificate, constraint_certificate(*r.best, c));
    EXPECT_EQ(r.objective, degree_stats(*r.best).max_Delta());
    EXPECT_TRUE(satisfies(*r.best, c));
}

}  // namespace

TEST(Constraint, Parse) {
    EXPECT_EQ(parse_constraint("strong"), Constraint::strong);
    EXPECT_EQ(parse_constraint("rotated"), Constraint::rotated);
    EXPECT_EQ(parse_constraint("unequal"), Constraint::unequal);
    EXPECT_THROW(parse_constraint("other"), InvalidParameter);
}

TEST(Exhaustive, HypercubeTwoTwo) {
    int feasible = 0;
    const int want = brute_optimum(2, 2, Constraint::strong, &feasible);
    // 16 partitions, of which C(4,2) = 6 have equal class sizes
    EXPECT_EQ(feasible, 10);
    const SearchResult r = exhaustive_search(task(2, 2, Constraint::strong));
    expect_valid(r, Constraint::strong);
    EXPECT_EQ(r.objective, want);
}

TEST(Exhaustive, MatchesBruteForce) {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 1}, {2, 3}, {4, 1}, {3, 2}})
        for (Constraint c : {Constraint::strong, Constraint::rotated, Constraint::unequal}) {
            const SearchResult r = exhaustive_search(task(m, n, c));
            expect_valid(r, c);
            EXPECT_EQ(r.objective, brute_optimum(m, n, c)) << m << "," << n << " " << to_string(c);
        }
}

TEST(Exhaustive, HypercubeRespectsSqrtBound) {
    std::vector<SearchResult> results;
    for (int n = 1; n <= 3; ++n) {
        const SearchResult r = exhaustive_search(task(2, n, Constraint::strong));
        EXPECT_GE(r.objective, static_cast<int>(std::ceil(std::sqrt(n))));
        results.push_back(r);
    }
    const auto rows = tabulate(results);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NE(render_table(rows).find("maxDelta"), std::string::npos);
}

TEST(Exhaustive, CapacityExceeded) {
    EXPECT_THROW(exhaustive_search(task(3, 3, Constraint::strong)), CapacityExceeded);
}

TEST(Anneal, NeverBeatsExhaustive) {
    for (Constraint c : {Constraint::strong, Constraint::rotated, Constraint::unequal}) {
        const int opt = exhaustive_search(task(3, 2, c)).objective;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const SearchResult r = anneal_search(task(3, 2, c, seed, 5000));
            expect_valid(r, c);
            EXPECT_GE(r.objective, opt);
        }
    }
}

TEST(Anneal, BudgetZeroReturnsInitial) {
    SearchTask t = task(3, 3, Constraint::strong, 4, 0);
    t.start = StartKind::single_class;
    const SearchResult r = anneal_search(t);
    expect_valid(r, Constraint::strong);
    EXPECT_EQ(r.objective, 6);
    EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Anneal, SingleClassStartSatisfiesEveryConstraint) {
    for (Constraint c : {Constraint::strong, Constraint::rotated, Constraint::unequal}) {
        SearchTask t = task(3, 2, c, 9, 0);
        t.start = StartKind::single_class;
        expect_valid(anneal_search(t), c);
    }
}

TEST(Anneal, ReproducibleForFixedSeed) {
    const SearchResult a = anneal_search(task(3, 3, Constraint::rotated, 77, 3000));
    const SearchResult b = anneal_search(task(3, 3, Constraint::rotated, 77, 3000));
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(*a.best, *b.best);
}

TEST(Anneal, MergedResultIndependentOfThreadCount) {
    SearchTask t = task(3, 3, Constraint::strong, 5, 2000);
    t.chains = 4;
    t.threads = 1;
    const SearchResult a = anneal_search(t);
    t.threads = 4;
    const SearchResult b = anneal_search(t);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(*a.best, *b.best);
}

TEST(Tabulate, EmptyAndBestPerKey) {
    EXPECT_TRUE(tabulate({}).empty());
    EXPECT_EQ(render_table({}), "");
    const SearchResult worse = anneal_search(task(3, 2, Constraint::strong, 1, 0));
    const SearchResult better = exhaustive_search(task(3, 2, Constraint::strong));
    const auto rows = tabulate({worse, better});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].objective, better.objective);
}
