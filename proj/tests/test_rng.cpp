#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cyclegap/rng.hpp"

using namespace cyclegap;

TEST(Rng, SameKeySameSequence) {
    Rng a(7, 3, 11), b(7, 3, 11);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DifferentStreamsDiverge) {
    Rng a(7, 0), b(7, 1), c(8, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 100; ++i) {
        auto x = a.next();
        same_ab += x == b.next();
        same_ac += x == c.next();
    }
    EXPECT_EQ(same_ab, 0);
    EXPECT_EQ(same_ac, 0);
}

TEST(Rng, ChildMatchesExplicitSubstream) {
    Rng parent(5, 2);
    parent.next();  // parent state must not matter
    Rng child = parent.child(9);
    Rng direct(5, 2, 9);
    for (int i = 0; i < 50; ++i) ASSERT_EQ(child.next(), direct.next());
}

TEST(Rng, BelowStaysInRangeAndIsRoughlyUniform) {
    Rng rng(1);
    std::vector<int> counts(6, 0);
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        auto x = rng.below(6);
        ASSERT_LT(x, 6u);
        ++counts[x];
    }
    // Chi-square with 5 dof; 20.5 is the 0.999 quantile.
    double chi = 0;
    for (int c : counts) chi += (c - draws / 6.0) * (c - draws / 6.0) / (draws / 6.0);
    EXPECT_LT(chi, 20.5);
    EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Rng, Uniform01InUnitInterval) {
    Rng rng(2);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Rng, ShuffleIsUniformOverPermutationsOfThree) {
    Rng rng(3);
    std::map<std::vector<int>, int> seen;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        std::vector<int> v{0, 1, 2};
        shuffle(v, rng);
        ++seen[v];
    }
    ASSERT_EQ(seen.size(), 6u);
    for (const auto& [perm, c] : seen) EXPECT_NEAR(c / double(draws), 1.0 / 6, 0.01);
}

TEST(Rng, RandomPermutationIsAPermutation) {
    Rng rng(4);
    auto p = random_permutation(100, rng);
    std::vector<std::uint32_t> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint32_t> id(100);
    std::iota(id.begin(), id.end(), 0u);
    EXPECT_EQ(sorted, id);
}

TEST(Rng, SampleWithoutReplacementDistinctAndUniform) {
    Rng rng(5);
    std::vector<int> hits(10, 0);
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        auto s = sample_without_replacement(10, 3, rng);
        std::set<std::uint32_t> distinct(s.begin(), s.end());
        ASSERT_EQ(distinct.size(), 3u);
        for (auto x : s) {
            ASSERT_LT(x, 10u);
            ++hits[x];
        }
    }
    // Each element is included with probability 3/10.
    for (int h : hits) EXPECT_NEAR(h / double(draws), 0.3, 0.015);
    EXPECT_THROW(sample_without_replacement(3, 4, rng), std::invalid_argument);
}

TEST(Rng, SplitmixIsAFixedFunction) {
    // Reference values of the published splitmix64 finalizer on 0 and 1.
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(1), 0x910a2dec89025cc1ULL);
}
