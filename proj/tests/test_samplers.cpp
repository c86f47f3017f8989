#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/rng.hpp"
#include "cyclegap/samplers.hpp"

using namespace cyclegap;

namespace {

bool nice_by_brute_force(const LayeredGraph& g) {
    const auto& s = g.seq();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            std::size_t alive = 0;
            for (Index v = 0; v < s[i]; ++v) {
                std::optional<Index> p = v;
                for (std::size_t gap = i + 1; gap <= j && p; ++gap) p = g.matching(gap).image(*p);
                alive += p.has_value();
            }
            if (alive != s.min_over(i, j)) return false;
        }
    return true;
}

// Every combination of maximum matchings, filtered by the brute-force test.
std::set<std::string> brute_nice_set(const LayerSequence& t) {
    std::vector<std::vector<PartialMatching>> choices;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) choices.push_back(enumerate_matchings(t[i], t[i + 1]));
    std::set<std::string> out;
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
        std::vector<PartialMatching> ms;
        for (std::size_t i = 0; i < idx.size(); ++i) ms.push_back(choices[i][idx[i]]);
        LayeredGraph g(t, ms);
        if (nice_by_brute_force(g)) out.insert(to_layered_text(g));
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == choices[p].size()) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    return out;
}

template <typename Draw>
double empirical_tv(const std::vector<LayeredGraph>& support, int draws, Draw&& draw) {
    std::map<std::string, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[to_layered_text(draw())];
    std::set<std::string> keys;
    for (const auto& g : support) keys.insert(to_layered_text(g));
    double tv = 0;
    for (const auto& k : keys) {
        auto it = counts.find(k);
        double f = it == counts.end() ? 0.0 : it->second / double(draws);
        tv += std::abs(f - 1.0 / keys.size());
    }
    for (const auto& [k, c] : counts)
        if (!keys.count(k)) tv += c / double(draws);
    return tv / 2;
}

// Pearson statistic against uniform on the support; mean K-1 and variance
// 2(K-1) under the null for a uniform multinomial.
template <typename Draw>
double chi_square_z(const std::vector<LayeredGraph>& support, int draws, Draw&& draw) {
    std::map<std::string, int> counts;
    for (const auto& g : support) counts[to_layered_text(g)] = 0;
    const std::size_t K = counts.size();
    for (int i = 0; i < draws; ++i) {
        auto it = counts.find(to_layered_text(draw()));
        if (it == counts.end()) return 1e9;
        ++it->second;
    }
    const double expect = double(draws) / K;
    double chi = 0;
    for (const auto& [k, c] : counts) chi += (c - expect) * (c - expect) / expect;
    return (chi - (K - 1)) / std::sqrt(2.0 * (K - 1));
}

} // namespace

TEST(UniformMatching, SingleVertex) {
    Rng rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_uniform_matching(1, 1, rng), PartialMatching::identity(1));
}

TEST(UniformMatching, FrequenciesOfSmallCases) {
    Rng rng(2);
    for (auto [a, b] : {std::pair<Index, Index>{2, 2}, {2, 3}, {3, 2}}) {
        auto all = enumerate_matchings(a, b);
        std::map<std::string, int> counts;
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) {
            auto m = sample_uniform_matching(a, b, rng);
            ASSERT_TRUE(m.is_maximum());
            std::string key;
            for (auto [l, r] : m.pairs()) key += std::to_string(l) + ">" + std::to_string(r) + " ";
            ++counts[key];
        }
        EXPECT_EQ(counts.size(), all.size());
        for (const auto& [k, c] : counts) EXPECT_NEAR(c / double(draws), 1.0 / all.size(), 0.01);
    }
    EXPECT_EQ(enumerate_matchings(2, 3).size(), 6u);
}

TEST(EnumerateNice, SmallCounts) {
    EXPECT_EQ(enumerate_nice({1, 1}).size(), 1u);
    EXPECT_EQ(enumerate_nice({2, 2}).size(), 2u);
    EXPECT_EQ(enumerate_nice({2, 3, 2}).size(), 12u);
}

TEST(EnumerateNice, MatchesBruteForceFilter) {
    for (LayerSequence t : {LayerSequence{2, 3, 2}, LayerSequence{1, 2, 2, 1}, LayerSequence{2, 3, 1, 3},
                            LayerSequence{3, 2, 3}, LayerSequence{2, 4, 3},
                            LayerSequence{3, 4, 2, 4, 3}}) {
        auto got = enumerate_nice(t);
        std::set<std::string> keys;
        for (const auto& g : got) {
            EXPECT_TRUE(is_nice(g));
            keys.insert(to_layered_text(g));
        }
        EXPECT_EQ(keys.size(), got.size()) << "duplicates";
        EXPECT_EQ(keys, brute_nice_set(t));
    }
}

TEST(EnumerateNice, BudgetIsEnforced) {
    EXPECT_THROW(enumerate_nice({6, 6, 6, 6}, 100), BudgetExceeded);
}

TEST(SampleNice, EqualSizesNeverReject) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        auto [g, rep] = sample_nice_layered({4, 4, 4}, rng);
        EXPECT_TRUE(is_nice(g));
        EXPECT_EQ(rep.rejections, 0u);
        EXPECT_EQ(rep.strategy, SampleStrategy::constructive);
    }
}

TEST(SampleNice, ConstructiveIsUniform) {
    Rng rng(4);
    for (LayerSequence t : {LayerSequence{2, 3, 2}, LayerSequence{1, 2, 2, 1}, LayerSequence{2, 3, 1, 3}}) {
        auto support = enumerate_nice(t);
        double tv = empirical_tv(support, 20000, [&] { return sample_nice_layered(t, rng).first; });
        EXPECT_LE(tv, 0.03) << to_layered_text(support.front());
    }
}

TEST(SampleNice, ConstructiveIsUniformOnLargeSupport) {
    Rng rng(13);
    LayerSequence t{3, 4, 2, 4, 3};
    auto support = enumerate_nice(t);
    double zscore = chi_square_z(support, 200000, [&] { return sample_nice_layered(t, rng).first; });
    EXPECT_LT(std::abs(zscore), 5.0);
}

TEST(SampleNice, RejectionIsUniformAndCountsRejections) {
    Rng rng(5);
    LayerSequence t{2, 3, 2};
    auto support = enumerate_nice(t);
    std::uint64_t rejections = 0;
    double tv = empirical_tv(support, 20000, [&] {
        auto [g, rep] = sample_nice_layered(t, rng, SampleStrategy::rejection);
        rejections += rep.rejections;
        return g;
    });
    EXPECT_LE(tv, 0.03);
    // Acceptance probability is 12/36.
    EXPECT_NEAR(rejections / 20000.0, 2.0, 0.1);
}

TEST(SampleNice, RejectionGivesUpAtMaxDraws) {
    Rng rng(6);
    EXPECT_THROW(sample_nice_layered({2, 9, 2, 9, 2}, rng, SampleStrategy::rejection, 1), BudgetExceeded);
}

TEST(SampleNestedBlock, BaseCaseAndNiceness) {
    Rng rng(7);
    auto g = sample_nested_block(3, {5}, rng);
    EXPECT_EQ(g.seq().values(), (std::vector<std::uint32_t>{5, 5}));
    EXPECT_TRUE(g.matching(1).is_perfect());
    for (int i = 0; i < 50; ++i) EXPECT_TRUE(is_nice(sample_nested_block(2, {2, 3, 5}, rng)));
}

TEST(SampleNestedBlock, UniformOnSmallNest) {
    Rng rng(8);
    auto support = enumerate_nice(nest(1, {2, 3}));
    double tv = empirical_tv(support, 20000, [&] { return sample_nested_block(1, {2, 3}, rng); });
    EXPECT_LE(tv, 0.03);
}

TEST(SampleConditioned, HitsTargetAndIsUniform) {
    Rng rng(9);
    auto z = PartialMatching::identity(2);
    auto support = enumerate_conditioned(1, {2, 3}, z);
    // Half of the 12 nice graphs have final matching = identity.
    EXPECT_EQ(support.size(), 6u);
    for (const auto& g : support) EXPECT_EQ(compose(g, 0, g.gaps()), z);
    double tv = empirical_tv(support, 20000, [&] {
        auto g = sample_conditioned(1, {2, 3}, z, rng);
        EXPECT_EQ(compose(g, 0, g.gaps()), z);
        return g;
    });
    EXPECT_LE(tv, 0.03);
}

TEST(SampleConditioned, NonIdentityTargetOnLongerSequence) {
    Rng rng(10);
    LayerSequence t{3, 4, 2, 4, 3};
    // Final matching has min size 2.
    auto z = PartialMatching::from_pairs(3, 3, {{0, 2}, {2, 1}});
    auto support = enumerate_conditioned(t, z);
    // 20736 nice graphs spread evenly over the 18 final matchings of size 2.
    ASSERT_EQ(support.size(), 1152u);
    double zscore = chi_square_z(support, 20000, [&] { return sample_conditioned(t, z, rng); });
    EXPECT_LT(std::abs(zscore), 5.0);
}

TEST(SampleConditioned, TwoLayersIsDeterministic) {
    Rng rng(11);
    auto z = PartialMatching::from_permutation({2, 0, 1});
    for (int i = 0; i < 5; ++i) EXPECT_EQ(sample_conditioned(1, {3}, z, rng).matching(1), z);
}

TEST(SampleConditioned, RejectsWrongSizeTarget) {
    Rng rng(12);
    auto z = PartialMatching::from_pairs(3, 3, {{0, 0}});
    EXPECT_THROW(sample_conditioned(LayerSequence{3, 4, 3}, z, rng), std::invalid_argument);
}

TEST(Budget, EnvironmentOverride) {
    ::setenv("CYCLEGAP_BUDGET", "1234", 1);
    EXPECT_EQ(enumeration_budget(), 1234u);
    ::unsetenv("CYCLEGAP_BUDGET");
    EXPECT_EQ(enumeration_budget(), 10'000'000u);
}
