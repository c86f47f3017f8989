#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cyclegap/info_theory.hpp"
#include "cyclegap/rng.hpp"

using namespace cyclegap;

namespace {

double log2_factorial(std::uint32_t m) {
    double s = 0;
    for (std::uint32_t i = 2; i <= m; ++i) s += std::log2(double(i));
    return s;
}

} // namespace

TEST(Distribution, Validation) {
    EXPECT_THROW(FiniteDistribution({0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(FiniteDistribution({-0.1, 1.1}), std::invalid_argument);
    EXPECT_NO_THROW(FiniteDistribution({0.25, 0.75}));
    auto w = FiniteDistribution::from_weights({1, 3, 0});
    EXPECT_DOUBLE_EQ(w[1], 0.75);
    EXPECT_EQ(w.support_size(), 2u);
    EXPECT_THROW(FiniteDistribution::from_weights({0, 0}), std::invalid_argument);
}

TEST(Quantities, ClosedForms) {
    auto u = FiniteDistribution::uniform(8);
    EXPECT_NEAR(entropy(u), 3.0, 1e-12);
    EXPECT_NEAR(l2_squared(u), 1.0 / 8, 1e-15);
    FiniteDistribution p({0.5, 0.5}), q({0.25, 0.75});
    EXPECT_NEAR(tvd(p, q), 0.25, 1e-15);
    const double kl_nats = 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75);
    EXPECT_NEAR(kl_divergence_nats(p, q), kl_nats, 1e-12);
    EXPECT_NEAR(kl_divergence(p, q), kl_nats / std::log(2.0), 1e-12);
    EXPECT_TRUE(std::isinf(kl_divergence(q, FiniteDistribution({1.0, 0.0}))));
    // Independent joint: I = 0; perfectly correlated bits: I = 1.
    EXPECT_NEAR(mutual_information({{0.25, 0.25}, {0.25, 0.25}}), 0.0, 1e-12);
    EXPECT_NEAR(mutual_information({{0.5, 0.0}, {0.0, 0.5}}), 1.0, 1e-12);
}

TEST(L2Entropy, EqualityAtUniform) {
    auto u = FiniteDistribution::uniform(64);
    auto up = check_l2_entropy_upper(u);
    EXPECT_EQ(up.status, CheckStatus::holds);
    EXPECT_NEAR(up.lhs, up.rhs, 1e-9);
    auto lo = check_l2_entropy_lower(u);
    EXPECT_EQ(lo.status, CheckStatus::holds);
    EXPECT_NEAR(lo.lhs, lo.rhs, 1e-9);
    EXPECT_NEAR(lo.rhs, 6.0, 1e-12);
    EXPECT_EQ(check_l2_entropy_upper(FiniteDistribution::uniform(16)).status, CheckStatus::skipped);
}

TEST(L2Entropy, HeavyAtom) {
    std::vector<double> w(100, 1.0);
    w[0] = 300;
    auto d = FiniteDistribution::from_weights(w);
    auto up = check_l2_entropy_upper(d);
    EXPECT_EQ(up.status, CheckStatus::holds);
    EXPECT_NEAR(up.lhs, l2_squared(d) + entropy(d), 1e-12);
    EXPECT_NEAR(up.rhs, 0.01 + std::log2(100.0), 1e-12);
}

TEST(Pinsker, BernoulliExample) {
    FiniteDistribution p({0.5, 0.5}), q({0.25, 0.75});
    auto chk = check_pinsker(p, q);
    EXPECT_EQ(chk.status, CheckStatus::holds);
    EXPECT_NEAR(chk.lhs, 0.25, 1e-15);
    EXPECT_NEAR(chk.rhs, std::sqrt((0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)) / 2), 1e-12);
}

TEST(TvdChain, ProductDistributions) {
    // For product laws the chain bound is the sum of marginal distances.
    FiniteDistribution p1({0.2, 0.8}), q1({0.5, 0.5});
    FiniteDistribution p2({0.1, 0.3, 0.6}), q2({0.3, 0.3, 0.4});
    std::vector<double> p, q;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) {
            p.push_back(p1[i] * p2[j]);
            q.push_back(q1[i] * q2[j]);
        }
    auto chk = check_tvd_chain(FiniteDistribution(p), FiniteDistribution(q), {2, 3});
    EXPECT_EQ(chk.status, CheckStatus::holds);
    EXPECT_NEAR(chk.rhs, tvd(p1, q1) + tvd(p2, q2), 1e-12);
    EXPECT_THROW(check_tvd_chain(FiniteDistribution(p), FiniteDistribution(q), {3, 3}), std::invalid_argument);
}

TEST(InfoPerm, UniformIsTight) {
    const std::uint32_t m = 5;
    auto u = FiniteDistribution::uniform(120);
    auto chk = check_info_perm(m, u);
    EXPECT_EQ(chk.status, CheckStatus::holds);
    // H(M(j)) = log m for each j, so the lhs is 0 exactly.
    EXPECT_NEAR(chk.lhs, 0.0, 1e-9);
    EXPECT_NEAR(chk.rhs, 3.0, 1e-6);
    // Point mass is far below the entropy floor.
    std::vector<double> point(120, 0.0);
    point[0] = 1;
    EXPECT_EQ(check_info_perm(m, FiniteDistribution(point)).status, CheckStatus::skipped);
    EXPECT_LT(log2_factorial(5) - 5.0 / 8, std::log2(120.0));
}

TEST(WeightedEntropy, UniformJoint) {
    // M uniform on 4 labels, A independent and uniform on 2 labels.
    std::vector<std::vector<double>> joint(4, std::vector<double>(2, 1.0 / 8));
    auto chk = check_weighted_entropy(joint, {1.0, 1.0}, 0.5, 2);
    EXPECT_EQ(chk.status, CheckStatus::holds);
    EXPECT_NEAR(chk.lhs, 2.0 - 2.0, 1e-12);
    EXPECT_NEAR(chk.rhs, 2.0, 1e-12);
    auto skipped = check_weighted_entropy(joint, {0.1, 1.0}, 0.5, 2);
    EXPECT_EQ(skipped.status, CheckStatus::skipped);
}

TEST(Families, AreDistributions) {
    Rng rng(1);
    auto d = random_dirichlet(50, rng);
    EXPECT_NEAR(std::accumulate(d.probs().begin(), d.probs().end(), 0.0), 1.0, 1e-12);
    auto nu = random_near_uniform(40, 0.1, rng);
    for (double x : nu.probs()) EXPECT_NEAR(x, 1.0 / 40, 0.2 / 40);
    auto t = random_permutation_tilt(4, 0.5, rng);
    EXPECT_EQ(t.size(), 24u);
    auto flat = random_permutation_tilt(4, 0.0, rng);
    for (double x : flat.probs()) EXPECT_NEAR(x, 1.0 / 24, 1e-15);
}

TEST(Suite, NoViolations) {
    auto rows = run_inequality_suite(300, 42);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.violated, 0u) << r.name << " max excess " << r.max_excess;
        EXPECT_EQ(r.held + r.violated + r.skipped, r.trials);
        EXPECT_GT(r.held, 0u) << r.name;
    }
    auto serial = run_inequality_suite(60, 7, Exec::serial);
    auto par = run_inequality_suite(60, 7, Exec::openmp);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].held, par[i].held);
        EXPECT_EQ(serial[i].max_excess, par[i].max_excess);
    }
}
