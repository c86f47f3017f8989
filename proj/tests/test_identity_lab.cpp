#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "cyclegap/identity_lab.hpp"
#include "cyclegap/samplers.hpp"

using namespace cyclegap;

namespace {

std::uint64_t factorial(std::uint32_t m) {
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= m; ++i) f *= i;
    return f;
}

// E over Bob inputs of ||law of the endpoint given (message, Bob)||^2, per
// message, by direct enumeration in exact arithmetic.
std::map<std::uint32_t, Rational> brute_lhs(const BlockSpace& sp, const MessageFunction& pi) {
    std::map<std::uint32_t, std::vector<std::uint64_t>> cls;
    for (std::uint64_t a = 0; a < sp.alice_count(); ++a) cls[pi.bucket_of(sp, a)].push_back(a);
    std::map<std::uint32_t, Rational> out;
    for (const auto& [msg, members] : cls) {
        Rational acc = 0;
        for (std::uint64_t b = 0; b < sp.bob_count(); ++b) {
            std::vector<std::int64_t> hist(sp.m(), 0);
            for (auto a : members) ++hist[sp.endpoint(a, b)];
            Rational norm = 0;
            for (auto h : hist) norm += Rational(h, static_cast<std::int64_t>(members.size())) *
                                        Rational(h, static_cast<std::int64_t>(members.size()));
            acc += norm;
        }
        out[msg] = acc / static_cast<std::int64_t>(sp.bob_count());
    }
    return out;
}

// Sum over T' subset of [lo, hi] with {ceil(j/2) : j in T'} == target of
// (-1)^{|T'|} m^{|T'| - |{floor(j/2) : j in T'}|}. Positions are
// 1-based as in the layer numbering.
std::int64_t tprime_oracle(std::int64_t m, std::uint32_t lo, std::uint32_t hi, std::uint32_t target_mask) {
    std::int64_t total = 0;
    const std::uint32_t width = hi - lo + 1;
    for (std::uint32_t mask = 0; mask < (1u << width); ++mask) {
        std::uint32_t ceil_set = 0, floor_set = 0;
        int size = 0;
        for (std::uint32_t b = 0; b < width; ++b) {
            if (!(mask >> b & 1)) continue;
            std::uint32_t j = lo + b;
            ++size;
            ceil_set |= 1u << ((j + 1) / 2 - 1);
            floor_set |= 1u << (j / 2);
        }
        if (ceil_set != target_mask) continue;
        std::int64_t term = (size % 2) ? -1 : 1;
        for (int e = size - std::popcount(floor_set); e > 0; --e) term *= m;
        total += term;
    }
    return total;
}

} // namespace

TEST(BlockSpace, CountsAndEndpoint) {
    BlockSpace sp(3, 2);
    EXPECT_EQ(sp.alice_count(), 36u);
    EXPECT_EQ(sp.bob_count(), 18u);
    EXPECT_EQ(sp.perms().size(), 6u);
    // Endpoint by hand: x, then a_1, b_1, a_2.
    for (std::uint64_t a = 0; a < sp.alice_count(); ++a) {
        for (std::uint64_t b = 0; b < sp.bob_count(); ++b) {
            Index v = sp.bob_start(b);
            v = sp.perms()[sp.alice_perm(a, 0)][v];
            v = sp.perms()[sp.bob_perm(b, 0)][v];
            v = sp.perms()[sp.alice_perm(a, 1)][v];
            ASSERT_EQ(sp.endpoint(a, b), v);
        }
    }
    EXPECT_THROW(BlockSpace(1, 1), std::invalid_argument);
    EXPECT_THROW(BlockSpace(3, 0), std::invalid_argument);
}

TEST(BlockSpace, BudgetGuard) {
    EXPECT_THROW(BlockSpace(8, 3), BudgetExceeded);
}

TEST(SecondMoment, IdentityHoldsExactly) {
    for (std::uint32_t m = 2; m <= 3; ++m) {
        for (std::uint32_t c = 1; c <= 2; ++c) {
            for (const auto& pi : standard_message_functions(m, c, 7)) {
                auto rows = verify_second_moment(pi, Exec::serial);
                ASSERT_FALSE(rows.empty());
                BlockSpace sp(m, c);
                auto oracle = brute_lhs(sp, pi);
                Rational total_prob = 0;
                for (const auto& row : rows) {
                    EXPECT_EQ(row.lhs, row.rhs) << pi.name << " m=" << m << " c=" << c << " msg=" << row.message;
                    EXPECT_EQ(row.discrepancy, 0.0);
                    EXPECT_EQ(row.lhs, oracle.at(row.message)) << pi.name;
                    total_prob += row.probability;
                }
                EXPECT_EQ(total_prob, Rational(1));
            }
        }
    }
}

TEST(SecondMoment, LargerBlocks) {
    for (auto [m, c] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{4, 2}, {3, 3}, {5, 1}}) {
        for (const auto& pi : standard_message_functions(m, c, 3))
            for (const auto& row : verify_second_moment(pi))
                EXPECT_EQ(row.lhs, row.rhs) << pi.name << " m=" << m << " c=" << c;
    }
}

TEST(SecondMoment, SerialMatchesOpenMP) {
    BlockSpace sp(4, 2);
    auto pi = make_message_function("hash-4", 4, 2, 1);
    EXPECT_EQ(second_moment_lhs(sp, pi, Exec::serial), second_moment_lhs(sp, pi, Exec::openmp));
}

TEST(SecondMoment, ConstantMessageGivesUniformEndpoint) {
    for (std::uint32_t c = 1; c <= 2; ++c) {
        auto rows = verify_second_moment(make_message_function("constant", 3, c));
        ASSERT_EQ(rows.size(), 1u);
        EXPECT_EQ(rows[0].lhs, Rational(1, 3));
    }
}

TEST(Messages, KindsAndBits) {
    auto h = make_message_function("hash-4", 3, 2, 5);
    EXPECT_EQ(h.buckets, 4u);
    EXPECT_EQ(h.bits(), 2u);
    EXPECT_EQ(make_message_function("constant", 3, 2).bits(), 0u);
    EXPECT_EQ(make_message_function("first-edge", 5, 1).buckets, 5u);
    EXPECT_EQ(make_message_function("first-edge", 5, 1).bits(), 3u);
    EXPECT_THROW(make_message_function("oracle", 3, 2), std::invalid_argument);
    BlockSpace sp(3, 2);
    auto parity = make_message_function("parity", 3, 2);
    auto cls = message_classes(sp, parity);
    ASSERT_EQ(cls.size(), 2u);
    EXPECT_EQ(cls[0].size(), 18u);
    EXPECT_EQ(cls[1].size(), 18u);
}

TEST(PS, EmptySetIsOneAndSingletonsSumToOne) {
    auto pi = make_message_function("first-edge", 3, 2);
    EXPECT_EQ(p_S(pi, 1, 0, {}), Rational(1));
    Rational total = 0;
    for (Index l = 0; l < 3; ++l)
        for (Index r = 0; r < 3; ++r) total += p_S(pi, 1, 1, {{l, r}});
    EXPECT_EQ(total, Rational(3));  // sum over left of a permutation law
    // Message 1 fixes a_1(0) = 1.
    EXPECT_EQ(p_S(pi, 1, 1, {{0, 1}}), Rational(1));
    EXPECT_EQ(p_S(pi, 1, 1, {{0, 2}}), Rational(0));
    EXPECT_EQ(p_S(pi, 1, 1, {{1, 0}}), Rational(1, 2));
}

TEST(Marginalization, NoFailures) {
    for (std::uint32_t c = 1; c <= 3; ++c) {
        for (const auto& pi : standard_message_functions(3, c, 2)) {
            auto rep = verify_marginalization(pi);
            EXPECT_GT(rep.checks, 0u);
            EXPECT_EQ(rep.failures, 0u) << pi.name << " c=" << c;
        }
    }
}

TEST(AlternatingSums, ClosedFormsAgainstOracle) {
    for (std::uint32_t c = 1; c <= 8; ++c) {
        const std::uint32_t full = (1u << c) - 1;
        for (std::uint32_t m = 2; m <= 12; ++m) {
            const std::int64_t a = tprime_oracle(m, 2, 2 * c - 1 >= 2 ? 2 * c - 1 : 1, full);
            if (c >= 2) {
                EXPECT_EQ(alpha_brute(m, c), a) << m << "," << c;
            }
            EXPECT_EQ(alpha_brute(m, c), alpha_closed(m, c)) << m << "," << c;
            EXPECT_EQ(beta_brute(m, c), tprime_oracle(m, 2, 2 * c, full));
            EXPECT_EQ(beta_brute(m, c), beta_closed(c));
            EXPECT_EQ(gamma_brute(m, c), tprime_oracle(m, 1, 2 * c, full));
            EXPECT_EQ(gamma_brute(m, c), gamma_closed(c));
        }
    }
    EXPECT_EQ(alpha_closed(3, 3), 3);
    EXPECT_EQ(alpha_brute(3, 3), 3);
}

TEST(AlternatingSums, RestrictedToComplement) {
    for (std::uint32_t c = 1; c <= 6; ++c) {
        for (std::uint32_t m : {2u, 3u, 5u}) {
            for (std::uint32_t S = 0; S < (1u << c); ++S) {
                EXPECT_EQ(alt_sum_brute(m, c, S), alt_sum_closed(m, c, S)) << m << "," << c << "," << S;
                if (c >= 2 && S != 0)
                    EXPECT_EQ(alt_sum_brute(m, c, S), tprime_oracle(m, 2, 2 * c - 1, ((1u << c) - 1) & ~S));
            }
        }
    }
}

TEST(Bounds, DeltaSAndMarginalL2) {
    for (std::uint32_t c = 1; c <= 2; ++c) {
        for (const auto& pi : standard_message_functions(3, c, 4)) {
            for (const auto& chk : verify_delta_S_bound(pi)) EXPECT_TRUE(chk.holds) << pi.name;
            auto l2 = verify_marginal_l2(pi);
            EXPECT_TRUE(l2.holds) << pi.name << " " << l2.lhs << " " << l2.rhs;
            EXPECT_GE(l2.lhs, 1.0 / 3 - 1e-12);
        }
    }
    EXPECT_NEAR(gamma_bound(4, 2.0), 4 * std::sqrt(2 * (2.0 + 2.0) * 4), 1e-12);
}

TEST(Phi, ExampleAndPrecondition) {
    EXPECT_DOUBLE_EQ(phi(3, 6, 5, 1), 1000.0);
    EXPECT_NEAR(multiround_step(0.01, 3, 6, 5, 1), 12 * 0.01 + 1000.0, 1e-9);
    try {
        phi(5, 6, 5, 1);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("s < s"), std::string::npos);
    }
}

TEST(TheoremBound, IndependentRederivation) {
    for (auto [m, c, r] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {100, 6, 2}, {1000, 12, 3}, {37, 3, 5}, {50, 24, 1}}) {
        const double C = 2.5;
        auto tb = theorem_bound(m, c, r, C, 1.0);
        std::vector<double> s;
        for (std::uint32_t i = 0; i <= r; ++i) s.push_back(m + (i * m) / r);
        ASSERT_EQ(tb.sequence.size(), s.size());
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(double(tb.sequence[i]), s[i]);
        double sum = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            sum += 2 * s[i] * s[i] * std::pow(40 * C / (s[i] - s[i - 1]), c / 6.0);
        const double lead = std::pow(2.0 * c, r - 1.0);
        EXPECT_NEAR(tb.chain, lead * sum, 1e-9 * tb.chain);
        EXPECT_NEAR(tb.simplified, lead * 8 * r * double(m) * m * std::pow(80 * r * C / m, c / 6.0),
                    1e-9 * tb.simplified);
        EXPECT_LE(tb.chain, tb.simplified * (1 + 1e-12));
        EXPECT_NEAR(tb.comm_threshold, std::pow(2.0, -double(r)) * std::pow(double(m), 1 - 200.0 / c),
                    1e-12 * tb.comm_threshold);
    }
}
