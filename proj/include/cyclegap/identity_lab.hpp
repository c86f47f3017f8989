#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/parallel.hpp"
#include "cyclegap/rational.hpp"

namespace cyclegap {

/// One block on m vertices per layer with c Alice matchings. Bob owns the
/// single edge out of v0 (x = G_1(v0)) and the interior odd matchings
/// G_3..G_{2c-1}; Alice owns G_2..G_{2c}. All inputs are indexed densely so
/// exhaustive loops are plain integer ranges.
class BlockSpace {
public:
    BlockSpace(std::uint32_t m, std::uint32_t c);

    std::uint32_t m() const { return m_; }
    std::uint32_t c() const { return c_; }
    std::uint64_t alice_count() const { return alice_count_; }
    std::uint64_t bob_count() const { return bob_count_; }
    const std::vector<std::vector<Index>>& perms() const { return perms_; }

    /// Index into perms() of Alice's i-th matching (0-based i < c).
    std::uint32_t alice_perm(std::uint64_t alice, std::uint32_t i) const;
    /// x = G_1(v0) for a Bob input.
    Index bob_start(std::uint64_t bob) const { return static_cast<Index>(bob % m_); }
    /// Index into perms() of Bob's i-th interior matching (0-based i < c-1).
    std::uint32_t bob_perm(std::uint64_t bob, std::uint32_t i) const;
    /// G_{0->2c}(v0).
    Index endpoint(std::uint64_t alice, std::uint64_t bob) const;

private:
    std::uint32_t m_, c_;
    std::uint64_t alice_count_ = 1, bob_count_ = 1;
    std::vector<std::vector<Index>> perms_;
};

/// A deterministic one-round message: Alice's input -> bucket.
struct MessageFunction {
    std::uint32_t m = 0;
    std::uint32_t c = 0;
    std::string name;
    std::uint32_t buckets = 1;
    std::function<std::uint32_t(const BlockSpace&, std::uint64_t)> bucket_of;

    /// Communication C = ceil(log2 buckets).
    unsigned bits() const;
};

/// Kinds: constant, parity (sum of sign parities), first-edge (a_1(0)),
/// hash-<B> (keyed splitmix bucketing into B buckets).
MessageFunction make_message_function(const std::string& kind, std::uint32_t m, std::uint32_t c,
                                      std::uint64_t seed = 0);
/// constant, parity, first-edge, hash-2, hash-4.
std::vector<MessageFunction> standard_message_functions(std::uint32_t m, std::uint32_t c,
                                                         std::uint64_t seed = 0);

/// Alice's inputs grouped by message; throws BudgetExceeded past the budget.
std::vector<std::vector<std::uint64_t>> message_classes(const BlockSpace& space,
                                                        const MessageFunction& pi);

/// v_S: one (left, right) pair per element of S, in increasing order of S.
using EdgeTuple = std::vector<std::pair<Index, Index>>;

/// p_S(v_S | Pi = msg) exactly. S is a bitmask over [c] (bit i-1 for i).
Rational p_S(const MessageFunction& pi, std::uint32_t msg, std::uint32_t S, const EdgeTuple& v_S);

/// Sum over all v_S of p_S(v_S | msg)^2.
Rational sum_p_S_squared(const BlockSpace& space, const std::vector<std::uint64_t>& cls,
                         std::uint32_t S);

struct SecondMoment {
    std::uint32_t message = 0;
    Rational probability;  // Pr[Pi = message]
    Rational lhs, rhs;
    double discrepancy = 0;  // |lhs - rhs| / max(|rhs|, 1e-300)
};

/// Both sides of the second-moment identity for every nonempty message.
std::vector<SecondMoment> verify_second_moment(const MessageFunction& pi, Exec exec = Exec::openmp);

/// The LHS only, E_{M_B} ||G_{0->2c}(v0) | msg, M_B||^2 per message, from
/// integer counts. Exposed for the serial/OpenMP benchmark.
std::vector<Rational> second_moment_lhs(const BlockSpace& space, const MessageFunction& pi,
                                        Exec exec);

struct MarginalizationReport {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
};

/// Checks that summing p_{S+i} over the left (resp. right) endpoint of
/// matching i gives p_S, for all messages, S, i outside S and tuples.
MarginalizationReport verify_marginalization(const MessageFunction& pi);

/// Brute-force sums over T' (integers; exact for c <= 8, m <= 12).
std::int64_t alpha_brute(std::uint32_t m, std::uint32_t c);
std::int64_t beta_brute(std::uint32_t m, std::uint32_t c);
std::int64_t gamma_brute(std::uint32_t m, std::uint32_t c);
std::int64_t alpha_closed(std::uint32_t m, std::uint32_t c);
std::int64_t beta_closed(std::uint32_t c);
std::int64_t gamma_closed(std::uint32_t c);
/// Sum over T' in {2..2c-1} with ceil(T'/2) = [c] \ S.
std::int64_t alt_sum_brute(std::uint32_t m, std::uint32_t c, std::uint32_t S);
std::int64_t alt_sum_closed(std::uint32_t m, std::uint32_t c, std::uint32_t S);

struct BoundCheck {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

/// Gamma(m, C) = 4 sqrt(2 (C + log m) m).
double gamma_bound(std::uint32_t m, double C);
/// E_Pi sum_{v_S} p_S^2 <= (Gamma + 6)^{|S|}, one entry per S in [0, 2^c).
std::vector<BoundCheck> verify_delta_S_bound(const MessageFunction& pi);
/// E_{Pi, M_B} ||G_{0->2c}(v0)||^2 <= 1/m + (40C/m)^{c/3}.
BoundCheck verify_marginal_l2(const MessageFunction& pi, Exec exec = Exec::openmp);

/// Phi(s, c, s2, C) = 2 s2^2 (40C/(s2-s))^{c/6}; requires s < s2.
double phi(double s, double c, double s2, double C);
/// One application of the multi-round step: 2c eps0 + Phi.
double multiround_step(double eps0, double s, double c, double s2, double C);

struct TheoremBound {
    std::vector<Index> sequence;  // S = m, m + floor(m/r), ..., 2m
    double chain = 0;             // (2c)^{r-1} sum over consecutive pairs of Phi
    double simplified = 0;        // (2c)^{r-1} 8 r m^2 (80 r C / m)^{c/6}
    double comm_threshold = 0;    // 2^{-kappa r} m^{1 - 200/c}
    bool below_threshold = false; // C <= comm_threshold
};

/// kappa stands in for the unspecified constant of the 2^{-O(r)} factor.
TheoremBound theorem_bound(std::uint32_t m, std::uint32_t c, std::uint32_t r, double C,
                           double kappa);

} // namespace cyclegap
