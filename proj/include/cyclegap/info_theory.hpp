#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclegap/parallel.hpp"
#include "cyclegap/rng.hpp"

namespace cyclegap {

/// Probabilities over labels 0..n-1. Entropies and divergences are in bits
/// unless the name says nats.
class FiniteDistribution {
public:
    FiniteDistribution() = default;
    /// Nonnegative and summing to 1 within 1e-12 * max(1, n).
    explicit FiniteDistribution(std::vector<double> probs);
    static FiniteDistribution uniform(std::size_t n);
    /// Normalizes nonnegative weights with a positive total.
    static FiniteDistribution from_weights(std::vector<double> weights);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }
    std::size_t support_size() const;

private:
    std::vector<double> p_;
};

double entropy(const FiniteDistribution& p);
double l2_squared(const FiniteDistribution& p);
/// +inf when p is not absolutely continuous w.r.t. q.
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);
double kl_divergence_nats(const FiniteDistribution& p, const FiniteDistribution& q);
double tvd(const FiniteDistribution& p, const FiniteDistribution& q);
/// I(X; Y) for a joint table joint[x][y].
double mutual_information(const std::vector<std::vector<double>>& joint);

enum class CheckStatus { holds, violated, skipped };
std::string to_string(CheckStatus s);

/// One inequality instance lhs <= rhs; violated only beyond `tolerance`.
struct InequalityCheck {
    CheckStatus status = CheckStatus::skipped;
    double lhs = 0;
    double rhs = 0;
    std::string note;
};

inline constexpr double kInequalityTolerance = 1e-9;

/// ||A||^2 + H(A) <= 1/m + log m, m = support size > 16.
InequalityCheck check_l2_entropy_upper(const FiniteDistribution& a);
/// log m - (log e) m ||A||^2 + log e <= H(A), m = support size > 16.
InequalityCheck check_l2_entropy_lower(const FiniteDistribution& a);
/// dist over S_m in std::next_permutation order; needs H >= log m! - m/8.
/// lhs = m log m - sum_j H(M(j)), rhs = 4 sqrt((log m! - H) m) + 3.
InequalityCheck check_info_perm(std::uint32_t m, const FiniteDistribution& dist);
/// joint[i][a] = Pr[M = i, A = a] with M uniform on [t]; beta maps
/// supp(A) into [eps, 1]. lhs = log t - log(l/eps), rhs = weighted average
/// of H(M | A = a) (the check is lhs <= rhs).
InequalityCheck check_weighted_entropy(const std::vector<std::vector<double>>& joint,
                                       const std::vector<double>& beta, double eps, std::size_t ell);
/// p, q over the product of `dims` in row-major order (first coordinate
/// slowest). lhs = TVD of the joints, rhs = sum of expected conditional TVDs.
InequalityCheck check_tvd_chain(const FiniteDistribution& p, const FiniteDistribution& q,
                                const std::vector<std::size_t>& dims);
/// TVD <= sqrt(KL_nats / 2). The base-2 form is implied since KL in bits is larger.
InequalityCheck check_pinsker(const FiniteDistribution& p, const FiniteDistribution& q);

/// Flat Dirichlet(1, ..., 1).
FiniteDistribution random_dirichlet(std::size_t n, Rng& rng);
/// Uniform perturbed by at most delta/n per atom, then renormalized.
FiniteDistribution random_near_uniform(std::size_t n, double delta, Rng& rng);
/// Distribution over S_m proportional to exp(theta * sum_j w[j][M(j)]) with
/// random w in [0, 1).
FiniteDistribution random_permutation_tilt(std::uint32_t m, double theta, Rng& rng);

struct InequalitySummary {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t held = 0;
    std::uint64_t violated = 0;
    std::uint64_t skipped = 0;
    double max_excess = -1e300;  // max of lhs - rhs over checked trials
};

/// Runs each inequality on `trials` random instances.
/// Names: l2-entropy-upper, l2-entropy-lower, info-perm, weighted-entropy,
/// tvd-chain, pinsker.
std::vector<InequalitySummary> run_inequality_suite(std::uint64_t trials, std::uint64_t seed,
                                                    Exec exec = Exec::openmp);

} // namespace cyclegap
