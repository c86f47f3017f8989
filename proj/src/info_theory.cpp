#include "cyclegap/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cyclegap {

namespace {

const double kLog2e = 1.0 / std::log(2.0);

InequalityCheck judge(double lhs, double rhs, std::string note = {}) {
    InequalityCheck c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.status = lhs <= rhs + kInequalityTolerance ? CheckStatus::holds : CheckStatus::violated;
    c.note = std::move(note);
    return c;
}

InequalityCheck skip(std::string why) {
    InequalityCheck c;
    c.status = CheckStatus::skipped;
    c.note = std::move(why);
    return c;
}

double entropy_of(const std::vector<double>& p) {
    double h = 0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

// Support-restricted view for the lemmas stated in terms of support size.
std::vector<double> positive_part(const FiniteDistribution& a) {
    std::vector<double> out;
    for (double x : a.probs())
        if (x > 0) out.push_back(x);
    return out;
}

} // namespace

FiniteDistribution::FiniteDistribution(std::vector<double> probs) : p_(std::move(probs)) {
    double total = 0;
    for (double x : p_) {
        if (!(x >= 0)) throw std::invalid_argument("probabilities must be nonnegative");
        total += x;
    }
    const double tol = 1e-12 * std::max<double>(1.0, static_cast<double>(p_.size()));
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform distribution needs n ≥ 1");
    return FiniteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteDistribution FiniteDistribution::from_weights(std::vector<double> weights) {
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0)) throw std::invalid_argument("weights must be nonnegative");
        total += w;
    }
    if (!(total > 0)) throw std::invalid_argument("weights must have positive total");
    for (double& w : weights) w /= total;
    return FiniteDistribution(std::move(weights));
}

std::size_t FiniteDistribution::support_size() const {
    return static_cast<std::size_t>(std::count_if(p_.begin(), p_.end(), [](double x) { return x > 0; }));
}

double entropy(const FiniteDistribution& p) { return entropy_of(p.probs()); }

double l2_squared(const FiniteDistribution& p) {
    double s = 0;
    for (double x : p.probs()) s += x * x;
    return s;
}

double kl_divergence_nats(const FiniteDistribution& p, const FiniteDistribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions over different supports");
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        if (q[i] == 0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(d, 0.0);
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q) {
    return kl_divergence_nats(p, q) * kLog2e;
}

double tvd(const FiniteDistribution& p, const FiniteDistribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions over different supports");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return s / 2;
}

double mutual_information(const std::vector<std::vector<double>>& joint) {
    if (joint.empty()) return 0;
    const std::size_t cols = joint[0].size();
    std::vector<double> px(joint.size(), 0), py(cols, 0);
    for (std::size_t x = 0; x < joint.size(); ++x) {
        if (joint[x].size() != cols) throw std::invalid_argument("ragged joint table");
        for (std::size_t y = 0; y < cols; ++y) {
            px[x] += joint[x][y];
            py[y] += joint[x][y];
        }
    }
    double mi = 0;
    for (std::size_t x = 0; x < joint.size(); ++x)
        for (std::size_t y = 0; y < cols; ++y)
            if (joint[x][y] > 0) mi += joint[x][y] * std::log2(joint[x][y] / (px[x] * py[y]));
    return std::max(mi, 0.0);
}

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

InequalityCheck check_l2_entropy_upper(const FiniteDistribution& a) {
    auto p = positive_part(a);
    const double m = static_cast<double>(p.size());
    if (p.size() <= 16) return skip("support size ≤ 16");
    double l2 = 0;
    for (double x : p) l2 += x * x;
    return judge(l2 + entropy_of(p), 1.0 / m + std::log2(m));
}

InequalityCheck check_l2_entropy_lower(const FiniteDistribution& a) {
    auto p = positive_part(a);
    const double m = static_cast<double>(p.size());
    if (p.size() <= 16) return skip("support size ≤ 16");
    double l2 = 0;
    for (double x : p) l2 += x * x;
    return judge(std::log2(m) - kLog2e * m * l2 + kLog2e, entropy_of(p));
}

InequalityCheck check_info_perm(std::uint32_t m, const FiniteDistribution& dist) {
    if (m < 1 || m > 8) throw std::invalid_argument("1 ≤ m ≤ 8 required");
    std::size_t fact = 1;
    for (std::uint32_t i = 2; i <= m; ++i) fact *= i;
    if (dist.size() != fact) throw std::invalid_argument("distribution must have m! atoms");
    const double log_fact = std::log2(static_cast<double>(fact));
    const double h = entropy(dist);
    if (h < log_fact - m / 8.0) return skip("H(M) < log m! - m/8");
    std::vector<std::vector<double>> marg(m, std::vector<double>(m, 0));
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0u);
    std::size_t idx = 0;
    do {
        for (std::uint32_t j = 0; j < m; ++j) marg[j][perm[j]] += dist[idx];
        ++idx;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double sum_h = 0;
    for (const auto& row : marg) sum_h += entropy_of(row);
    const double deficit = std::max(0.0, log_fact - h);
    return judge(m * std::log2(static_cast<double>(m)) - sum_h, 4.0 * std::sqrt(deficit * m) + 3.0);
}

InequalityCheck check_weighted_entropy(const std::vector<std::vector<double>>& joint,
                                       const std::vector<double>& beta, double eps, std::size_t ell) {
    const std::size_t t = joint.size();
    if (t == 0) throw std::invalid_argument("t ≥ 1 required");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("0 < ε ≤ 1 violated");
    const std::size_t na = joint[0].size();
    if (beta.size() != na) throw std::invalid_argument("β needs one value per label of A");
    std::vector<double> alpha(na, 0);
    for (std::size_t i = 0; i < t; ++i) {
        if (joint[i].size() != na) throw std::invalid_argument("ragged joint table");
        double row = 0;
        for (std::size_t a = 0; a < na; ++a) {
            row += joint[i][a];
            alpha[a] += joint[i][a];
        }
        if (std::abs(row - 1.0 / static_cast<double>(t)) > 1e-12)
            return skip("M is not uniform on [t]");
    }
    std::size_t support = 0;
    double num = 0, den = 0;
    for (std::size_t a = 0; a < na; ++a) {
        if (alpha[a] <= 0) continue;
        ++support;
        if (beta[a] < eps || beta[a] > 1) return skip("β outside [ε, 1]");
        std::vector<double> post(t);
        for (std::size_t i = 0; i < t; ++i) post[i] = joint[i][a] / alpha[a];
        const double w = alpha[a] * alpha[a] / beta[a];
        num += w * entropy_of(post);
        den += w;
    }
    if (support > ell) return skip("support of A exceeds ℓ");
    return judge(std::log2(static_cast<double>(t)) - std::log2(static_cast<double>(ell) / eps), num / den);
}

InequalityCheck check_tvd_chain(const FiniteDistribution& p, const FiniteDistribution& q,
                                const std::vector<std::size_t>& dims) {
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw std::invalid_argument("coordinate alphabet must be nonempty");
        total *= d;
    }
    if (p.size() != total || q.size() != total)
        throw std::invalid_argument("distribution size does not match the product of dims");
    const std::size_t n = dims.size();
    // marg[i] = distribution of the first i coordinates.
    std::vector<std::vector<double>> mp(n + 1), mq(n + 1);
    mp[n] = p.probs();
    mq[n] = q.probs();
    for (std::size_t i = n; i > 0; --i) {
        std::size_t size = mp[i].size() / dims[i - 1];
        mp[i - 1].assign(size, 0);
        mq[i - 1].assign(size, 0);
        for (std::size_t j = 0; j < mp[i].size(); ++j) {
            mp[i - 1][j / dims[i - 1]] += mp[i][j];
            mq[i - 1][j / dims[i - 1]] += mq[i][j];
        }
    }
    double rhs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t d = dims[i];
        for (std::size_t prefix = 0; prefix < mp[i].size(); ++prefix) {
            const double pp = mp[i][prefix], qp = mq[i][prefix];
            if (pp <= 0) continue;
            double t = 0;
            if (qp <= 0) {
                t = 1;
            } else {
                for (std::size_t x = 0; x < d; ++x)
                    t += std::abs(mp[i + 1][prefix * d + x] / pp - mq[i + 1][prefix * d + x] / qp);
                t /= 2;
            }
            rhs += pp * t;
        }
    }
    return judge(tvd(p, q), rhs);
}

InequalityCheck check_pinsker(const FiniteDistribution& p, const FiniteDistribution& q) {
    return judge(tvd(p, q), std::sqrt(kl_divergence_nats(p, q) / 2));
}

FiniteDistribution random_dirichlet(std::size_t n, Rng& rng) {
    std::vector<double> w(n);
    for (auto& x : w) x = -std::log(1.0 - rng.uniform01());
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0; })) w.assign(n, 1.0);
    return FiniteDistribution::from_weights(std::move(w));
}

FiniteDistribution random_near_uniform(std::size_t n, double delta, Rng& rng) {
    std::vector<double> w(n);
    const double base = 1.0 / static_cast<double>(n);
    for (auto& x : w) x = base * (1.0 + delta * (2.0 * rng.uniform01() - 1.0));
    return FiniteDistribution::from_weights(std::move(w));
}

FiniteDistribution random_permutation_tilt(std::uint32_t m, double theta, Rng& rng) {
    if (m < 1 || m > 8) throw std::invalid_argument("1 ≤ m ≤ 8 required");
    std::vector<std::vector<double>> w(m, std::vector<double>(m));
    for (auto& row : w)
        for (auto& x : row) x = rng.uniform01();
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<double> weights;
    do {
        double s = 0;
        for (std::uint32_t j = 0; j < m; ++j) s += w[j][perm[j]];
        weights.push_back(std::exp(theta * s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return FiniteDistribution::from_weights(std::move(weights));
}

namespace {

// Half the trials use flat Dirichlet draws, half use near-uniform ones,
// which sit close to the equality cases.
FiniteDistribution mixed_family(std::size_t n, std::uint64_t trial, Rng& rng) {
    if (trial % 2 == 0) return random_dirichlet(n, rng);
    return random_near_uniform(n, rng.uniform01(), rng);
}

InequalityCheck l2_upper_trial(std::uint64_t t, Rng& rng) {
    auto n = 17 + rng.below(240);
    if (t % 5 == 4) {
        // One heavy atom, the case handled separately in the proof.
        std::vector<double> w(n, 0);
        for (auto& x : w) x = rng.uniform01();
        w[0] = static_cast<double>(n) * (1.0 + rng.uniform01());
        return check_l2_entropy_upper(FiniteDistribution::from_weights(std::move(w)));
    }
    return check_l2_entropy_upper(mixed_family(n, t, rng));
}

InequalityCheck l2_lower_trial(std::uint64_t t, Rng& rng) {
    auto n = 17 + rng.below(240);
    return check_l2_entropy_lower(mixed_family(n, t, rng));
}

InequalityCheck info_perm_trial(std::uint64_t, Rng& rng) {
    auto m = static_cast<std::uint32_t>(2 + rng.below(5));
    double theta = 3.0 * rng.uniform01();
    return check_info_perm(m, random_permutation_tilt(m, theta, rng));
}

InequalityCheck weighted_trial(std::uint64_t t, Rng& rng) {
    const std::size_t tt = 2 + rng.below(30);
    const std::size_t ell = 1 + rng.below(10);
    const double eps = 0.01 + 0.99 * rng.uniform01();
    std::vector<std::vector<double>> joint(tt, std::vector<double>(ell, 0));
    for (std::size_t i = 0; i < tt; ++i) {
        FiniteDistribution cond = (t % 2 == 0) ? random_dirichlet(ell, rng)
                                               : random_near_uniform(ell, rng.uniform01(), rng);
        // Occasionally make A nearly a function of M.
        if (t % 3 == 0) {
            std::vector<double> w(ell, 1e-6);
            w[rng.below(ell)] = 1.0;
            cond = FiniteDistribution::from_weights(std::move(w));
        }
        for (std::size_t a = 0; a < ell; ++a) joint[i][a] = cond[a] / static_cast<double>(tt);
    }
    std::vector<double> beta(ell);
    for (auto& b : beta) b = eps + (1.0 - eps) * rng.uniform01();
    return check_weighted_entropy(joint, beta, eps, ell);
}

InequalityCheck tvd_chain_trial(std::uint64_t t, Rng& rng) {
    std::size_t n = 2 + rng.below(3);
    std::vector<std::size_t> dims(n);
    std::size_t total = 1;
    for (auto& d : dims) {
        d = 2 + rng.below(2);
        total *= d;
    }
    auto p = mixed_family(total, t, rng);
    auto q = mixed_family(total, t / 2, rng);
    return check_tvd_chain(p, q, dims);
}

InequalityCheck pinsker_trial(std::uint64_t t, Rng& rng) {
    std::size_t n = 2 + rng.below(49);
    auto p = mixed_family(n, t, rng);
    auto q = mixed_family(n, t / 2, rng);
    return check_pinsker(p, q);
}

} // namespace

std::vector<InequalitySummary> run_inequality_suite(std::uint64_t trials, std::uint64_t seed, Exec exec) {
    using Trial = InequalityCheck (*)(std::uint64_t, Rng&);
    const std::pair<const char*, Trial> cases[] = {
        {"l2-entropy-upper", l2_upper_trial}, {"l2-entropy-lower", l2_lower_trial},
        {"info-perm", info_perm_trial},       {"weighted-entropy", weighted_trial},
        {"tvd-chain", tvd_chain_trial},       {"pinsker", pinsker_trial},
    };
    std::vector<InequalitySummary> out;
    std::uint64_t stream = 0;
    for (const auto& [name, fn] : cases) {
        auto checks = map_indices(
            trials,
            [&, fn = fn, stream](std::size_t t) {
                Rng rng(seed, stream, t);
                return fn(t, rng);
            },
            exec);
        InequalitySummary s;
        s.name = name;
        s.trials = trials;
        for (const auto& c : checks) {
            if (c.status == CheckStatus::skipped) {
                ++s.skipped;
                continue;
            }
            c.status == CheckStatus::holds ? ++s.held : ++s.violated;
            s.max_excess = std::max(s.max_excess, c.lhs - c.rhs);
        }
        out.push_back(std::move(s));
        ++stream;
    }
    return out;
}

} // namespace cyclegap
