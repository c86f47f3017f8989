#include "cyclegap/identity_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cyclegap/rng.hpp"
#include "cyclegap/samplers.hpp"

namespace cyclegap {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, const char* what) {
    std::uint64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base)
            throw BudgetExceeded(std::string(what) + " count overflows");
        out *= base;
    }
    return out;
}

bool odd_permutation(const std::vector<Index>& p) {
    bool odd = false;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) odd = !odd;
    return odd;
}

std::int64_t ipow(std::int64_t base, std::uint32_t exp) {
    std::int64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) out *= base;
    return out;
}

// Sum over T' drawn from positions [lo, hi] (1-based) with ceil(T'/2) == want,
// of (-1)^{|T'|} m^{|T'| - |floor(T'/2)|}.
std::int64_t t_prime_sum(std::uint32_t m, std::uint32_t lo, std::uint32_t hi, std::uint32_t want) {
    if (hi < lo) return want == 0 ? 1 : 0;
    const std::uint32_t width = hi - lo + 1;
    if (width > 30) throw std::invalid_argument("T' range too wide for brute force");
    std::int64_t total = 0;
    for (std::uint32_t mask = 0; mask < (1u << width); ++mask) {
        std::uint32_t ceil_set = 0;
        std::uint64_t floor_set = 0;
        for (std::uint32_t b = 0; b < width; ++b) {
            if (!(mask >> b & 1u)) continue;
            std::uint32_t j = lo + b;
            ceil_set |= 1u << ((j + 1) / 2 - 1);
            floor_set |= std::uint64_t{1} << (j / 2);
        }
        if (ceil_set != want) continue;
        int size = std::popcount(mask);
        int fl = std::popcount(floor_set);
        std::int64_t term = ipow(m, static_cast<std::uint32_t>(size - fl));
        total += (size % 2) ? -term : term;
    }
    return total;
}

std::uint32_t full_mask(std::uint32_t c) { return c >= 32 ? ~0u : (1u << c) - 1; }

// Number of Alice inputs in cls with a_i(lefts[i]) == rights[i] for i in S.
std::uint64_t count_consistent(const BlockSpace& space, const std::vector<std::uint64_t>& cls,
                               std::uint32_t S, const std::vector<Index>& lefts,
                               const std::vector<Index>& rights) {
    const auto& perms = space.perms();
    std::uint64_t count = 0;
    for (auto a : cls) {
        bool ok = true;
        for (std::uint32_t i = 0; i < space.c() && ok; ++i)
            if (S >> i & 1u) ok = perms[space.alice_perm(a, i)][lefts[i]] == rights[i];
        if (ok) ++count;
    }
    return count;
}

// Iterate all assignments of values in [m] to the coordinates selected by S.
template <typename Fn>
void for_each_assignment(std::uint32_t m, std::uint32_t c, std::uint32_t S, std::vector<Index>& vals,
                         Fn&& fn) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < c; ++i)
        if (S >> i & 1u) idx.push_back(i);
    for (auto i : idx) vals[i] = 0;
    while (true) {
        fn();
        std::size_t p = 0;
        while (p < idx.size()) {
            if (++vals[idx[p]] < m) break;
            vals[idx[p]] = 0;
            ++p;
        }
        if (p == idx.size()) return;
    }
}

} // namespace

BlockSpace::BlockSpace(std::uint32_t m, std::uint32_t c) : m_(m), c_(c) {
    if (m < 2) throw std::invalid_argument("m ≥ 2 violated");
    if (c < 1) throw std::invalid_argument("c ≥ 1 violated");
    if (m > 8) throw BudgetExceeded("m ≤ 8 required for exhaustive permutation tables");
    std::vector<Index> p(m);
    std::iota(p.begin(), p.end(), Index{0});
    do perms_.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    alice_count_ = checked_pow(perms_.size(), c, "Alice input");
    bob_count_ = m * checked_pow(perms_.size(), c - 1, "Bob input");
    if (alice_count_ > enumeration_budget())
        throw BudgetExceeded("(m!)^c = " + std::to_string(alice_count_) + " exceeds enumeration budget");
}

std::uint32_t BlockSpace::alice_perm(std::uint64_t alice, std::uint32_t i) const {
    const std::uint64_t f = perms_.size();
    for (std::uint32_t j = 0; j < i; ++j) alice /= f;
    return static_cast<std::uint32_t>(alice % f);
}

std::uint32_t BlockSpace::bob_perm(std::uint64_t bob, std::uint32_t i) const {
    const std::uint64_t f = perms_.size();
    bob /= m_;
    for (std::uint32_t j = 0; j < i; ++j) bob /= f;
    return static_cast<std::uint32_t>(bob % f);
}

Index BlockSpace::endpoint(std::uint64_t alice, std::uint64_t bob) const {
    const std::uint64_t f = perms_.size();
    Index v = bob_start(bob);
    bob /= m_;
    for (std::uint32_t i = 0; i < c_; ++i) {
        v = perms_[alice % f][v];
        alice /= f;
        if (i + 1 < c_) {
            v = perms_[bob % f][v];
            bob /= f;
        }
    }
    return v;
}

unsigned MessageFunction::bits() const {
    unsigned b = 0;
    while ((std::uint64_t{1} << b) < buckets) ++b;
    return b;
}

MessageFunction make_message_function(const std::string& kind, std::uint32_t m, std::uint32_t c,
                                      std::uint64_t seed) {
    MessageFunction f;
    f.m = m;
    f.c = c;
    f.name = kind;
    if (kind == "constant") {
        f.buckets = 1;
        f.bucket_of = [](const BlockSpace&, std::uint64_t) { return 0u; };
    } else if (kind == "parity") {
        f.buckets = 2;
        f.bucket_of = [](const BlockSpace& s, std::uint64_t a) {
            std::uint32_t parity = 0;
            for (std::uint32_t i = 0; i < s.c(); ++i)
                parity ^= odd_permutation(s.perms()[s.alice_perm(a, i)]) ? 1u : 0u;
            return parity;
        };
    } else if (kind == "first-edge") {
        f.buckets = m;
        f.bucket_of = [](const BlockSpace& s, std::uint64_t a) {
            return static_cast<std::uint32_t>(s.perms()[s.alice_perm(a, 0)][0]);
        };
    } else if (kind.rfind("hash-", 0) == 0) {
        std::uint32_t b = 0;
        try {
            b = static_cast<std::uint32_t>(std::stoul(kind.substr(5)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad hash bucket count in '" + kind + "'");
        }
        if (b < 1) throw std::invalid_argument("hash buckets ≥ 1 violated");
        f.buckets = b;
        const std::uint64_t key = splitmix64(seed ^ splitmix64(b));
        f.bucket_of = [b, key](const BlockSpace&, std::uint64_t a) {
            return static_cast<std::uint32_t>(splitmix64(a ^ key) % b);
        };
    } else {
        throw std::invalid_argument("unknown message function '" + kind + "'");
    }
    return f;
}

std::vector<MessageFunction> standard_message_functions(std::uint32_t m, std::uint32_t c,
                                                         std::uint64_t seed) {
    std::vector<MessageFunction> out;
    for (const char* k : {"constant", "parity", "first-edge", "hash-2", "hash-4"})
        out.push_back(make_message_function(k, m, c, seed));
    return out;
}

std::vector<std::vector<std::uint64_t>> message_classes(const BlockSpace& space,
                                                        const MessageFunction& pi) {
    if (space.m() != pi.m || space.c() != pi.c)
        throw std::invalid_argument("message function built for different (m, c)");
    std::vector<std::vector<std::uint64_t>> cls(pi.buckets);
    for (std::uint64_t a = 0; a < space.alice_count(); ++a) {
        auto b = pi.bucket_of(space, a);
        if (b >= pi.buckets) throw std::logic_error("message function returned out-of-range bucket");
        cls[b].push_back(a);
    }
    return cls;
}

Rational p_S(const MessageFunction& pi, std::uint32_t msg, std::uint32_t S, const EdgeTuple& v_S) {
    BlockSpace space(pi.m, pi.c);
    if ((S & ~full_mask(pi.c)) != 0) throw std::invalid_argument("S ⊆ [c] violated");
    if (v_S.size() != static_cast<std::size_t>(std::popcount(S)))
        throw std::invalid_argument("|v_S| = |S| violated");
    if (msg >= pi.buckets) throw std::invalid_argument("message outside bucket range");
    auto cls = message_classes(space, pi)[msg];
    if (cls.empty()) throw std::invalid_argument("message has probability zero");
    std::vector<Index> lefts(pi.c, 0), rights(pi.c, 0);
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < pi.c; ++i) {
        if (!(S >> i & 1u)) continue;
        auto [l, r] = v_S[k++];
        if (l >= pi.m || r >= pi.m) throw std::invalid_argument("vertex outside [m]");
        lefts[i] = l;
        rights[i] = r;
    }
    return Rational(count_consistent(space, cls, S, lefts, rights)) / Rational(cls.size());
}

Rational sum_p_S_squared(const BlockSpace& space, const std::vector<std::uint64_t>& cls,
                         std::uint32_t S) {
    if (cls.empty()) return 0;
    const std::uint32_t m = space.m(), c = space.c();
    const auto& perms = space.perms();
    std::vector<std::uint32_t> sel;
    for (std::uint32_t i = 0; i < c; ++i)
        if (S >> i & 1u) sel.push_back(i);
    std::uint64_t cells = 1;
    for (std::size_t t = 0; t < sel.size(); ++t) cells *= m;
    BigInt total = 0;
    std::vector<Index> lefts(c, 0);
    std::vector<std::uint64_t> hist(cells);
    for_each_assignment(m, c, S, lefts, [&] {
        std::fill(hist.begin(), hist.end(), 0);
        for (auto a : cls) {
            std::uint64_t key = 0;
            for (auto i : sel) key = key * m + perms[space.alice_perm(a, i)][lefts[i]];
            ++hist[key];
        }
        for (auto h : hist) total += BigInt(h) * h;
    });
    BigInt n = cls.size();
    return Rational(total, n * n);
}

std::vector<Rational> second_moment_lhs(const BlockSpace& space, const MessageFunction& pi,
                                        Exec exec) {
    if (space.alice_count() > enumeration_budget() / space.bob_count())
        throw BudgetExceeded("Alice × Bob input pairs exceed enumeration budget");
    const std::uint32_t m = space.m();
    const std::uint32_t B = pi.buckets;
    std::vector<std::uint32_t> msg_of(space.alice_count());
    std::vector<std::uint64_t> class_size(B, 0);
    for (std::uint64_t a = 0; a < space.alice_count(); ++a) {
        msg_of[a] = pi.bucket_of(space, a);
        ++class_size[msg_of[a]];
    }
    // Per Bob input: sum over endpoints of count^2, per message. Integer, so
    // the reduction below is exact and schedule independent.
    auto per_bob = map_indices(
        space.bob_count(),
        [&](std::size_t bob) {
            std::vector<std::uint64_t> counts(std::size_t{B} * m, 0);
            for (std::uint64_t a = 0; a < space.alice_count(); ++a)
                ++counts[std::size_t{msg_of[a]} * m + space.endpoint(a, bob)];
            std::vector<std::uint64_t> sq(B, 0);
            for (std::uint32_t b = 0; b < B; ++b)
                for (std::uint32_t e = 0; e < m; ++e) sq[b] += counts[std::size_t{b} * m + e] * counts[std::size_t{b} * m + e];
            return sq;
        },
        exec);
    std::vector<Rational> out(B, Rational(0));
    for (std::uint32_t b = 0; b < B; ++b) {
        if (class_size[b] == 0) continue;
        BigInt total = 0;
        for (const auto& sq : per_bob) total += sq[b];
        BigInt denom = BigInt(class_size[b]) * class_size[b] * space.bob_count();
        out[b] = Rational(total, denom);
    }
    return out;
}

std::vector<SecondMoment> verify_second_moment(const MessageFunction& pi, Exec exec) {
    BlockSpace space(pi.m, pi.c);
    auto cls = message_classes(space, pi);
    auto lhs = second_moment_lhs(space, pi, exec);
    const std::uint32_t m = pi.m, c = pi.c;
    BigInt scale = BigInt(m);
    for (std::uint32_t i = 1; i < c; ++i) scale *= (m - 1);
    std::vector<SecondMoment> out;
    for (std::uint32_t b = 0; b < pi.buckets; ++b) {
        if (cls[b].empty()) continue;
        Rational sum = 0;
        for (std::uint32_t S = 0; S <= full_mask(c); ++S) {
            Rational t = sum_p_S_squared(space, cls[b], S);
            if ((c - std::popcount(S)) % 2) sum -= t;
            else sum += t;
        }
        SecondMoment r;
        r.message = b;
        r.probability = Rational(cls[b].size()) / Rational(space.alice_count());
        r.lhs = lhs[b];
        r.rhs = Rational(1, m) + sum / Rational(scale);
        double rhs = to_double(r.rhs);
        r.discrepancy = std::abs(to_double(r.lhs - r.rhs)) / std::max(std::abs(rhs), 1e-300);
        out.push_back(std::move(r));
    }
    return out;
}

MarginalizationReport verify_marginalization(const MessageFunction& pi) {
    BlockSpace space(pi.m, pi.c);
    auto classes = message_classes(space, pi);
    const std::uint32_t m = pi.m, c = pi.c;
    MarginalizationReport rep;
    std::vector<Index> lefts(c, 0), rights(c, 0);
    for (const auto& cls : classes) {
        if (cls.empty()) continue;
        for (std::uint32_t S = 0; S <= full_mask(c); ++S) {
            for (std::uint32_t i = 0; i < c; ++i) {
                if (S >> i & 1u) continue;
                const std::uint32_t Si = S | (1u << i);
                for_each_assignment(m, c, S, lefts, [&] {
                    for_each_assignment(m, c, S, rights, [&] {
                        auto base = count_consistent(space, cls, S, lefts, rights);
                        for (Index fixed = 0; fixed < m; ++fixed) {
                            std::uint64_t over_left = 0, over_right = 0;
                            for (Index free = 0; free < m; ++free) {
                                lefts[i] = free;
                                rights[i] = fixed;
                                over_left += count_consistent(space, cls, Si, lefts, rights);
                                lefts[i] = fixed;
                                rights[i] = free;
                                over_right += count_consistent(space, cls, Si, lefts, rights);
                            }
                            rep.checks += 2;
                            if (over_left != base) ++rep.failures;
                            if (over_right != base) ++rep.failures;
                        }
                        lefts[i] = rights[i] = 0;
                    });
                });
            }
        }
    }
    return rep;
}

std::int64_t alpha_brute(std::uint32_t m, std::uint32_t c) {
    return t_prime_sum(m, 2, 2 * c - 1, full_mask(c));
}
std::int64_t beta_brute(std::uint32_t m, std::uint32_t c) {
    return t_prime_sum(m, 2, 2 * c, full_mask(c));
}
std::int64_t gamma_brute(std::uint32_t m, std::uint32_t c) {
    return t_prime_sum(m, 1, 2 * c, full_mask(c));
}

std::int64_t alpha_closed(std::uint32_t m, std::uint32_t c) {
    if (c < 1) throw std::invalid_argument("c ≥ 1 violated");
    return ipow(static_cast<std::int64_t>(m) - 1, c - 1) + ((c % 2) ? -1 : 1);
}
std::int64_t beta_closed(std::uint32_t c) { return (c % 2) ? -1 : 1; }
std::int64_t gamma_closed(std::uint32_t c) { return (c % 2) ? -1 : 1; }

std::int64_t alt_sum_brute(std::uint32_t m, std::uint32_t c, std::uint32_t S) {
    if (c < 1) throw std::invalid_argument("c ≥ 1 violated");
    if ((S & ~full_mask(c)) != 0) throw std::invalid_argument("S ⊆ [c] violated");
    return t_prime_sum(m, 2, 2 * c - 1, full_mask(c) & ~S);
}

std::int64_t alt_sum_closed(std::uint32_t m, std::uint32_t c, std::uint32_t S) {
    if (S == 0) return alpha_closed(m, c);
    return ((c - std::popcount(S)) % 2) ? -1 : 1;
}

double gamma_bound(std::uint32_t m, double C) {
    return 4.0 * std::sqrt(2.0 * (C + std::log2(static_cast<double>(m))) * m);
}

std::vector<BoundCheck> verify_delta_S_bound(const MessageFunction& pi) {
    BlockSpace space(pi.m, pi.c);
    auto classes = message_classes(space, pi);
    const double g = gamma_bound(pi.m, pi.bits());
    std::vector<BoundCheck> out;
    for (std::uint32_t S = 0; S <= full_mask(pi.c); ++S) {
        Rational e = 0;
        for (const auto& cls : classes) {
            if (cls.empty()) continue;
            e += Rational(cls.size()) / Rational(space.alice_count()) * sum_p_S_squared(space, cls, S);
        }
        BoundCheck b;
        b.lhs = to_double(e);
        b.rhs = std::pow(g + 6.0, std::popcount(S));
        b.holds = b.lhs <= b.rhs;
        out.push_back(b);
    }
    return out;
}

BoundCheck verify_marginal_l2(const MessageFunction& pi, Exec exec) {
    BlockSpace space(pi.m, pi.c);
    auto cls = message_classes(space, pi);
    auto lhs = second_moment_lhs(space, pi, exec);
    Rational e = 0;
    for (std::uint32_t b = 0; b < pi.buckets; ++b)
        e += Rational(cls[b].size()) / Rational(space.alice_count()) * lhs[b];
    BoundCheck out;
    out.lhs = to_double(e);
    out.rhs = 1.0 / pi.m + std::pow(40.0 * pi.bits() / pi.m, pi.c / 3.0);
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

double phi(double s, double c, double s2, double C) {
    if (!(s < s2)) throw std::invalid_argument("s < s₂ violated");
    if (C < 0 || c < 0) throw std::invalid_argument("C ≥ 0 and c ≥ 0 required");
    return 2.0 * s2 * s2 * std::pow(40.0 * C / (s2 - s), c / 6.0);
}

double multiround_step(double eps0, double s, double c, double s2, double C) {
    return 2.0 * c * eps0 + phi(s, c, s2, C);
}

TheoremBound theorem_bound(std::uint32_t m, std::uint32_t c, std::uint32_t r, double C,
                           double kappa) {
    if (r < 1) throw std::invalid_argument("r ≥ 1 violated");
    if (c < 1) throw std::invalid_argument("c ≥ 1 violated");
    TheoremBound out;
    auto seq = fmt_sequence(m, r);
    out.sequence = seq.values();
    const double lead = std::pow(2.0 * c, static_cast<double>(r) - 1.0);
    double sum = 0;
    for (std::size_t i = 1; i < seq.size(); ++i) sum += phi(seq[i - 1], c, seq[i], C);
    out.chain = lead * sum;
    out.simplified = lead * 8.0 * r * static_cast<double>(m) * m * std::pow(80.0 * r * C / m, c / 6.0);
    out.comm_threshold = std::pow(2.0, -kappa * r) * std::pow(static_cast<double>(m), 1.0 - 200.0 / c);
    out.below_threshold = C <= out.comm_threshold;
    return out;
}

} // namespace cyclegap
