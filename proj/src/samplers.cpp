#include "cyclegap/samplers.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace cyclegap {

std::string to_string(SampleStrategy s) {
    return s == SampleStrategy::constructive ? "constructive" : "rejection";
}

std::uint64_t enumeration_budget() {
    if (const char* env = std::getenv("CYCLEGAP_BUDGET")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 10'000'000ULL;
}

PartialMatching sample_uniform_matching(Index a, Index b, Rng& rng) {
    if (a == 0 || b == 0) throw std::invalid_argument("sample_uniform_matching: a, b >= 1 required");
    PartialMatching m(a, b);
    if (a <= b) {
        auto img = sample_without_replacement(b, a, rng);
        for (Index l = 0; l < a; ++l) m.add(l, img[l]);
    } else {
        auto pre = sample_without_replacement(a, b, rng);
        for (Index r = 0; r < b; ++r) m.add(pre[r], r);
    }
    return m;
}

namespace {

// One gap of the constructive sampler. `depth[v]` is the earliest layer from
// which v (in the current last layer) is reachable.
PartialMatching constructive_gap(const std::vector<std::uint32_t>& depth, Index b, std::size_t j,
                                 Rng& rng, std::vector<std::uint32_t>& next_depth) {
    const auto a = static_cast<Index>(depth.size());
    std::vector<Index> domain;
    if (b >= a) {
        domain.resize(a);
        std::iota(domain.begin(), domain.end(), 0u);
    } else {
        // |R_i| = #{v : depth(v) <= i} is nondecreasing in i and reaches a > b.
        std::vector<std::uint32_t> cum(j, 0);
        for (auto d : depth) ++cum[d];
        for (std::size_t i = 1; i < j; ++i) cum[i] += cum[i - 1];
        // A* = R_{i*} with i* the last index whose |R_i| <= b; A** = R_{i**}
        // with i** the first index whose |R_i| >= b.
        long i_star = -1;
        std::size_t i_2 = j - 1;
        for (std::size_t i = 0; i < j; ++i) {
            if (cum[i] <= b) i_star = static_cast<long>(i);
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (cum[i] >= b) {
                i_2 = i;
                break;
            }
        }
        std::vector<Index> optional;
        for (Index v = 0; v < a; ++v) {
            if (static_cast<long>(depth[v]) <= i_star) {
                domain.push_back(v);
            } else if (depth[v] <= i_2) {
                optional.push_back(v);
            }
        }
        auto pick = sample_without_replacement(static_cast<std::uint32_t>(optional.size()),
                                               b - static_cast<std::uint32_t>(domain.size()), rng);
        for (auto p : pick) domain.push_back(optional[p]);
        std::sort(domain.begin(), domain.end());
    }
    auto img = sample_without_replacement(b, static_cast<std::uint32_t>(domain.size()), rng);
    PartialMatching m(a, b);
    next_depth.assign(b, static_cast<std::uint32_t>(j));
    for (std::size_t x = 0; x < domain.size(); ++x) {
        m.add(domain[x], img[x]);
        next_depth[img[x]] = depth[domain[x]];
    }
    return m;
}

LayeredGraph sample_constructive(const LayerSequence& t, Rng& rng) {
    std::vector<PartialMatching> ms;
    ms.reserve(t.gaps());
    std::vector<std::uint32_t> depth(t[0], 0), next;
    for (std::size_t j = 1; j < t.size(); ++j) {
        ms.push_back(constructive_gap(depth, t[j], j, rng, next));
        depth.swap(next);
    }
    return LayeredGraph(t, std::move(ms));
}

LayeredGraph sample_unconstrained(const LayerSequence& t, Rng& rng) {
    std::vector<PartialMatching> ms;
    ms.reserve(t.gaps());
    for (std::size_t j = 1; j < t.size(); ++j) ms.push_back(sample_uniform_matching(t[j - 1], t[j], rng));
    return LayeredGraph(t, std::move(ms));
}

std::vector<Index> domain_of(const PartialMatching& m) {
    std::vector<Index> out;
    for (auto [l, r] : m.pairs()) out.push_back(l);
    return out;
}

std::vector<Index> complement(const std::vector<Index>& sorted_subset, Index n) {
    std::vector<Index> out;
    std::size_t k = 0;
    for (Index v = 0; v < n; ++v) {
        if (k < sorted_subset.size() && sorted_subset[k] == v) {
            ++k;
        } else {
            out.push_back(v);
        }
    }
    return out;
}

// Uniform bijection sending from[i] into a shuffled copy of to.
void random_bijection(const std::vector<Index>& from, std::vector<Index> to, Rng& rng,
                      std::vector<Index>& perm) {
    shuffle(to, rng);
    for (std::size_t i = 0; i < from.size(); ++i) perm[from[i]] = to[i];
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

std::uint64_t matching_count(Index a, Index b) {
    Index hi = std::max(a, b), lo = std::min(a, b);
    std::uint64_t n = 1;
    for (Index i = 0; i < lo; ++i) n = saturating_mul(n, hi - i);
    return n;
}

void check_budget(const LayerSequence& t, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (std::size_t j = 1; j < t.size(); ++j) total = saturating_mul(total, matching_count(t[j - 1], t[j]));
    if (total > budget) {
        throw BudgetExceeded("enumeration of " + std::to_string(total) +
                             " layered graphs exceeds budget " + std::to_string(budget));
    }
}

} // namespace

std::pair<LayeredGraph, SampleReport> sample_nice_layered(const LayerSequence& t, Rng& rng,
                                                          SampleStrategy strategy,
                                                          std::uint64_t max_draws) {
    if (t.size() < 2) throw std::invalid_argument("sample_nice_layered: need at least two layers");
    SampleReport report;
    report.strategy = strategy;
    if (strategy == SampleStrategy::constructive) {
        report.draws = 1;
        return {sample_constructive(t, rng), report};
    }
    while (report.draws < max_draws) {
        ++report.draws;
        auto g = sample_unconstrained(t, rng);
        if (is_nice(g)) return {std::move(g), report};
        ++report.rejections;
    }
    throw BudgetExceeded("sample_nice_layered: rejection sampler exceeded " +
                             std::to_string(max_draws) + " draws");
}

LayeredGraph sample_nested_block(std::size_t c, const LayerSequence& s, Rng& rng) {
    return sample_nice_layered(nest(c, s), rng).first;
}

LayeredGraph sample_conditioned(const LayerSequence& t, const PartialMatching& z, Rng& rng) {
    if (t.size() < 2) throw std::invalid_argument("sample_conditioned: need at least two layers");
    if (z.left_size() != t.front() || z.right_size() != t.back()) {
        throw std::invalid_argument("sample_conditioned: Z dimensions do not match the end layers");
    }
    if (z.size() != t.min_over(0, t.size() - 1)) {
        throw std::invalid_argument("sample_conditioned: |Z| must equal the minimum layer size");
    }
    auto g = sample_constructive(t, rng);
    const std::size_t k = g.gaps();
    auto z0 = compose(g, 0, k);

    const Index t0 = t.front();
    auto dom0 = domain_of(z0);
    auto domz = domain_of(z);
    std::vector<Index> rho(t0);
    random_bijection(dom0, domz, rng, rho);
    random_bijection(complement(dom0, t0), complement(domz, t0), rng, rho);

    std::vector<PartialMatching> ms = g.matchings();
    PartialMatching first(t0, t[1]);
    for (auto [l, r] : ms[0].pairs()) first.add(rho[l], r);
    ms[0] = first;

    // z1 = final matching after relabeling V_0; pi carries it onto z.
    const Index tk = t.back();
    std::vector<Index> pi(tk);
    std::vector<Index> img1, imgz;
    for (auto [l, r] : z0.pairs()) {
        pi[r] = *z.image(rho[l]);
        img1.push_back(r);
        imgz.push_back(pi[r]);
    }
    std::sort(img1.begin(), img1.end());
    std::sort(imgz.begin(), imgz.end());
    random_bijection(complement(img1, tk), complement(imgz, tk), rng, pi);

    PartialMatching last(t[k - 1], tk);
    for (auto [l, r] : ms[k - 1].pairs()) last.add(l, pi[r]);
    ms[k - 1] = last;
    return LayeredGraph(t, std::move(ms));
}

LayeredGraph sample_conditioned(std::size_t c, const LayerSequence& s, const PartialMatching& z,
                                Rng& rng) {
    return sample_conditioned(nest(c, s), z, rng);
}

std::vector<PartialMatching> enumerate_matchings(Index a, Index b) {
    const Index lo = std::min(a, b), hi = std::max(a, b);
    std::vector<PartialMatching> out;
    std::vector<Index> img;
    std::vector<bool> used(hi, false);
    auto rec = [&](auto&& self) -> void {
        if (img.size() == lo) {
            PartialMatching m(a, b);
            for (Index x = 0; x < lo; ++x) {
                if (a <= b) {
                    m.add(x, img[x]);
                } else {
                    m.add(img[x], x);
                }
            }
            out.push_back(std::move(m));
            return;
        }
        for (Index v = 0; v < hi; ++v) {
            if (used[v]) continue;
            used[v] = true;
            img.push_back(v);
            self(self);
            img.pop_back();
            used[v] = false;
        }
    };
    rec(rec);
    std::sort(out.begin(), out.end(), [](const PartialMatching& x, const PartialMatching& y) {
        return x.pairs() < y.pairs();
    });
    return out;
}

std::vector<LayeredGraph> enumerate_nice(const LayerSequence& t, std::uint64_t budget) {
    if (t.size() < 2) throw std::invalid_argument("enumerate_nice: need at least two layers");
    check_budget(t, budget);
    std::vector<std::vector<PartialMatching>> choices;
    for (std::size_t j = 1; j < t.size(); ++j) choices.push_back(enumerate_matchings(t[j - 1], t[j]));

    std::vector<LayeredGraph> out;
    std::vector<PartialMatching> cur;
    auto rec = [&](auto&& self, std::size_t gap) -> void {
        if (gap == choices.size()) {
            out.emplace_back(t, cur);
            return;
        }
        for (const auto& m : choices[gap]) {
            cur.push_back(m);
            std::vector<std::uint32_t> prefix(t.begin(), t.begin() + static_cast<long>(gap) + 2);
            if (is_nice(LayeredGraph(LayerSequence(prefix), cur))) self(self, gap + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<LayeredGraph> enumerate_conditioned(const LayerSequence& t, const PartialMatching& z,
                                                std::uint64_t budget) {
    auto all = enumerate_nice(t, budget);
    std::vector<LayeredGraph> out;
    for (auto& g : all) {
        if (compose(g, 0, g.gaps()) == z) out.push_back(std::move(g));
    }
    return out;
}

std::vector<LayeredGraph> enumerate_conditioned(std::size_t c, const LayerSequence& s,
                                                const PartialMatching& z, std::uint64_t budget) {
    return enumerate_conditioned(nest(c, s), z, budget);
}

} // namespace cyclegap
