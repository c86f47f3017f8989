#include "cyclegap/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <stdexcept>

namespace cyclegap {

std::string to_string(Problem p) {
    switch (p) {
    case Problem::maxcut: return "maxcut";
    case Problem::matching: return "matching";
    case Problem::mas: return "mas";
    case Problem::mst: return "mst";
    case Problem::pt_connectivity: return "pt-connectivity";
    case Problem::pt_bipartite: return "pt-bipartite";
    case Problem::pt_cyclefree: return "pt-cyclefree";
    case Problem::schatten: return "schatten";
    case Problem::rank: return "rank";
    }
    return "?";
}

Problem parse_problem(const std::string& s) {
    for (auto p : {Problem::maxcut, Problem::matching, Problem::mas, Problem::mst, Problem::pt_connectivity,
                   Problem::pt_bipartite, Problem::pt_cyclefree, Problem::schatten, Problem::rank}) {
        auto name = to_string(p);
        auto underscored = name;
        std::replace(underscored.begin(), underscored.end(), '-', '_');
        if (s == name || s == underscored) return p;
    }
    throw std::invalid_argument("unknown problem '" + s + "'");
}

AnalyticOptimum AnalyticOptimum::exact(const Rational& v) {
    AnalyticOptimum o;
    o.kind = Kind::exact;
    o.lo = o.hi = o.feasible_lo = o.feasible_hi = v;
    o.value = to_double(v);
    return o;
}

AnalyticOptimum AnalyticOptimum::interval(const Rational& lo, const Rational& hi, const Rational& feasible_lo,
                                          const Rational& feasible_hi, double probability) {
    AnalyticOptimum o;
    o.kind = Kind::interval;
    o.lo = lo;
    o.hi = hi;
    o.feasible_lo = feasible_lo;
    o.feasible_hi = feasible_hi;
    o.probability = probability;
    return o;
}

AnalyticOptimum AnalyticOptimum::real(double v) {
    AnalyticOptimum o;
    o.kind = Kind::real;
    o.value = v;
    return o;
}

Label GapPredicate::decide(const Rational& value) const {
    bool yes = yes_when == Comparison::above ? value > threshold : value < threshold;
    return yes ? Label::yes : Label::no;
}

Label GapPredicate::decide(double value) const {
    double t = to_double(threshold);
    bool yes = yes_when == Comparison::above ? value > t : value < t;
    return yes ? Label::yes : Label::no;
}

double g_bound(double eps, int p, double beta) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("ε ∈ (0,1) violated");
    if (p < 1) throw std::invalid_argument("p ≥ 1 violated");
    return beta * std::pow(eps, 1.0 / (2.0 * p - 1.0));
}

namespace {

struct KBound {
    double numerator;
    double denominator;
    const char* text;
};

KBound k_bound(Problem p, std::int64_t W) {
    switch (p) {
    case Problem::maxcut:
    case Problem::matching:
    case Problem::pt_bipartite: return {1.0, 20.0, "k ≤ 1/(20ε)"};
    case Problem::mas: return {1.0, 4.0, "k ≤ 1/(4ε)"};
    case Problem::mst: return {static_cast<double>(W), 4.0, "k ≤ W/(4ε)"};
    case Problem::pt_connectivity:
    case Problem::pt_cyclefree: return {1.0, 2.0, "k ≤ 1/(2ε)"};
    default: return {0.0, 0.0, nullptr};
    }
}

std::vector<StreamItem> items_of(const std::vector<OwnedEdge>& edges) {
    std::vector<StreamItem> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back({e.u, e.v, 1});
    return out;
}

std::size_t count_alice(const std::vector<OwnedEdge>& edges) {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [](const OwnedEdge& e) { return e.owner == Owner::alice; }));
}

void finish_stream(ProblemInstance& pi, Rng& rng, const ReductionOptions& opt) {
    pi.expected_items = pi.stream.items.size();
    pi.expected_vertices = pi.stream.n_vertices;
    pi.metadata["stream_order"] = "alice-then-bob";
    if (opt.shuffle_stream) {
        shuffle(pi.stream.items, rng);
        pi.stream.alice_items = 0;
        pi.metadata["stream_order"] = "shuffled";
    }
}

ProblemInstance base_instance(Problem p, const OmcInstance& inst, double eps) {
    ProblemInstance pi;
    pi.problem = p;
    pi.label = inst.label;
    pi.params.eps = eps;
    pi.params.n = inst.n;
    pi.params.k = inst.k;
    for (const auto& [key, value] : inst.metadata) pi.metadata["instance." + key] = value;
    return pi;
}

// Stretch until the No-side event (at least n/(10k) odd cycles) holds when
// certification is requested.
StretchedGraph stretched(const OmcInstance& inst, Rng& rng, const ReductionOptions& opt, ProblemInstance& pi) {
    auto h = stretch_odd(inst, rng);
    std::size_t resamples = 0;
    if (opt.certify && inst.label == Label::no) {
        const Rational need(inst.n, 10 * inst.k);
        while (Rational(h.odd_cycles) < need) {
            if (++resamples > opt.max_resamples) {
                throw std::runtime_error("certify: odd-cycle event not reached after " +
                                         std::to_string(opt.max_resamples) + " resamples");
            }
            h = stretch_odd(inst, rng);
        }
        pi.metadata["certified_resamples"] = std::to_string(resamples);
    }
    pi.metadata["construction"] = "odd-cycle-stretching";
    pi.metadata["stretched_edges"] = std::to_string(h.stretched);
    pi.metadata["guarantee_applies"] = h.guarantee_applies ? "true" : "false";
    return h;
}

EdgeStream stream_of(const StretchedGraph& h) {
    EdgeStream s;
    s.n_vertices = h.n_vertices;
    s.items = items_of(h.edges);
    s.alice_items = count_alice(h.edges);
    return s;
}

} // namespace

std::uint32_t max_k(Problem p, double eps, std::int64_t W) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("ε ∈ (0,1) violated");
    auto b = k_bound(p, W);
    if (!b.text) throw std::invalid_argument("problem " + to_string(p) + " has no k bound");
    return static_cast<std::uint32_t>(std::floor(b.numerator / (b.denominator * eps) + 1e-9));
}

std::uint32_t derive_k(Problem p, double eps, std::int64_t W) {
    auto k = max_k(p, eps, W);
    return k - k % 2;
}

void check_k(Problem p, std::uint32_t k, double eps, std::int64_t W) {
    if (k > max_k(p, eps, W)) throw std::invalid_argument(std::string(k_bound(p, W).text) + " violated");
}

ProblemInstance to_maxcut(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt) {
    check_k(Problem::maxcut, inst.k, eps);
    auto pi = base_instance(Problem::maxcut, inst, eps);
    auto h = stretched(inst, rng, opt, pi);
    pi.stream = stream_of(h);
    const Rational n(inst.n), s(inst.n / inst.k);
    const Rational no_hi = n + Rational(9 * inst.n, 10 * inst.k);
    if (inst.label == Label::yes) {
        pi.optimum = AnalyticOptimum::exact(n + s);
    } else {
        pi.optimum = AnalyticOptimum::interval(n, no_hi, n, n + s, h.guarantee_applies ? 0.9 : 0.0);
    }
    pi.gap = {no_hi, Comparison::above};
    finish_stream(pi, rng, opt);
    return pi;
}

ProblemInstance to_matching(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt) {
    check_k(Problem::matching, inst.k, eps);
    auto pi = base_instance(Problem::matching, inst, eps);
    auto h = stretched(inst, rng, opt, pi);
    pi.stream = stream_of(h);
    const Rational n(inst.n), s(inst.n / inst.k);
    const Rational no_hi = (n + Rational(9 * inst.n, 10 * inst.k)) / 2;
    if (inst.label == Label::yes) {
        pi.optimum = AnalyticOptimum::exact((n + s) / 2);
    } else {
        pi.optimum = AnalyticOptimum::interval(n / 2, no_hi, n / 2, (n + s) / 2, h.guarantee_applies ? 0.9 : 0.0);
        if (h.odd_cycles == 0) pi.metadata["degenerate"] = "true";
    }
    pi.gap = {no_hi, Comparison::above};
    finish_stream(pi, rng, opt);
    return pi;
}

ProblemInstance to_mas(const OmcInstance& inst, double eps, Rng& rng, const ReductionOptions& opt) {
    check_k(Problem::mas, inst.k, eps);
    auto pi = base_instance(Problem::mas, inst, eps);
    pi.metadata["construction"] = "orient-alice-left-to-right";
    pi.stream.n_vertices = inst.n;
    pi.stream.directed = true;
    for (auto [l, r] : inst.alice.pairs()) pi.stream.items.push_back({inst.left_id(l), inst.right_id(r), 1});
    pi.stream.alice_items = pi.stream.items.size();
    for (auto [l, r] : inst.bob.pairs()) pi.stream.items.push_back({inst.right_id(r), inst.left_id(l), 1});
    const Rational n(inst.n), no_value = n - Rational(inst.n / inst.k);
    pi.optimum = AnalyticOptimum::exact(inst.label == Label::yes ? n - 1 : no_value);
    pi.gap = {no_value, Comparison::above};
    finish_stream(pi, rng, opt);
    return pi;
}

ProblemInstance to_mst(const OmcInstance& inst, double eps, std::int64_t W, Rng& rng, const ReductionOptions& opt) {
    if (W < 2) throw std::invalid_argument("W ≥ 2 violated");
    check_k(Problem::mst, inst.k, eps, W);
    auto pi = base_instance(Problem::mst, inst, eps);
    pi.params.W = W;
    pi.metadata["construction"] = "hub-vertex-weights";
    pi.stream.n_vertices = inst.n + 1;
    pi.stream.weighted = true;
    for (auto [l, r] : inst.alice.pairs()) pi.stream.items.push_back({inst.left_id(l), inst.right_id(r), 1});
    pi.stream.alice_items = pi.stream.items.size();
    for (auto [l, r] : inst.bob.pairs()) pi.stream.items.push_back({inst.left_id(l), inst.right_id(r), 1});
    // Hub edges belong to Bob; the special vertex is 0 and its hub edge has weight 1.
    const std::uint32_t hub = inst.n;
    for (std::uint32_t v = 0; v < inst.n; ++v) pi.stream.items.push_back({hub, v, v == 0 ? 1 : W});
    const Rational n(inst.n);
    const Rational no_value = n + Rational(inst.n / inst.k - 1) * Rational(W - 1);
    pi.optimum = AnalyticOptimum::exact(inst.label == Label::yes ? n : no_value);
    pi.gap = {no_value, Comparison::below};
    finish_stream(pi, rng, opt);
    return pi;
}

ProblemInstance to_pt(const OmcInstance& inst, double eps, PtVariant variant, Rng& rng, const ReductionOptions& opt) {
    const Rational n(inst.n), s(inst.n / inst.k);
    switch (variant) {
    case PtVariant::connectivity: {
        check_k(Problem::pt_connectivity, inst.k, eps);
        auto pi = base_instance(Problem::pt_connectivity, inst, eps);
        pi.metadata["construction"] = "cycle-union";
        pi.stream.n_vertices = inst.n;
        auto edges = inst.edges();
        pi.stream.items = items_of(edges);
        pi.stream.alice_items = count_alice(edges);
        pi.optimum = AnalyticOptimum::exact(inst.label == Label::yes ? Rational(1) : s);
        pi.gap = {s, Comparison::below};
        pi.metadata["eps_far"] = (s - 1 > Rational(eps) * n) ? "true" : "false";
        finish_stream(pi, rng, opt);
        return pi;
    }
    case PtVariant::bipartite: {
        check_k(Problem::pt_bipartite, inst.k, eps);
        auto pi = base_instance(Problem::pt_bipartite, inst, eps);
        auto h = stretched(inst, rng, opt, pi);
        pi.stream = stream_of(h);
        const Rational need(inst.n, 10 * inst.k);
        if (inst.label == Label::yes) {
            pi.optimum = AnalyticOptimum::exact(0);
        } else {
            pi.optimum = AnalyticOptimum::interval(need, s, 0, s, h.guarantee_applies ? 0.9 : 0.0);
        }
        pi.gap = {need, Comparison::below};
        finish_stream(pi, rng, opt);
        return pi;
    }
    case PtVariant::cyclefree: {
        check_k(Problem::pt_cyclefree, inst.k, eps);
        auto pi = base_instance(Problem::pt_cyclefree, inst, eps);
        pi.metadata["construction"] = "cycle-union-minus-one-alice-edge";
        pi.stream.n_vertices = inst.n;
        auto edges = inst.edges();
        edges.erase(edges.begin());
        pi.stream.items = items_of(edges);
        pi.stream.alice_items = count_alice(edges);
        pi.optimum = AnalyticOptimum::exact(inst.label == Label::yes ? Rational(0) : s - 1);
        pi.gap = {s - 1, Comparison::below};
        pi.metadata["eps_far"] = (s - 1 > Rational(eps) * n) ? "true" : "false";
        finish_stream(pi, rng, opt);
        return pi;
    }
    }
    throw std::invalid_argument("unknown property-testing variant");
}

CycleGraph build_cycle_profile(std::uint32_t n, std::uint32_t length, Rng& rng) {
    if (length < 3) throw std::invalid_argument("cycle length ≥ 3 violated");
    if (n % length != 0) throw std::invalid_argument("cycle length | n violated");
    auto perm = random_permutation(n, rng);
    CycleGraph g;
    g.n_vertices = n;
    for (std::uint32_t base = 0; base < n; base += length) {
        for (std::uint32_t i = 0; i < length; ++i) {
            auto u = perm[base + i], v = perm[base + (i + 1) % length];
            g.edges.push_back({std::min(u, v), std::max(u, v), i % 2 == 0 ? Owner::alice : Owner::bob});
        }
    }
    std::stable_partition(g.edges.begin(), g.edges.end(), [](const OwnedEdge& e) { return e.owner == Owner::alice; });
    return g;
}

CycleGraph cycle_graph(const OmcInstance& inst) { return {inst.n, inst.edges()}; }

double cycle_spectrum_power_sum(std::size_t length, double q) {
    double sum = 0.0;
    for (std::size_t j = 0; j < length; ++j) {
        double lambda = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                             static_cast<double>(length));
        if (j == 0) continue; // the all-ones vector
        sum += q == 0.0 ? 1.0 : std::pow(lambda, q);
    }
    return sum;
}

double schatten_of_cycles(const std::vector<std::size_t>& lengths, double q) {
    double total = 0.0;
    for (auto l : lengths) total += cycle_spectrum_power_sum(l, q);
    return q == 0.0 ? total : std::pow(total, 1.0 / q);
}

ProblemInstance to_schatten(const CycleGraph& g, Label label, std::uint32_t yes_length, std::uint32_t no_length,
                            double q, Rng& rng, const ReductionOptions& opt) {
    if (q < 0.0) throw std::invalid_argument("q ≥ 0 violated");
    if (q > 0.0 && std::floor(q) == q && static_cast<long long>(q) % 2 == 0) {
        throw std::invalid_argument("q must not be a positive even integer");
    }
    const std::uint32_t n = g.n_vertices;
    if (n % yes_length != 0 || n % no_length != 0) throw std::invalid_argument("cycle lengths must divide n");
    ProblemInstance pi;
    pi.problem = q == 0.0 ? Problem::rank : Problem::schatten;
    pi.label = label;
    pi.params.n = n;
    pi.params.k = no_length;
    pi.params.q = q;
    pi.metadata["construction"] = "cycle-laplacian";
    pi.stream.n_vertices = n;
    pi.stream.items = items_of(g.edges);
    pi.stream.alice_items = count_alice(g.edges);
    std::vector<std::size_t> yes_profile(n / yes_length, yes_length), no_profile(n / no_length, no_length);
    if (q == 0.0) {
        Rational yes_rank(n - n / yes_length), no_rank(n - n / no_length);
        pi.optimum = AnalyticOptimum::exact(label == Label::yes ? yes_rank : no_rank);
        pi.gap = {(yes_rank + no_rank) / 2, yes_rank > no_rank ? Comparison::above : Comparison::below};
    } else {
        double yes_value = schatten_of_cycles(yes_profile, q);
        double no_value = schatten_of_cycles(no_profile, q);
        // For odd integer q, tr(L^q) only sees cycles of length <= q, so long
        // cycles of either length give the same value.
        if (std::abs(yes_value - no_value) <= 1e-9 * std::max(yes_value, no_value)) {
            throw std::invalid_argument("S_q(Yes) ≠ S_q(No) violated: q = " + std::to_string(q) +
                                        " does not separate cycle lengths " + std::to_string(yes_length) +
                                        " and " + std::to_string(no_length));
        }
        pi.optimum = AnalyticOptimum::real(label == Label::yes ? yes_value : no_value);
        pi.gap = {Rational((yes_value + no_value) / 2), yes_value > no_value ? Comparison::above : Comparison::below};
    }
    finish_stream(pi, rng, opt);
    return pi;
}

ProblemInstance to_schatten(const OmcInstance& k_vs_2k, double q, Rng& rng, const ReductionOptions& opt) {
    return to_schatten(cycle_graph(k_vs_2k), k_vs_2k.label, 2 * k_vs_2k.k, k_vs_2k.k, q, rng, opt);
}

} // namespace cyclegap
