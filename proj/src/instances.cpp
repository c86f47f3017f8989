#include "cyclegap/instances.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "cyclegap/samplers.hpp"

namespace cyclegap {

std::string to_string(Label l) { return l == Label::yes ? "yes" : "no"; }

Label parse_label(const std::string& s) {
    if (s == "yes" || s == "y" || s == "Y" || s == "Yes") return Label::yes;
    if (s == "no" || s == "n" || s == "N" || s == "No") return Label::no;
    throw std::invalid_argument("unknown label '" + s + "' (expected yes/no)");
}

std::vector<OwnedEdge> OmcInstance::edges() const {
    std::vector<OwnedEdge> out;
    out.reserve(n);
    for (auto [l, r] : alice.pairs()) out.push_back({left_id(l), right_id(r), Owner::alice});
    for (auto [l, r] : bob.pairs()) out.push_back({left_id(l), right_id(r), Owner::bob});
    return out;
}

namespace {

void check_permutation(const std::vector<Index>& p, std::uint32_t m, const char* what) {
    if (p.size() != m) throw std::invalid_argument(std::string(what) + " must have m entries");
    std::vector<bool> seen(m, false);
    for (auto v : p) {
        if (v >= m || seen[v]) throw std::invalid_argument(std::string(what) + " is not a permutation");
        seen[v] = true;
    }
}

std::vector<Index> as_permutation(const PartialMatching& m) {
    std::vector<Index> p(m.left_size());
    for (auto [l, r] : m.pairs()) p[l] = r;
    return p;
}

std::vector<Index> invert(const std::vector<Index>& p) {
    std::vector<Index> q(p.size());
    for (Index i = 0; i < p.size(); ++i) q[p[i]] = i;
    return q;
}

// Complete a gap matching to a permutation of [width]: unmatched left indices
// (including padding) pair with unmatched right indices in ascending order.
std::vector<Index> pad_gap(const PartialMatching& e, Index width) {
    std::vector<Index> p(width);
    std::vector<bool> left_used(width, false), right_used(width, false);
    for (auto [l, r] : e.pairs()) {
        p[l] = r;
        left_used[l] = true;
        right_used[r] = true;
    }
    Index r = 0;
    for (Index l = 0; l < width; ++l) {
        if (left_used[l]) continue;
        while (right_used[r]) ++r;
        p[l] = r++;
    }
    return p;
}

// Edge kinds used while wiring; positive values are in-copy gap numbers.
constexpr int kWireA = -1, kWireB = -2, kWireC = -3, kWireD = -4, kChain1 = -5, kChain2 = -6;

struct KindEdge {
    std::uint32_t u, v;
    int kind;
};

Owner layered_owner(int kind) {
    if (kind > 0) return kind % 2 == 1 ? Owner::alice : Owner::bob;
    if (kind == kChain1) return Owner::alice;
    return Owner::bob;
}

std::vector<std::array<std::uint32_t, 2>> incidence(std::uint32_t n_vertices,
                                                    const std::vector<OwnedEdge>& edges) {
    std::vector<std::array<std::uint32_t, 2>> inc(n_vertices);
    std::vector<std::uint8_t> deg(n_vertices, 0);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        for (auto x : {edges[e].u, edges[e].v}) {
            if (x >= n_vertices) throw std::invalid_argument("edge endpoint out of range");
            if (deg[x] == 2) throw std::invalid_argument("graph is not 2-regular");
            inc[x][deg[x]++] = e;
        }
    }
    for (auto d : deg) {
        if (d != 2) throw std::invalid_argument("graph is not 2-regular");
    }
    return inc;
}

std::uint32_t other_end(const OwnedEdge& e, std::uint32_t x) { return e.u == x ? e.v : e.u; }

// Turn a 2-regular graph whose cycles are all even into an OMC instance.
// Owners are kept when every vertex sees one Alice and one Bob edge;
// otherwise each cycle is re-colored alternately, starting with Alice on the
// edge from its smallest vertex to that vertex's smaller neighbor.
OmcInstance assemble(std::uint32_t n, std::uint32_t k, Label label, std::vector<OwnedEdge> edges,
                     std::map<std::string, std::string> metadata) {
    auto inc = incidence(n, edges);
    bool valid = true;
    for (std::uint32_t x = 0; x < n && valid; ++x) {
        valid = edges[inc[x][0]].owner != edges[inc[x][1]].owner;
    }

    std::vector<std::int8_t> side(n, -1);
    for (std::uint32_t s = 0; s < n; ++s) {
        if (side[s] >= 0) continue;
        auto e0 = inc[s][0], e1 = inc[s][1];
        std::uint32_t first = other_end(edges[e0], s) <= other_end(edges[e1], s) ? e0 : e1;
        std::uint32_t x = s, e = first;
        std::size_t pos = 0;
        do {
            side[x] = static_cast<std::int8_t>(pos % 2);
            if (!valid) edges[e].owner = pos % 2 == 0 ? Owner::alice : Owner::bob;
            x = other_end(edges[e], x);
            e = inc[x][0] == e ? inc[x][1] : inc[x][0];
            ++pos;
        } while (x != s);
        if (pos % 2 != 0) throw std::invalid_argument("odd cycle cannot be split into two matchings");
    }

    std::vector<Index> rank(n);
    Index nl = 0, nr = 0;
    for (std::uint32_t x = 0; x < n; ++x) rank[x] = side[x] == 0 ? nl++ : nr++;
    if (nl != nr) throw std::logic_error("unbalanced bipartition");

    OmcInstance out;
    out.n = n;
    out.k = k;
    out.label = label;
    out.alice = PartialMatching(nl, nr);
    out.bob = PartialMatching(nl, nr);
    for (const auto& e : edges) {
        auto l = side[e.u] == 0 ? e.u : e.v;
        auto r = side[e.u] == 0 ? e.v : e.u;
        (e.owner == Owner::alice ? out.alice : out.bob).add(rank[l], rank[r]);
    }
    metadata["ownership"] = valid ? "layered" : "alternating";
    out.metadata = std::move(metadata);
    return out;
}

std::vector<std::size_t> orbit_sizes(const std::vector<Index>& p) {
    std::vector<bool> seen(p.size(), false);
    std::vector<std::size_t> out;
    for (Index s = 0; s < p.size(); ++s) {
        if (seen[s]) continue;
        std::size_t len = 0;
        for (Index x = s; !seen[x]; x = p[x]) {
            seen[x] = true;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

void check_omc_shape(std::uint32_t n, std::uint32_t k) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("k even and k >= 4 violated");
    if (n == 0 || n % k != 0) throw std::invalid_argument("k | n violated");
}

} // namespace

FmtInstance build_fmt(std::uint32_t m, std::size_t c, std::uint32_t r, Label label, Rng& rng,
                      std::optional<std::vector<Index>> y, std::optional<std::vector<Index>> n) {
    if (c < 1) throw std::invalid_argument("c >= 1 violated");
    if (r < 1) throw std::invalid_argument("r >= 1 violated");
    if (m < 2) throw std::invalid_argument("m >= 2 violated");
    if (r > m) throw std::invalid_argument("r <= m violated (layer sizes must strictly increase)");
    if (!y && !n && (m % 2 == 0 || m < 3)) {
        throw std::invalid_argument("m odd and m >= 3 violated for the default Y/N permutations");
    }
    std::vector<Index> yp(m), np(m);
    if (y) {
        check_permutation(*y, m, "Y");
        yp = *y;
    } else {
        for (Index i = 0; i < m; ++i) yp[i] = (i + 1) % m;
    }
    if (n) {
        check_permutation(*n, m, "N");
        np = *n;
    } else {
        std::iota(np.begin(), np.end(), 0u);
    }
    if (yp == np) throw std::invalid_argument("Y != N violated");

    FmtInstance inst;
    inst.m = m;
    inst.c = c;
    inst.r = r;
    inst.label = label;
    inst.y_perm = PartialMatching::from_permutation(yp);
    inst.n_perm = PartialMatching::from_permutation(np);
    inst.graph = sample_conditioned(nest(c, fmt_sequence(m, r)), inst.target(), rng);
    return inst;
}

std::optional<std::size_t> max_feasible_c(std::uint32_t k, std::uint32_t r) {
    const std::uint64_t layers = (k - k % 4) / 4;
    std::optional<std::size_t> best;
    for (std::size_t c = 1;; ++c) {
        std::uint64_t ell = 1;
        for (std::uint32_t i = 0; i < r && ell < layers; ++i) ell *= 2 * c;
        if (ell >= layers) break;
        best = c;
    }
    return best;
}

OmcInstance fmt_to_omc(const FmtInstance& inst, std::uint32_t n, std::uint32_t k,
                       const OmcOptions& options) {
    check_omc_shape(n, k);
    const std::uint32_t m = inst.m;
    if (n != k * m) throw std::invalid_argument("n = k * m violated");
    const std::uint32_t kp = k - k % 4;
    const std::size_t layers = kp / 4;
    const std::size_t ell = inst.graph.gaps();
    const Index width = 2 * m;
    const bool faithful = ell + 1 <= layers;
    if (!faithful && options.strict) {
        auto best = max_feasible_c(k, inst.r);
        throw std::invalid_argument(
            "block graph has " + std::to_string(ell + 1) + " layers but only k/4 = " +
            std::to_string(layers) + " fit; " +
            (best ? "maximal feasible c is " + std::to_string(*best) : std::string("no c >= 1 fits")));
    }

    std::vector<std::vector<Index>> padded;
    for (std::size_t gap = 1; gap <= ell; ++gap) padded.push_back(pad_gap(inst.graph.matching(gap), width));
    std::vector<Index> ident(width);
    std::iota(ident.begin(), ident.end(), 0u);

    std::vector<std::vector<Index>> gaps;
    std::vector<Index> composite = ident;
    for (const auto& p : padded) {
        for (auto& x : composite) x = p[x];
    }
    if (faithful) {
        gaps = padded;
        while (gaps.size() + 1 < layers) gaps.push_back(ident);
    } else if (layers >= 2) {
        gaps.push_back(composite);
        while (gaps.size() + 1 < layers) gaps.push_back(ident);
    }
    const std::size_t lb = gaps.size() + 1;
    const auto composite_inv = invert(composite);

    auto id = [&](std::uint32_t copy, std::size_t layer, Index x) {
        return static_cast<std::uint32_t>((copy * lb + layer) * width + x);
    };
    auto last = [&](std::uint32_t copy, Index y) {
        return lb >= 2 ? id(copy, lb - 1, y) : id(copy, 0, composite_inv[y]);
    };

    std::vector<KindEdge> kedges;
    for (std::uint32_t copy = 0; copy < 2; ++copy) {
        for (std::size_t j = 1; j < lb; ++j) {
            for (Index x = 0; x < width; ++x) {
                kedges.push_back({id(copy, j - 1, x), id(copy, j, gaps[j - 1][x]), static_cast<int>(j)});
            }
        }
    }
    for (Index x = 0; x < m; ++x) {
        kedges.push_back({last(0, x), id(1, 0, x), kWireA});
        kedges.push_back({last(1, x), id(0, 0, m + x), kWireB});
        kedges.push_back({last(0, m + x), last(1, m + x), kWireC});
        kedges.push_back({id(1, 0, m + x), id(0, 0, x), kWireD});
    }
    auto n_vertices = static_cast<std::uint32_t>(2 * lb * width);

    if (k % 4 == 2) {
        // Split each top vertex of V_0 into a 3-chain: it keeps its wire to the
        // second copy and the chain's far end takes over its other edge.
        for (Index x = 0; x < m; ++x) {
            const std::uint32_t v = id(0, 0, m + x);
            const std::uint32_t v1 = n_vertices++, v2 = n_vertices++;
            for (auto& e : kedges) {
                if (e.kind == kWireB || (e.u != v && e.v != v)) continue;
                if (e.u == v) {
                    e.u = v2;
                } else {
                    e.v = v2;
                }
                break;
            }
            kedges.push_back({v, v1, kChain1});
            kedges.push_back({v1, v2, kChain2});
        }
    }
    if (n_vertices != n) throw std::logic_error("fmt_to_omc: vertex count mismatch");

    std::vector<OwnedEdge> edges;
    edges.reserve(kedges.size());
    for (const auto& e : kedges) edges.push_back({e.u, e.v, layered_owner(e.kind)});

    std::map<std::string, std::string> meta{
        {"source", "fmt"},
        {"construction", "two-copy-ring-wiring"},
        {"embedding", faithful ? "faithful" : "compressed"},
        {"m", std::to_string(m)},
        {"c", std::to_string(inst.c)},
        {"r", std::to_string(inst.r)},
        {"ell", std::to_string(ell)},
        {"layers_per_copy", std::to_string(lb)},
        {"chain_split", k % 4 == 2 ? "true" : "false"},
    };
    auto out = assemble(n, k, inst.label, std::move(edges), std::move(meta));

    // Each pass around the ring advances bottom V_0 by Z twice.
    auto z = as_permutation(inst.target());
    std::vector<Index> z2(m);
    for (Index i = 0; i < m; ++i) z2[i] = z[z[i]];
    for (auto len : orbit_sizes(z2)) out.expected_profile.push_back(len * k);
    std::sort(out.expected_profile.begin(), out.expected_profile.end());
    return out;
}

OmcInstance build_planted_omc(std::uint32_t n, std::uint32_t k, Label label, Rng& rng) {
    check_omc_shape(n, k);
    const Index h = n / 2;
    const Index group = label == Label::yes ? h : k / 2;
    auto lam = random_permutation(h, rng);
    auto rho = random_permutation(h, rng);
    OmcInstance out;
    out.n = n;
    out.k = k;
    out.label = label;
    out.alice = PartialMatching(h, h);
    out.bob = PartialMatching(h, h);
    for (Index base = 0; base < h; base += group) {
        for (Index i = 0; i < group; ++i) {
            out.alice.add(lam[base + i], rho[base + i]);
            out.bob.add(lam[base + (i + 1) % group], rho[base + i]);
        }
    }
    out.expected_profile = label == Label::yes ? std::vector<std::size_t>{n}
                                               : std::vector<std::size_t>(n / k, k);
    out.metadata = {{"source", "planted"}, {"construction", "planted-cycle-profile"},
                    {"ownership", "alternating"}};
    return out;
}

OmcInstance build_omc(std::uint32_t n, std::uint32_t k, std::uint32_t r, Label label, Rng& rng,
                      const OmcBuildOptions& options) {
    check_omc_shape(n, k);
    if (options.source == OmcSource::planted) return build_planted_omc(n, k, label, rng);
    const std::uint32_t m = n / k;
    if (m % 2 == 0) throw std::invalid_argument("n/k odd violated (use the planted source for even n/k)");
    std::size_t c = 1;
    if (options.c) {
        c = *options.c;
    } else if (auto best = max_feasible_c(k, r)) {
        c = *best;
    } else if (options.strict) {
        throw std::invalid_argument("(2c)^r < k/4 violated for every c >= 1");
    }
    auto fmt = build_fmt(m, c, r, label, rng);
    return fmt_to_omc(fmt, n, k, OmcOptions{options.strict});
}

OmcInstance build_k_vs_2k(std::uint32_t n, std::uint32_t k, Label label, Rng& rng,
                          const OmcOptions& options) {
    check_omc_shape(n, k);
    const std::uint32_t m = n / k;
    if (m % 4 != 0) throw std::invalid_argument("n/k a multiple of 4 violated");
    std::vector<Index> y(m), id(m);
    for (Index i = 0; i < m; ++i) {
        // 1-based: i -> i-3 when 4 | i, else i+1; four-cycles (4j+1 .. 4j+4).
        y[i] = (i + 1) % 4 == 0 ? i - 3 : i + 1;
        id[i] = i;
    }
    auto c = max_feasible_c(k, 1).value_or(1);
    auto fmt = build_fmt(m, c, 1, label, rng, y, id);
    auto out = fmt_to_omc(fmt, n, k, options);
    out.metadata["family"] = "k-vs-2k";
    return out;
}

OmcInstance relabel(const OmcInstance& inst, const std::vector<Index>& left_perm,
                    const std::vector<Index>& right_perm) {
    const Index h = inst.half();
    check_permutation(left_perm, h, "left relabeling");
    check_permutation(right_perm, h, "right relabeling");
    OmcInstance out = inst;
    out.alice = PartialMatching(h, h);
    out.bob = PartialMatching(h, h);
    for (auto [l, r] : inst.alice.pairs()) out.alice.add(left_perm[l], right_perm[r]);
    for (auto [l, r] : inst.bob.pairs()) out.bob.add(left_perm[l], right_perm[r]);
    return out;
}

OmcInstance shuffle_vertices(const OmcInstance& inst, Rng& rng) {
    auto lp = random_permutation(inst.half(), rng);
    auto rp = random_permutation(inst.half(), rng);
    auto out = relabel(inst, lp, rp);
    out.metadata["shuffled"] = "true";
    return out;
}

std::vector<std::size_t> omc_profile(const OmcInstance& inst) {
    return cycle_decomposition(inst.alice, inst.bob);
}

std::vector<std::size_t> two_regular_cycle_lengths(std::uint32_t n_vertices,
                                                   const std::vector<OwnedEdge>& edges) {
    auto inc = incidence(n_vertices, edges);
    std::vector<bool> seen(n_vertices, false);
    std::vector<std::size_t> out;
    for (std::uint32_t s = 0; s < n_vertices; ++s) {
        if (seen[s]) continue;
        std::size_t len = 0;
        std::uint32_t x = s, e = inc[s][0];
        do {
            seen[x] = true;
            ++len;
            x = other_end(edges[e], x);
            e = inc[x][0] == e ? inc[x][1] : inc[x][0];
        } while (x != s);
        out.push_back(len);
    }
    std::sort(out.begin(), out.end());
    return out;
}

StretchedGraph stretch_odd(const OmcInstance& inst, Rng& rng) {
    const std::uint32_t n = inst.n, k = inst.k;
    if (k == 0 || n % k != 0) throw std::invalid_argument("k | n violated");
    const std::uint32_t s = n / k;
    if (s % 2 != 0) throw std::invalid_argument("n/k even violated");
    auto chosen = sample_without_replacement(n, s, rng);
    std::sort(chosen.begin(), chosen.end());

    StretchedGraph out;
    out.n_vertices = n + s;
    out.stretched = s;
    out.guarantee_applies = s >= 500;
    auto base = inst.edges();
    std::size_t next = 0;
    std::uint32_t fresh = n;
    for (std::uint32_t e = 0; e < base.size(); ++e) {
        const auto& be = base[e];
        if (next < chosen.size() && chosen[next] == e) {
            out.edges.push_back({be.u, fresh, be.owner});
            out.edges.push_back({fresh, be.v, be.owner});
            ++fresh;
            ++next;
        } else {
            out.edges.push_back(be);
        }
    }
    out.cycle_lengths = two_regular_cycle_lengths(out.n_vertices, out.edges);
    out.odd_cycles = static_cast<std::size_t>(
        std::count_if(out.cycle_lengths.begin(), out.cycle_lengths.end(), [](auto l) { return l % 2 == 1; }));
    return out;
}

} // namespace cyclegap
