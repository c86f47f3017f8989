#include "cyclegap/stream_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cyclegap/rng.hpp"

namespace cyclegap {

void BitBuffer::put(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
        if (bits_ % 8 == 0) data_.push_back(0);
        if ((value >> i) & 1U) data_.back() |= static_cast<std::uint8_t>(1U << (bits_ % 8));
        ++bits_;
    }
}

std::uint64_t BitBuffer::get(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
        if (cursor_ >= bits_) throw std::invalid_argument("BitBuffer: read past end of snapshot");
        if ((data_[cursor_ / 8] >> (cursor_ % 8)) & 1U) v |= std::uint64_t{1} << i;
        ++cursor_;
    }
    return v;
}

std::vector<std::uint8_t> BitBuffer::bytes() const { return data_; }

BitBuffer BitBuffer::from_bytes(std::span<const std::uint8_t> bytes) {
    BitBuffer b;
    b.data_.assign(bytes.begin(), bytes.end());
    b.bits_ = bytes.size() * 8;
    return b;
}

unsigned bit_width_for(std::uint64_t n) {
    unsigned w = 1;
    while (w < 64 && (std::uint64_t{1} << w) < n) ++w;
    return w;
}

RunReport run(StreamAlgorithm& algo, const EdgeStream& stream, std::size_t passes) {
    if (passes < 1) throw std::invalid_argument("passes ≥ 1 violated");
    RunReport rep;
    rep.algorithm = algo.name();
    auto t0 = std::chrono::steady_clock::now();
    try {
        algo.init(stream.n_vertices, passes);
        rep.max_state_bits = algo.state_bits();
        for (std::size_t p = 0; p < passes; ++p) {
            for (const auto& it : stream.items) {
                algo.process(it);
                ++rep.items;
                rep.max_state_bits = std::max(rep.max_state_bits, algo.state_bits());
            }
            algo.end_pass(p);
            rep.passes = p + 1;
            if (!algo.wants_another_pass()) break;
        }
        rep.answer = algo.finish();
    } catch (const std::exception& e) {
        rep.ok = false;
        rep.diagnostics = std::string(algo.name()) + " failed after " + std::to_string(rep.items) +
                          " items: " + e.what();
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<std::uint8_t> EdgeCounter::serialize() const {
    BitBuffer b;
    b.put(count_, 64);
    return b.bytes();
}

void EdgeCounter::restore(std::span<const std::uint8_t> bytes) {
    auto b = BitBuffer::from_bytes(bytes);
    count_ = b.get(64);
}

void UnionFindConnectivity::init(std::uint32_t n_vertices, std::size_t) {
    parent_.resize(n_vertices);
    std::iota(parent_.begin(), parent_.end(), 0u);
    width_ = bit_width_for(n_vertices);
}

std::uint32_t UnionFindConnectivity::find(std::uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

void UnionFindConnectivity::process(const StreamItem& item) {
    if (item.u >= parent_.size() || item.v >= parent_.size()) {
        throw std::out_of_range("edge endpoint outside the vertex set");
    }
    auto a = find(item.u), b = find(item.v);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
}

std::int64_t UnionFindConnectivity::finish() {
    std::int64_t roots = 0;
    for (std::uint32_t x = 0; x < parent_.size(); ++x) roots += parent_[x] == x;
    return roots;
}

std::size_t UnionFindConnectivity::state_bits() const { return parent_.size() * width_; }

std::vector<std::uint8_t> UnionFindConnectivity::serialize() const {
    BitBuffer b;
    for (auto p : parent_) b.put(p, width_);
    return b.bytes();
}

void UnionFindConnectivity::restore(std::span<const std::uint8_t> bytes) {
    auto b = BitBuffer::from_bytes(bytes);
    for (auto& p : parent_) p = static_cast<std::uint32_t>(b.get(width_));
}

void ParityUnionFind::init(std::uint32_t n_vertices, std::size_t) {
    parent_.resize(n_vertices);
    std::iota(parent_.begin(), parent_.end(), 0u);
    parity_.assign(n_vertices, 0);
    odd_.assign(n_vertices, 0);
    width_ = bit_width_for(n_vertices);
}

std::pair<std::uint32_t, std::uint8_t> ParityUnionFind::find(std::uint32_t x) {
    std::vector<std::uint32_t> path;
    while (parent_[x] != x) {
        path.push_back(x);
        x = parent_[x];
    }
    const std::uint32_t root = x;
    // Walk back from the root so each node's parity becomes relative to it.
    std::uint8_t acc = 0;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        acc ^= parity_[*it];
        parity_[*it] = acc;
        parent_[*it] = root;
    }
    return {root, path.empty() ? std::uint8_t{0} : parity_[path.front()]};
}

void ParityUnionFind::process(const StreamItem& item) {
    if (item.u >= parent_.size() || item.v >= parent_.size()) {
        throw std::out_of_range("edge endpoint outside the vertex set");
    }
    auto [a, pa] = find(item.u);
    auto [b, pb] = find(item.v);
    if (a == b) {
        if (pa == pb) odd_[a] = 1;
        return;
    }
    auto lo = std::min(a, b), hi = std::max(a, b);
    parent_[hi] = lo;
    parity_[hi] = static_cast<std::uint8_t>(pa ^ pb ^ 1);
    odd_[lo] = static_cast<std::uint8_t>(odd_[lo] | odd_[hi]);
}

std::int64_t ParityUnionFind::finish() {
    std::int64_t odd = 0;
    for (std::uint32_t x = 0; x < parent_.size(); ++x) {
        if (parent_[x] == x) odd += odd_[x];
    }
    return odd;
}

std::size_t ParityUnionFind::state_bits() const { return parent_.size() * (width_ + 2); }

std::vector<std::uint8_t> ParityUnionFind::serialize() const {
    BitBuffer b;
    for (std::size_t x = 0; x < parent_.size(); ++x) {
        b.put(parent_[x], width_);
        b.put(parity_[x], 1);
        b.put(odd_[x], 1);
    }
    return b.bytes();
}

void ParityUnionFind::restore(std::span<const std::uint8_t> bytes) {
    auto b = BitBuffer::from_bytes(bytes);
    for (std::size_t x = 0; x < parent_.size(); ++x) {
        parent_[x] = static_cast<std::uint32_t>(b.get(width_));
        parity_[x] = static_cast<std::uint8_t>(b.get(1));
        odd_[x] = static_cast<std::uint8_t>(b.get(1));
    }
}


void ReservoirSampler::init(std::uint32_t n_vertices, std::size_t) {
    seen_ = 0;
    sample_.clear();
    width_ = bit_width_for(n_vertices);
}

void ReservoirSampler::process(const StreamItem& item) {
    ++seen_;
    if (sample_.size() < capacity_) {
        sample_.push_back(item);
        return;
    }
    auto j = splitmix64(seed_ ^ splitmix64(seen_)) % seen_;
    if (j < capacity_) sample_[j] = item;
}

std::size_t ReservoirSampler::state_bits() const {
    return 64 + 32 + sample_.size() * (2 * width_ + 64);
}

std::vector<std::uint8_t> ReservoirSampler::serialize() const {
    BitBuffer b;
    b.put(seen_, 64);
    b.put(sample_.size(), 32);
    for (const auto& it : sample_) {
        b.put(it.u, width_);
        b.put(it.v, width_);
        b.put(static_cast<std::uint64_t>(it.w), 64);
    }
    return b.bytes();
}

void ReservoirSampler::restore(std::span<const std::uint8_t> bytes) {
    auto b = BitBuffer::from_bytes(bytes);
    seen_ = b.get(64);
    sample_.resize(b.get(32));
    for (auto& it : sample_) {
        it.u = static_cast<std::uint32_t>(b.get(width_));
        it.v = static_cast<std::uint32_t>(b.get(width_));
        it.w = static_cast<std::int64_t>(b.get(64));
    }
}

std::unique_ptr<StreamAlgorithm> make_algorithm(const std::string& name, std::uint64_t seed, std::size_t capacity) {
    if (name == "counter" || name == "edge-counter") return std::make_unique<EdgeCounter>();
    if (name == "connectivity" || name == "union-find-connectivity") return std::make_unique<UnionFindConnectivity>();
    if (name == "parity" || name == "parity-union-find") return std::make_unique<ParityUnionFind>();
    if (name == "reservoir" || name == "reservoir-sampler") return std::make_unique<ReservoirSampler>(capacity, seed);
    throw std::invalid_argument("unknown streaming algorithm '" + name + "'");
}

// ---------------------------------------------------------------------------

namespace {

struct Dsu {
    std::vector<std::uint32_t> p;
    explicit Dsu(std::uint32_t n) : p(n) { std::iota(p.begin(), p.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

struct Component {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool is_cycle() const { return edges == vertices && vertices > 0; }
};

// Components of a graph with maximum degree 2 (each is a path or a cycle).
std::vector<Component> low_degree_components(const EdgeStream& s) {
    std::vector<std::uint32_t> deg(s.n_vertices, 0);
    Dsu d(s.n_vertices);
    for (const auto& it : s.items) {
        if (it.u >= s.n_vertices || it.v >= s.n_vertices) throw std::invalid_argument("endpoint out of range");
        if (++deg[it.u] > 2 || ++deg[it.v] > 2) {
            throw std::invalid_argument("oracle shape violation: vertex of degree ≥ 3");
        }
        d.unite(it.u, it.v);
    }
    std::vector<Component> by_root(s.n_vertices);
    for (std::uint32_t x = 0; x < s.n_vertices; ++x) ++by_root[d.find(x)].vertices;
    for (const auto& it : s.items) ++by_root[d.find(it.u)].edges;
    std::vector<Component> out;
    for (std::uint32_t x = 0; x < s.n_vertices; ++x) {
        if (d.find(x) == x) out.push_back(by_root[x]);
    }
    return out;
}

} // namespace

Rational exact_maxcut_cycles(const std::vector<std::size_t>& lengths) {
    Rational v = 0;
    for (auto l : lengths) v += Rational(l - l % 2);
    return v;
}

Rational exact_maxcut_cycles(const EdgeStream& s) {
    Rational v = 0;
    for (const auto& c : low_degree_components(s)) {
        v += Rational(c.edges);
        if (c.is_cycle() && c.vertices % 2 == 1) v -= 1;
    }
    return v;
}

Rational exact_matching_cycles(const std::vector<std::size_t>& lengths) {
    Rational v = 0;
    for (auto l : lengths) v += Rational(l / 2);
    return v;
}

Rational exact_matching_cycles(const EdgeStream& s) {
    Rational v = 0;
    for (const auto& c : low_degree_components(s)) {
        v += Rational(c.is_cycle() ? c.vertices / 2 : (c.edges + 1) / 2);
    }
    return v;
}

Rational exact_mas(const EdgeStream& s) {
    if (!s.directed) throw std::invalid_argument("exact_mas: stream must be directed");
    std::vector<std::uint32_t> in(s.n_vertices, 0), out(s.n_vertices, 0);
    for (const auto& it : s.items) {
        if (it.u >= s.n_vertices || it.v >= s.n_vertices) throw std::invalid_argument("endpoint out of range");
        if (++out[it.u] > 1 || ++in[it.v] > 1) {
            throw std::invalid_argument("oracle shape violation: in- or out-degree ≥ 2");
        }
    }
    // With in/out-degree at most one, a component is a directed cycle exactly
    // when it has as many edges as vertices.
    std::size_t cycles = 0;
    for (const auto& c : low_degree_components(s)) cycles += c.is_cycle();
    return Rational(s.items.size() - cycles);
}

Rational exact_mst(const EdgeStream& s) {
    std::vector<std::size_t> order(s.items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.items[a].w < s.items[b].w; });
    Dsu d(s.n_vertices);
    Rational total = 0;
    for (auto i : order) {
        const auto& it = s.items[i];
        if (it.u >= s.n_vertices || it.v >= s.n_vertices) throw std::invalid_argument("endpoint out of range");
        if (d.unite(it.u, it.v)) total += Rational(it.w);
    }
    return total;
}

Rational exact_connectivity(const EdgeStream& s) {
    Dsu d(s.n_vertices);
    std::size_t comps = s.n_vertices;
    for (const auto& it : s.items) {
        if (it.u >= s.n_vertices || it.v >= s.n_vertices) throw std::invalid_argument("endpoint out of range");
        comps -= d.unite(it.u, it.v);
    }
    return Rational(comps);
}

Rational exact_odd_cycles(const EdgeStream& s) {
    std::size_t odd = 0;
    for (const auto& c : low_degree_components(s)) odd += c.is_cycle() && c.vertices % 2 == 1;
    return Rational(odd);
}

Rational exact_cyclomatic(const EdgeStream& s) {
    return Rational(s.items.size()) - Rational(s.n_vertices) + exact_connectivity(s);
}

double exact_schatten(const EdgeStream& s, double q) {
    std::vector<std::size_t> lengths;
    for (const auto& c : low_degree_components(s)) {
        if (c.vertices == 1 && c.edges == 0) continue;
        if (!c.is_cycle()) throw std::invalid_argument("exact_schatten: components must be cycles");
        lengths.push_back(c.vertices);
    }
    return schatten_of_cycles(lengths, q);
}

std::string to_string(GapStatus s) {
    switch (s) {
    case GapStatus::pass: return "pass";
    case GapStatus::fail: return "fail";
    case GapStatus::probabilistic_pass: return "probabilistic-pass";
    }
    return "?";
}

GapVerdict verify_gap(const ProblemInstance& pi) {
    GapVerdict v;
    if (pi.stream.items.size() != pi.expected_items || pi.stream.n_vertices != pi.expected_vertices) {
        v.detail = "stream has " + std::to_string(pi.stream.items.size()) + " items on " +
                   std::to_string(pi.stream.n_vertices) + " vertices; construction gives " +
                   std::to_string(pi.expected_items) + " on " + std::to_string(pi.expected_vertices);
        return v;
    }
    try {
        if (pi.optimum.kind == AnalyticOptimum::Kind::real) {
            double value = exact_schatten(pi.stream, pi.params.q);
            v.oracle_value = std::to_string(value);
            bool close = std::abs(value - pi.optimum.value) <= 1e-9 * std::max(1.0, std::abs(pi.optimum.value));
            bool label_ok = pi.gap.decide(value) == pi.label;
            v.status = close && label_ok ? GapStatus::pass : GapStatus::fail;
            v.detail = close ? (label_ok ? "matches closed form" : "gap predicate disagrees with label")
                             : "oracle differs from closed form";
            return v;
        }
        Rational value;
        switch (pi.problem) {
        case Problem::maxcut: value = exact_maxcut_cycles(pi.stream); break;
        case Problem::matching: value = exact_matching_cycles(pi.stream); break;
        case Problem::mas: value = exact_mas(pi.stream); break;
        case Problem::mst: value = exact_mst(pi.stream); break;
        case Problem::pt_connectivity: value = exact_connectivity(pi.stream); break;
        case Problem::pt_bipartite: value = exact_odd_cycles(pi.stream); break;
        case Problem::pt_cyclefree: value = exact_cyclomatic(pi.stream); break;
        case Problem::rank: value = Rational(static_cast<long long>(std::llround(exact_schatten(pi.stream, 0.0)))); break;
        case Problem::schatten: throw std::logic_error("schatten optimum must be real-valued");
        }
        v.oracle_value = rational_string(value);
        const auto& opt = pi.optimum;
        const bool inside = value >= opt.lo && value <= opt.hi;
        const bool label_ok = pi.gap.decide(value) == pi.label;
        if (inside && label_ok) {
            v.status = GapStatus::pass;
            v.detail = "oracle inside analytic optimum";
        } else if (opt.kind == AnalyticOptimum::Kind::interval && value >= opt.feasible_lo &&
                   value <= opt.feasible_hi) {
            v.status = GapStatus::probabilistic_pass;
            v.detail = "oracle outside the guaranteed interval: construction's failure event";
        } else {
            v.detail = "oracle " + v.oracle_value + " outside [" + rational_string(opt.lo) + ", " +
                       rational_string(opt.hi) + "]";
        }
    } catch (const std::invalid_argument& e) {
        v.status = GapStatus::fail;
        v.detail = e.what();
    }
    return v;
}

} // namespace cyclegap
