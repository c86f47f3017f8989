#include "cyclegap/protocols.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <omp.h>
#include <sstream>
#include <stdexcept>

namespace cyclegap {

std::string to_string(Exec e) { return e == Exec::serial ? "serial" : "openmp"; }

int max_threads() { return omp_get_max_threads(); }

void BitString::append(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) bits_.push_back(((value >> (width - 1 - i)) & 1U) != 0);
}

std::uint64_t BitString::read(std::size_t& cursor, unsigned width) const {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
        if (cursor >= bits_.size()) throw std::out_of_range("BitString: read past end of message");
        v = (v << 1) | (bits_[cursor++] ? 1U : 0U);
    }
    return v;
}

void Transcript::send(Speaker who, BitString bits) {
    if (!rounds_.empty() && rounds_.back().speaker == who) {
        throw std::logic_error("Transcript: speakers must alternate");
    }
    total_bits_ += bits.size();
    rounds_.push_back({who, std::move(bits)});
}

std::string to_string(ProtocolKind p) {
    switch (p) {
    case ProtocolKind::sampling: return "sampling";
    case ProtocolKind::pointer_chasing: return "pointer-chasing";
    case ProtocolKind::sample_then_chase: return "sample-then-chase";
    case ProtocolKind::random_guess: return "random-guess";
    }
    return "?";
}

ProtocolKind parse_protocol(const std::string& s) {
    if (s == "sampling") return ProtocolKind::sampling;
    if (s == "pointer-chasing" || s == "chase") return ProtocolKind::pointer_chasing;
    if (s == "sample-then-chase" || s == "hybrid") return ProtocolKind::sample_then_chase;
    if (s == "random-guess" || s == "guess") return ProtocolKind::random_guess;
    throw std::invalid_argument("unknown protocol '" + s + "'");
}

unsigned id_bits(std::uint32_t n) {
    unsigned b = 0;
    while ((std::uint64_t{1} << b) < n) ++b;
    return b;
}

namespace {

unsigned length_bits(std::uint32_t k) { return id_bits(k + 1); }

std::uint32_t half_of(const Party& p) { return p.n() / 2; }

// Alice encodes her sampled edges as (left id, right id) pairs.
void encode_sample(const Party& alice, const std::vector<Index>& lefts, BitString& msg) {
    const unsigned b = id_bits(alice.n());
    for (auto l : lefts) {
        msg.append(l, b);
        msg.append(half_of(alice) + *alice.own().image(l), b);
    }
}

std::map<Index, Index> decode_sample(const Party& reader, const BitString& msg, std::size_t& cursor,
                                     std::uint32_t q) {
    const unsigned b = id_bits(reader.n());
    std::map<Index, Index> known;
    for (std::uint32_t i = 0; i < q; ++i) {
        auto l = static_cast<Index>(msg.read(cursor, b));
        auto r = static_cast<Index>(msg.read(cursor, b) - half_of(reader));
        known[l] = r;
    }
    return known;
}

// Does Bob's matching plus the known Alice edges close a cycle of exactly k vertices?
bool bob_sees_k_cycle(const Party& bob, const std::map<Index, Index>& known) {
    const std::uint32_t steps = bob.k() / 2;
    for (auto [start, r0] : known) {
        Index l = start, r = r0;
        for (std::uint32_t s = 1;; ++s) {
            l = *bob.own().preimage(r);
            if (l == start) {
                if (s == steps) return true;
                break;
            }
            auto it = known.find(l);
            if (it == known.end() || s >= steps) break;
            r = it->second;
        }
    }
    return false;
}

struct Walk {
    Index start = 0;        // left index
    std::uint32_t at = 0;   // global vertex id
    std::uint32_t steps = 0;
};

enum class WalkEvent { none, closed_at_k, open_at_k };

// Extend one walk through every edge the party knows.
WalkEvent advance(Walk& w, const Party& p, const std::map<Index, Index>* sampled) {
    const std::uint32_t h = half_of(p), k = p.k();
    for (;;) {
        if (w.steps > 0 && w.at == w.start) return w.steps == k ? WalkEvent::closed_at_k : WalkEvent::none;
        if (w.steps >= k) return WalkEvent::open_at_k;
        if (w.at < h) {
            // Left endpoint: next edge is Alice's.
            if (p.side() == Speaker::alice) {
                w.at = h + *p.own().image(w.at);
            } else if (sampled) {
                auto it = sampled->find(w.at);
                if (it == sampled->end()) return WalkEvent::none;
                w.at = h + it->second;
            } else {
                return WalkEvent::none;
            }
        } else {
            if (p.side() != Speaker::bob) return WalkEvent::none;
            w.at = *p.own().preimage(w.at - h);
        }
        ++w.steps;
    }
}

void encode_walks(const std::vector<Walk>& walks, std::uint32_t n, std::uint32_t k, BitString& msg) {
    for (const auto& w : walks) {
        msg.append(w.at, id_bits(n));
        msg.append(w.steps, length_bits(k));
    }
}

void decode_walks(std::vector<Walk>& walks, std::uint32_t n, std::uint32_t k, const BitString& msg,
                  std::size_t& cursor) {
    for (auto& w : walks) {
        w.at = static_cast<std::uint32_t>(msg.read(cursor, id_bits(n)));
        w.steps = static_cast<std::uint32_t>(msg.read(cursor, length_bits(k)));
    }
}

} // namespace

ProtocolOutcome sampling_protocol(std::uint32_t q, const Party& alice, const Party& bob, Rng& rng) {
    if (q > half_of(alice)) throw std::invalid_argument("q ≤ n/2 violated");
    ProtocolOutcome out;
    BitString msg;
    encode_sample(alice, sample_without_replacement(half_of(alice), q, rng), msg);
    out.transcript.send(Speaker::alice, msg);

    std::size_t cursor = 0;
    auto known = decode_sample(bob, out.transcript.rounds().back().bits, cursor, q);
    out.answer = bob_sees_k_cycle(bob, known) ? Label::no : Label::yes;
    return out;
}

ProtocolOutcome pointer_chasing(const Party& alice, const Party& bob) {
    ProtocolOutcome out;
    const std::uint32_t n = alice.n(), h = half_of(alice), k = alice.k();
    const unsigned b = id_bits(n);
    std::uint32_t at = 0; // left vertex 0
    for (std::uint32_t round = 0; round < k; ++round) {
        const Party& speaker = round % 2 == 0 ? alice : bob;
        if (speaker.side() == Speaker::alice) {
            at = h + *speaker.own().image(at);
        } else {
            at = *speaker.own().preimage(at - h);
        }
        BitString msg;
        msg.append(at, b);
        out.transcript.send(speaker.side(), msg);
        std::size_t cursor = 0;
        at = static_cast<std::uint32_t>(out.transcript.rounds().back().bits.read(cursor, b));
    }
    out.answer = at == 0 ? Label::no : Label::yes;
    return out;
}

ProtocolOutcome sample_then_chase(std::uint32_t q, std::uint32_t r, std::uint32_t w, const Party& alice,
                                  const Party& bob, Rng& rng) {
    if (r < 2) throw std::invalid_argument("r ≥ 2 violated");
    const std::uint32_t n = alice.n(), h = half_of(alice), k = alice.k();
    if (q > h) throw std::invalid_argument("q ≤ n/2 violated");
    if (w < 1 || w > h) throw std::invalid_argument("1 ≤ w ≤ n/2 violated");
    ProtocolOutcome out;

    // Public randomness: walk starts. Private: Alice's sample.
    auto starts = sample_without_replacement(h, w, rng);
    std::vector<Walk> walks(w);
    for (std::uint32_t i = 0; i < w; ++i) walks[i] = {starts[i], starts[i], 0};

    BitString first;
    encode_sample(alice, sample_without_replacement(h, q, rng), first);
    for (auto& wk : walks) advance(wk, alice, nullptr);
    encode_walks(walks, n, k, first);
    out.transcript.send(Speaker::alice, first);

    std::size_t cursor = 0;
    auto sampled = decode_sample(bob, out.transcript.rounds().back().bits, cursor, q);
    decode_walks(walks, n, k, out.transcript.rounds().back().bits, cursor);
    if (bob_sees_k_cycle(bob, sampled)) {
        out.answer = Label::no;
        return out;
    }

    const Party* receiver = &bob;
    for (std::uint32_t round = 1;; ++round) {
        const auto* known = receiver->side() == Speaker::bob ? &sampled : nullptr;
        bool open_at_k = false;
        for (auto& wk : walks) {
            auto ev = advance(wk, *receiver, known);
            if (ev == WalkEvent::closed_at_k) {
                out.answer = Label::no;
                return out;
            }
            open_at_k = open_at_k || ev == WalkEvent::open_at_k;
        }
        if (open_at_k || round == r) {
            out.answer = Label::yes;
            return out;
        }
        BitString msg;
        encode_walks(walks, n, k, msg);
        out.transcript.send(receiver->side(), msg);
        receiver = receiver->side() == Speaker::bob ? &alice : &bob;
        cursor = 0;
        decode_walks(walks, n, k, out.transcript.rounds().back().bits, cursor);
    }
}

ProtocolOutcome random_guess(const Party&, const Party&, Rng& rng) {
    ProtocolOutcome out;
    out.answer = rng.coin() ? Label::yes : Label::no;
    return out;
}

ProtocolOutcome run_protocol(const ProtocolSpec& spec, const OmcInstance& inst, Rng& rng) {
    Party alice(Speaker::alice, inst.alice, inst.n, inst.k);
    Party bob(Speaker::bob, inst.bob, inst.n, inst.k);
    switch (spec.kind) {
    case ProtocolKind::sampling: return sampling_protocol(spec.q, alice, bob, rng);
    case ProtocolKind::pointer_chasing: return pointer_chasing(alice, bob);
    case ProtocolKind::sample_then_chase: return sample_then_chase(spec.q, spec.r, spec.w, alice, bob, rng);
    case ProtocolKind::random_guess: return random_guess(alice, bob, rng);
    }
    throw std::invalid_argument("unknown protocol");
}

WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double denom = 1.0 + z * z / nt;
    const double center = (p + z * z / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct TrialResult {
    bool success = false;
    bool false_no = false;
    std::size_t bits = 0;
    std::size_t rounds = 0;
};

} // namespace

ProtocolStats estimate_success(const ProtocolSpec& spec, const EstimateConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("trials ≥ 1 violated");
    auto results = map_indices(
        config.trials,
        [&](std::size_t t) {
            Rng rng(config.seed, config.stream, t);
            Label label = rng.coin() ? Label::yes : Label::no;
            OmcInstance inst = config.source == InstanceSource::planted
                                   ? build_planted_omc(config.n, config.k, label, rng)
                                   : build_omc(config.n, config.k, config.rounds_for_fmt, label, rng);
            inst = shuffle_vertices(inst, rng);
            auto outcome = run_protocol(spec, inst, rng);
            TrialResult tr;
            tr.success = outcome.answer == label;
            tr.false_no = label == Label::yes && outcome.answer == Label::no;
            tr.bits = outcome.transcript.total_bits();
            tr.rounds = outcome.transcript.round_count();
            return tr;
        },
        config.exec);

    ProtocolStats s;
    s.trials = config.trials;
    double bits = 0.0;
    for (const auto& r : results) {
        s.successes += r.success;
        s.false_no += r.false_no;
        bits += static_cast<double>(r.bits);
        s.max_bits = std::max(s.max_bits, r.bits);
        s.max_rounds = std::max(s.max_rounds, r.rounds);
    }
    s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.mean_bits = bits / static_cast<double>(s.trials);
    auto ci = wilson95(s.successes, s.trials);
    s.ci_lo = ci.lo;
    s.ci_hi = ci.hi;
    return s;
}

std::vector<SweepPoint> tradeoff_sweep(ProtocolKind kind, const std::vector<std::uint32_t>& q_grid,
                                       const std::vector<std::uint32_t>& r_grid, std::uint32_t w,
                                       const EstimateConfig& config) {
    std::vector<SweepPoint> out;
    std::vector<std::uint32_t> rs = r_grid;
    if (kind != ProtocolKind::sample_then_chase || rs.empty()) rs = {kind == ProtocolKind::sample_then_chase ? 2u : 1u};
    std::vector<std::uint32_t> qs = q_grid.empty() ? std::vector<std::uint32_t>{0} : q_grid;
    for (auto q : qs) {
        for (auto r : rs) {
            ProtocolSpec spec{kind, q, r, w};
            out.push_back({spec, estimate_success(spec, config)});
        }
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points, std::uint32_t n, std::uint32_t k) {
    std::ostringstream os;
    os << "n,k,protocol,q,r,rounds,bits,success,ci_lo,ci_hi\n";
    os << std::setprecision(6) << std::fixed;
    for (const auto& p : points) {
        os << n << ',' << k << ',' << to_string(p.spec.kind) << ',' << p.spec.q << ',' << p.spec.r << ','
           << p.stats.max_rounds << ',' << p.stats.mean_bits << ',' << p.stats.success_rate << ','
           << p.stats.ci_lo << ',' << p.stats.ci_hi << '\n';
    }
    return os.str();
}

} // namespace cyclegap
