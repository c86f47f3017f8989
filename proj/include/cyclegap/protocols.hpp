#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/instances.hpp"
#include "cyclegap/parallel.hpp"
#include "cyclegap/rng.hpp"

namespace cyclegap {

enum class Speaker { alice, bob };

class BitString {
public:
    void append(std::uint64_t value, unsigned width);
    std::uint64_t read(std::size_t& cursor, unsigned width) const;
    std::size_t size() const { return bits_.size(); }

private:
    std::vector<bool> bits_;
};

struct Message {
    Speaker speaker;
    BitString bits;
};

class Transcript {
public:
    /// Speakers must alternate.
    void send(Speaker who, BitString bits);
    const std::vector<Message>& rounds() const { return rounds_; }
    std::size_t round_count() const { return rounds_.size(); }
    std::size_t total_bits() const { return total_bits_; }

private:
    std::vector<Message> rounds_;
    std::size_t total_bits_ = 0;
};

struct ProtocolOutcome {
    Label answer = Label::yes;
    Transcript transcript;
};

/// A party sees only its own matching plus the public parameters.
class Party {
public:
    Party(Speaker side, PartialMatching own, std::uint32_t n, std::uint32_t k)
        : side_(side), own_(std::move(own)), n_(n), k_(k) {}
    Speaker side() const { return side_; }
    const PartialMatching& own() const { return own_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return k_; }

private:
    Speaker side_;
    PartialMatching own_;
    std::uint32_t n_;
    std::uint32_t k_;
};

enum class ProtocolKind { sampling, pointer_chasing, sample_then_chase, random_guess };

std::string to_string(ProtocolKind p);
ProtocolKind parse_protocol(const std::string& s);

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::pointer_chasing;
    std::uint32_t q = 0; // sampled Alice edges
    std::uint32_t r = 2; // round limit (sample_then_chase)
    std::uint32_t w = 1; // tracked walks (sample_then_chase)
};

/// ceil(log2 n) bits per vertex id.
unsigned id_bits(std::uint32_t n);

/// Alice sends q uniformly sampled edges of her matching; Bob answers No iff
/// his matching plus the sample closes a cycle of length exactly k.
ProtocolOutcome sampling_protocol(std::uint32_t q, const Party& alice, const Party& bob, Rng& rng);

/// Walk from left vertex 0, one edge per round, k rounds; No iff the walk
/// closes after exactly k edges.
ProtocolOutcome pointer_chasing(const Party& alice, const Party& bob);

/// Round 1: q sampled edges plus Alice's first step on w public random walks.
/// Later rounds: each speaker extends every open walk through all edges it
/// knows, then sends (endpoint, length) per walk. A walk that closes after k
/// edges proves No; a walk that reaches k edges open proves Yes. Without a
/// decision after r rounds the answer is Yes.
ProtocolOutcome sample_then_chase(std::uint32_t q, std::uint32_t r, std::uint32_t w, const Party& alice,
                                  const Party& bob, Rng& rng);

/// Bob outputs a fair coin; no communication.
ProtocolOutcome random_guess(const Party& alice, const Party& bob, Rng& rng);

ProtocolOutcome run_protocol(const ProtocolSpec& spec, const OmcInstance& inst, Rng& rng);

struct ProtocolStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t false_no = 0; // No answered on a Yes instance
    double success_rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_bits = 0.0;
    std::size_t max_bits = 0;
    std::size_t max_rounds = 0;
};

struct WilsonInterval {
    double lo;
    double hi;
};
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials);

enum class InstanceSource { planted, fmt };

struct EstimateConfig {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    InstanceSource source = InstanceSource::planted;
    std::uint32_t rounds_for_fmt = 1;
    Exec exec = Exec::openmp;
};

/// Fresh instance per trial (fair label, vertices shuffled); trial t uses
/// Rng(seed, stream, t), so serial and parallel runs agree exactly.
ProtocolStats estimate_success(const ProtocolSpec& spec, const EstimateConfig& config);

struct SweepPoint {
    ProtocolSpec spec;
    ProtocolStats stats;
};

std::vector<SweepPoint> tradeoff_sweep(ProtocolKind kind, const std::vector<std::uint32_t>& q_grid,
                                       const std::vector<std::uint32_t>& r_grid, std::uint32_t w,
                                       const EstimateConfig& config);

/// CSV with columns n,k,protocol,q,r,rounds,bits,success,ci_lo,ci_hi.
std::string sweep_csv(const std::vector<SweepPoint>& points, std::uint32_t n, std::uint32_t k);

} // namespace cyclegap
