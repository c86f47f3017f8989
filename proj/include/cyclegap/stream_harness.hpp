#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cyclegap/edge_stream.hpp"
#include "cyclegap/rational.hpp"
#include "cyclegap/reductions.hpp"

namespace cyclegap {

/// Fixed-width bit packing used for algorithm state snapshots.
class BitBuffer {
public:
    void put(std::uint64_t value, unsigned width);
    std::uint64_t get(unsigned width);
    std::size_t bits() const { return bits_; }
    std::vector<std::uint8_t> bytes() const;
    static BitBuffer from_bytes(std::span<const std::uint8_t> bytes);

private:
    std::vector<std::uint8_t> data_;
    std::size_t bits_ = 0;
    std::size_t cursor_ = 0;
};

/// Number of bits needed to write any value in [0, n).
unsigned bit_width_for(std::uint64_t n);

class StreamAlgorithm {
public:
    virtual ~StreamAlgorithm() = default;
    virtual std::string name() const = 0;
    virtual void init(std::uint32_t n_vertices, std::size_t passes) = 0;
    virtual void process(const StreamItem& item) = 0;
    virtual void end_pass(std::size_t /*pass*/) {}
    /// Return false to stop before the requested number of passes.
    virtual bool wants_another_pass() const { return true; }
    virtual std::int64_t finish() = 0;
    /// Exact size of serialize() output in bits.
    virtual std::size_t state_bits() const = 0;
    virtual std::vector<std::uint8_t> serialize() const = 0;
    /// Restore a snapshot into an algorithm initialised with the same n.
    virtual void restore(std::span<const std::uint8_t> bytes) = 0;
};

struct RunReport {
    bool ok = true;
    std::int64_t answer = 0;
    std::size_t passes = 0;
    std::size_t max_state_bits = 0;
    std::uint64_t items = 0;
    double wall_seconds = 0.0;
    std::string algorithm;
    std::string diagnostics;
};

RunReport run(StreamAlgorithm& algo, const EdgeStream& stream, std::size_t passes);

/// Counts stream items with one 64-bit counter.
class EdgeCounter : public StreamAlgorithm {
public:
    std::string name() const override { return "edge-counter"; }
    void init(std::uint32_t, std::size_t) override { count_ = 0; }
    void process(const StreamItem&) override { ++count_; }
    std::int64_t finish() override { return static_cast<std::int64_t>(count_); }
    std::size_t state_bits() const override { return 64; }
    std::vector<std::uint8_t> serialize() const override;
    void restore(std::span<const std::uint8_t> bytes) override;

private:
    std::uint64_t count_ = 0;
};

/// Union-find over the vertex set; answers the number of connected components.
class UnionFindConnectivity : public StreamAlgorithm {
public:
    std::string name() const override { return "union-find-connectivity"; }
    void init(std::uint32_t n_vertices, std::size_t passes) override;
    void process(const StreamItem& item) override;
    std::int64_t finish() override;
    std::size_t state_bits() const override;
    std::vector<std::uint8_t> serialize() const override;
    void restore(std::span<const std::uint8_t> bytes) override;

protected:
    std::uint32_t find(std::uint32_t x);
    std::vector<std::uint32_t> parent_;
    unsigned width_ = 1;
};

/// Union-find with parity labels; answers the number of components that
/// contain an odd cycle (the odd-cycle count on disjoint cycles).
class ParityUnionFind : public StreamAlgorithm {
public:
    std::string name() const override { return "parity-union-find"; }
    void init(std::uint32_t n_vertices, std::size_t passes) override;
    void process(const StreamItem& item) override;
    std::int64_t finish() override;
    std::size_t state_bits() const override;
    std::vector<std::uint8_t> serialize() const override;
    void restore(std::span<const std::uint8_t> bytes) override;

private:
    std::pair<std::uint32_t, std::uint8_t> find(std::uint32_t x);
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> parity_; // parity of the path to the parent
    std::vector<std::uint8_t> odd_;    // meaningful at roots
    unsigned width_ = 1;
};

/// Keeps a uniform sample of `capacity` items. Coins come from a keyed hash
/// of (seed, item position), so the state is just the counters and samples.
class ReservoirSampler : public StreamAlgorithm {
public:
    ReservoirSampler(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), seed_(seed) {}
    std::string name() const override { return "reservoir-sampler"; }
    void init(std::uint32_t n_vertices, std::size_t passes) override;
    void process(const StreamItem& item) override;
    bool wants_another_pass() const override { return false; }
    /// Number of sampled items.
    std::int64_t finish() override { return static_cast<std::int64_t>(sample_.size()); }
    std::size_t state_bits() const override;
    std::vector<std::uint8_t> serialize() const override;
    void restore(std::span<const std::uint8_t> bytes) override;
    const std::vector<StreamItem>& sample() const { return sample_; }

private:
    std::size_t capacity_;
    std::uint64_t seed_;
    std::uint64_t seen_ = 0;
    std::vector<StreamItem> sample_;
    unsigned width_ = 1;
};

std::unique_ptr<StreamAlgorithm> make_algorithm(const std::string& name, std::uint64_t seed = 0,
                                                std::size_t capacity = 16);

// Exact oracles. The cycle-family oracles require maximum degree 2 and throw
// std::invalid_argument otherwise.
Rational exact_maxcut_cycles(const EdgeStream& s);
Rational exact_maxcut_cycles(const std::vector<std::size_t>& cycle_lengths);
Rational exact_matching_cycles(const EdgeStream& s);
Rational exact_matching_cycles(const std::vector<std::size_t>& cycle_lengths);
Rational exact_mas(const EdgeStream& s);
/// Minimum spanning forest weight (Kruskal), any undirected weighted graph.
Rational exact_mst(const EdgeStream& s);
Rational exact_connectivity(const EdgeStream& s);
/// Minimum deletions to make a max-degree-2 graph bipartite.
Rational exact_odd_cycles(const EdgeStream& s);
/// Minimum deletions to make the graph acyclic: |E| - |V| + #components.
Rational exact_cyclomatic(const EdgeStream& s);
/// Laplacian Schatten-q norm of disjoint cycles (isolated vertices allowed);
/// q = 0 gives the rank.
double exact_schatten(const EdgeStream& s, double q);

enum class GapStatus { pass, fail, probabilistic_pass };
std::string to_string(GapStatus s);

struct GapVerdict {
    GapStatus status = GapStatus::fail;
    std::string oracle_value;
    std::string detail;
};

GapVerdict verify_gap(const ProblemInstance& pi);

} // namespace cyclegap
