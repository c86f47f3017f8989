#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/rng.hpp"

namespace cyclegap {

/// FMT labels Y/N map onto OMC labels Yes/No.
enum class Label { yes, no };

std::string to_string(Label l);
Label parse_label(const std::string& s);

enum class Owner { alice, bob };

struct OwnedEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    Owner owner = Owner::alice;
    bool operator==(const OwnedEdge&) const = default;
};

struct FmtInstance {
    std::uint32_t m = 0;
    std::size_t c = 0;
    std::uint32_t r = 0;
    LayeredGraph graph;
    Label label = Label::yes;
    PartialMatching y_perm;
    PartialMatching n_perm;

    const PartialMatching& target() const { return label == Label::yes ? y_perm : n_perm; }
};

/// Alice and Bob each hold a perfect matching from the left side [n/2] to the
/// right side [n/2]. Global vertex ids: left i is i, right j is n/2 + j.
struct OmcInstance {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    Label label = Label::yes;
    PartialMatching alice;
    PartialMatching bob;
    /// Cycle profile the construction guarantees, sorted.
    std::vector<std::size_t> expected_profile;
    std::map<std::string, std::string> metadata;

    std::uint32_t half() const { return n / 2; }
    std::uint32_t left_id(Index i) const { return i; }
    std::uint32_t right_id(Index j) const { return n / 2 + j; }
    /// Alice's edges by left index, then Bob's, as global ids (left, right).
    std::vector<OwnedEdge> edges() const;
};

FmtInstance build_fmt(std::uint32_t m, std::size_t c, std::uint32_t r, Label label, Rng& rng,
                      std::optional<std::vector<Index>> y = std::nullopt,
                      std::optional<std::vector<Index>> n = std::nullopt);

struct OmcOptions {
    /// Refuse to compress a block graph that does not fit k/4 layers.
    bool strict = false;
};

/// Two-copy ring wiring of a padded FMT instance into an OMC instance.
OmcInstance fmt_to_omc(const FmtInstance& inst, std::uint32_t n, std::uint32_t k,
                       const OmcOptions& options = {});

/// Largest c with (2c)^r < k'/4 (k' = k rounded down to a multiple of 4), or
/// nullopt if even c = 1 does not fit.
std::optional<std::size_t> max_feasible_c(std::uint32_t k, std::uint32_t r);

enum class OmcSource { fmt, planted };

struct OmcBuildOptions {
    std::optional<std::size_t> c;
    bool strict = false;
    OmcSource source = OmcSource::fmt;
};

OmcInstance build_omc(std::uint32_t n, std::uint32_t k, std::uint32_t r, Label label, Rng& rng,
                      const OmcBuildOptions& options = {});

/// Uniform Hamiltonian cycle (Yes) or uniform union of n/k disjoint k-cycles
/// (No) on the n-vertex bipartition, alternating Alice/Bob edges.
OmcInstance build_planted_omc(std::uint32_t n, std::uint32_t k, Label label, Rng& rng);

/// Yes: n/(2k) cycles of length 2k. No: n/k cycles of length k.
OmcInstance build_k_vs_2k(std::uint32_t n, std::uint32_t k, Label label, Rng& rng,
                          const OmcOptions& options = {});

OmcInstance relabel(const OmcInstance& inst, const std::vector<Index>& left_perm,
                    const std::vector<Index>& right_perm);
OmcInstance shuffle_vertices(const OmcInstance& inst, Rng& rng);

std::vector<std::size_t> omc_profile(const OmcInstance& inst);

struct StretchedGraph {
    std::uint32_t n_vertices = 0;
    std::vector<OwnedEdge> edges;
    std::uint32_t stretched = 0;
    std::vector<std::size_t> cycle_lengths;
    std::size_t odd_cycles = 0;
    /// The >= n/(10k) odd-cycle guarantee is only claimed for n/k >= 500.
    bool guarantee_applies = false;
};

/// Subdivide n/k uniformly chosen edges through fresh vertices n, n+1, ...
StretchedGraph stretch_odd(const OmcInstance& inst, Rng& rng);

/// Sorted cycle lengths of a 2-regular multigraph.
std::vector<std::size_t> two_regular_cycle_lengths(std::uint32_t n_vertices,
                                                   const std::vector<OwnedEdge>& edges);

} // namespace cyclegap
