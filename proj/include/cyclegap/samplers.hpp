#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclegap/core_graph.hpp"
#include "cyclegap/rng.hpp"

namespace cyclegap {

enum class SampleStrategy { constructive, rejection };

std::string to_string(SampleStrategy s);

struct SampleReport {
    std::uint64_t draws = 0;
    std::uint64_t rejections = 0;
    SampleStrategy strategy = SampleStrategy::constructive;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Enumeration cap: CYCLEGAP_BUDGET if set, else 10^7.
std::uint64_t enumeration_budget();

/// Uniform over matchings of size min(a, b) between [a] and [b].
PartialMatching sample_uniform_matching(Index a, Index b, Rng& rng);

/// Uniform over nice T-layered graphs.
///
/// The constructive path builds gaps left to right. At each step the set of
/// vertices of V_{j-1} reachable from V_i forms a chain R_0 ⊆ ... ⊆ R_{j-1};
/// the next matching's domain must contain every R_i no larger than t_j and
/// sit inside every R_i at least as large, and is chosen uniformly among such
/// sets before a uniform injection into V_j. Any two valid prefixes have the
/// same number of nice completions (they differ by a relabeling of the last
/// layer), so the result is exactly uniform.
std::pair<LayeredGraph, SampleReport> sample_nice_layered(
    const LayerSequence& t, Rng& rng, SampleStrategy strategy = SampleStrategy::constructive,
    std::uint64_t max_draws = 10'000'000);

LayeredGraph sample_nested_block(std::size_t c, const LayerSequence& s, Rng& rng);

/// Uniform over nice T-layered graphs whose final matching G_{0->k} equals z.
/// A uniform nice graph is drawn and its end layers are relabeled by a
/// uniformly chosen pair of permutations carrying its final matching onto z.
LayeredGraph sample_conditioned(const LayerSequence& t, const PartialMatching& z, Rng& rng);
LayeredGraph sample_conditioned(std::size_t c, const LayerSequence& s, const PartialMatching& z,
                                Rng& rng);

/// All nice T-layered graphs in canonical order (lexicographic by gap).
std::vector<LayeredGraph> enumerate_nice(const LayerSequence& t,
                                         std::uint64_t budget = enumeration_budget());
std::vector<LayeredGraph> enumerate_conditioned(const LayerSequence& t, const PartialMatching& z,
                                                std::uint64_t budget = enumeration_budget());
std::vector<LayeredGraph> enumerate_conditioned(std::size_t c, const LayerSequence& s,
                                                const PartialMatching& z,
                                                std::uint64_t budget = enumeration_budget());

/// All matchings of size min(a, b) between [a] and [b], in canonical order.
std::vector<PartialMatching> enumerate_matchings(Index a, Index b);

} // namespace cyclegap
