#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyclegap {

using Index = std::uint32_t;

/// Positive layer sizes (t_0, ..., t_k).
class LayerSequence {
public:
    LayerSequence() = default;
    explicit LayerSequence(std::vector<std::uint32_t> sizes);
    LayerSequence(std::initializer_list<std::uint32_t> sizes)
        : LayerSequence(std::vector<std::uint32_t>(sizes)) {}

    std::size_t size() const { return sizes_.size(); }
    bool empty() const { return sizes_.empty(); }
    std::uint32_t operator[](std::size_t i) const { return sizes_[i]; }
    std::uint32_t front() const { return sizes_.front(); }
    std::uint32_t back() const { return sizes_.back(); }
    const std::vector<std::uint32_t>& values() const { return sizes_; }
    auto begin() const { return sizes_.begin(); }
    auto end() const { return sizes_.end(); }

    /// Number of gaps (k for a sequence of length k+1).
    std::size_t gaps() const { return sizes_.empty() ? 0 : sizes_.size() - 1; }
    bool strictly_increasing() const;
    std::uint64_t total() const;
    std::uint32_t min_over(std::size_t i, std::size_t j) const;

    bool operator==(const LayerSequence&) const = default;

private:
    std::vector<std::uint32_t> sizes_;
};

/// A matching between [left_size] and [right_size]. Unmatched vertices simply
/// have no pair.
class PartialMatching {
public:
    PartialMatching() = default;
    PartialMatching(Index left_size, Index right_size);

    static PartialMatching from_pairs(Index left_size, Index right_size,
                                      const std::vector<std::pair<Index, Index>>& pairs);
    static PartialMatching identity(Index n);
    /// Perfect matching i -> perm[i].
    static PartialMatching from_permutation(const std::vector<Index>& perm);

    Index left_size() const { return left_size_; }
    Index right_size() const { return static_cast<Index>(backward_.size()); }
    std::size_t size() const { return count_; }
    bool is_perfect() const { return count_ == left_size_ && count_ == right_size(); }
    bool is_maximum() const;

    std::optional<Index> image(Index left) const;
    std::optional<Index> preimage(Index right) const;

    void add(Index left, Index right);

    /// Pairs sorted by left index.
    std::vector<std::pair<Index, Index>> pairs() const;

    PartialMatching inverse() const;
    /// this : A -> B followed by next : B -> C.
    PartialMatching then(const PartialMatching& next) const;

    bool operator==(const PartialMatching& other) const;

private:
    Index left_size_ = 0;
    std::size_t count_ = 0;
    std::vector<std::optional<Index>> forward_;
    std::vector<std::optional<Index>> backward_;
};

/// Layers V_0..V_k with one matching per gap. Gap i (1-based, as in
/// matching(i)) joins V_{i-1} and V_i and has size min(t_{i-1}, t_i).
class LayeredGraph {
public:
    LayeredGraph() = default;
    LayeredGraph(LayerSequence seq, std::vector<PartialMatching> matchings);

    const LayerSequence& seq() const { return seq_; }
    std::size_t gaps() const { return matchings_.size(); }
    const PartialMatching& matching(std::size_t gap) const { return matchings_.at(gap - 1); }
    const std::vector<PartialMatching>& matchings() const { return matchings_; }

    /// Global id of local vertex `index` in layer `layer`.
    std::uint64_t vertex_id(std::size_t layer, Index index) const;
    std::uint64_t vertex_count() const { return seq_.total(); }

    bool operator==(const LayeredGraph&) const = default;

private:
    LayerSequence seq_;
    std::vector<PartialMatching> matchings_;
    std::vector<std::uint64_t> offsets_;
};

LayerSequence plug(const LayerSequence& t, std::size_t count, std::uint32_t s);
LayerSequence nest(std::size_t c, const LayerSequence& s);

enum class Side { left, right };
LayerSequence nest_variant(Side side, std::uint32_t s, std::size_t c, const LayerSequence& seq);

/// (m, m + floor(m/r), m + floor(2m/r), ..., 2m).
LayerSequence fmt_sequence(std::uint32_t m, std::uint32_t r);

/// Forward composition G_{i -> j}, 0 <= i < j <= k.
PartialMatching compose(const LayeredGraph& g, std::size_t i, std::size_t j);

bool is_nice(const LayeredGraph& g);

/// Sorted cycle lengths (in vertices) of the union of two perfect matchings
/// on the same bipartition.
std::vector<std::size_t> cycle_decomposition(const PartialMatching& a, const PartialMatching& b);

void write_layered(std::ostream& out, const LayeredGraph& g);
std::string to_layered_text(const LayeredGraph& g);
LayeredGraph read_layered(std::istream& in);
LayeredGraph parse_layered(const std::string& text);

} // namespace cyclegap
