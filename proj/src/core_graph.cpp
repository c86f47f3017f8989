#include "cyclegap/core_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cyclegap {

LayerSequence::LayerSequence(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_) {
        if (s == 0) {
            throw std::invalid_argument("LayerSequence: layer sizes must be >= 1");
        }
    }
}

bool LayerSequence::strictly_increasing() const {
    for (std::size_t i = 1; i < sizes_.size(); ++i) {
        if (sizes_[i] <= sizes_[i - 1]) return false;
    }
    return true;
}

std::uint64_t LayerSequence::total() const {
    std::uint64_t t = 0;
    for (auto s : sizes_) t += s;
    return t;
}

std::uint32_t LayerSequence::min_over(std::size_t i, std::size_t j) const {
    return *std::min_element(sizes_.begin() + i, sizes_.begin() + j + 1);
}

// ---------------------------------------------------------------------------

PartialMatching::PartialMatching(Index left_size, Index right_size)
    : left_size_(left_size), forward_(left_size), backward_(right_size) {}

PartialMatching PartialMatching::from_pairs(Index left_size, Index right_size,
                                            const std::vector<std::pair<Index, Index>>& pairs) {
    PartialMatching m(left_size, right_size);
    for (auto [l, r] : pairs) m.add(l, r);
    return m;
}

PartialMatching PartialMatching::identity(Index n) {
    PartialMatching m(n, n);
    for (Index i = 0; i < n; ++i) m.add(i, i);
    return m;
}

PartialMatching PartialMatching::from_permutation(const std::vector<Index>& perm) {
    auto n = static_cast<Index>(perm.size());
    PartialMatching m(n, n);
    for (Index i = 0; i < n; ++i) m.add(i, perm[i]);
    return m;
}

bool PartialMatching::is_maximum() const {
    return count_ == std::min<std::size_t>(left_size_, right_size());
}

std::optional<Index> PartialMatching::image(Index left) const {
    if (left >= left_size_) throw std::out_of_range("PartialMatching::image");
    return forward_[left];
}

std::optional<Index> PartialMatching::preimage(Index right) const {
    if (right >= right_size()) throw std::out_of_range("PartialMatching::preimage");
    return backward_[right];
}

void PartialMatching::add(Index left, Index right) {
    if (left >= left_size_ || right >= right_size()) {
        throw std::invalid_argument("PartialMatching: pair (" + std::to_string(left) + "," +
                                    std::to_string(right) + ") out of range");
    }
    if (forward_[left] || backward_[right]) {
        throw std::invalid_argument("PartialMatching: vertex matched twice at pair (" +
                                    std::to_string(left) + "," + std::to_string(right) + ")");
    }
    forward_[left] = right;
    backward_[right] = left;
    ++count_;
}

std::vector<std::pair<Index, Index>> PartialMatching::pairs() const {
    std::vector<std::pair<Index, Index>> out;
    out.reserve(count_);
    for (Index l = 0; l < left_size_; ++l) {
        if (forward_[l]) out.emplace_back(l, *forward_[l]);
    }
    return out;
}

PartialMatching PartialMatching::inverse() const {
    PartialMatching m(right_size(), left_size_);
    for (Index l = 0; l < left_size_; ++l) {
        if (forward_[l]) m.add(*forward_[l], l);
    }
    return m;
}

PartialMatching PartialMatching::then(const PartialMatching& next) const {
    if (right_size() != next.left_size()) {
        throw std::invalid_argument("PartialMatching::then: dimension mismatch");
    }
    PartialMatching m(left_size_, next.right_size());
    for (Index l = 0; l < left_size_; ++l) {
        if (!forward_[l]) continue;
        if (auto r = next.forward_[*forward_[l]]) m.add(l, *r);
    }
    return m;
}

bool PartialMatching::operator==(const PartialMatching& other) const {
    return left_size_ == other.left_size_ && forward_ == other.forward_ &&
           backward_.size() == other.backward_.size();
}

// ---------------------------------------------------------------------------

LayeredGraph::LayeredGraph(LayerSequence seq, std::vector<PartialMatching> matchings)
    : seq_(std::move(seq)), matchings_(std::move(matchings)) {
    if (seq_.empty()) throw std::invalid_argument("LayeredGraph: empty layer sequence");
    if (matchings_.size() != seq_.gaps()) {
        throw std::invalid_argument("LayeredGraph: need one matching per gap");
    }
    for (std::size_t i = 0; i < matchings_.size(); ++i) {
        const auto& m = matchings_[i];
        if (m.left_size() != seq_[i] || m.right_size() != seq_[i + 1]) {
            throw std::invalid_argument("LayeredGraph: gap " + std::to_string(i + 1) +
                                        " has wrong dimensions");
        }
        if (!m.is_maximum()) {
            throw std::invalid_argument("LayeredGraph: gap " + std::to_string(i + 1) +
                                        " matching is not of size min(t_{i-1}, t_i)");
        }
    }
    offsets_.resize(seq_.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < seq_.size(); ++i) {
        offsets_[i] = acc;
        acc += seq_[i];
    }
}

std::uint64_t LayeredGraph::vertex_id(std::size_t layer, Index index) const {
    if (layer >= seq_.size() || index >= seq_[layer]) {
        throw std::out_of_range("LayeredGraph::vertex_id");
    }
    return offsets_[layer] + index;
}

// ---------------------------------------------------------------------------

LayerSequence plug(const LayerSequence& t, std::size_t count, std::uint32_t s) {
    if (t.empty()) throw std::invalid_argument("plug: empty sequence");
    if (s == 0) throw std::invalid_argument("plug: s must be >= 1");
    std::vector<std::uint32_t> out;
    out.reserve(t.size() + count * t.gaps());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) out.insert(out.end(), count, s);
        out.push_back(t[i]);
    }
    return LayerSequence(std::move(out));
}

LayerSequence nest(std::size_t c, const LayerSequence& s) {
    if (c == 0) throw std::invalid_argument("nest: c must be >= 1");
    if (s.empty()) throw std::invalid_argument("nest: S must be nonempty");
    if (!s.strictly_increasing()) throw std::invalid_argument("nest: S must be strictly increasing");
    LayerSequence out({s[0], s[0]});
    for (std::size_t i = 1; i < s.size(); ++i) {
        out = plug(out, 2 * c - 1, s[i]);
    }
    return out;
}

LayerSequence nest_variant(Side side, std::uint32_t s, std::size_t c, const LayerSequence& seq) {
    if (seq.empty()) throw std::invalid_argument("nest_variant: S must be nonempty");
    if (s < 1 || s > seq[0]) {
        throw std::invalid_argument("nest_variant: 1 <= s <= s_1 violated");
    }
    auto v = nest(c, seq).values();
    if (side == Side::left) {
        v.front() = s;
    } else {
        v.back() = s;
    }
    return LayerSequence(std::move(v));
}

LayerSequence fmt_sequence(std::uint32_t m, std::uint32_t r) {
    if (m < 1 || r < 1) throw std::invalid_argument("fmt_sequence: m >= 1 and r >= 1 required");
    std::vector<std::uint32_t> out;
    out.reserve(r + 1);
    for (std::uint64_t i = 0; i <= r; ++i) {
        out.push_back(static_cast<std::uint32_t>(m + i * m / r));
    }
    return LayerSequence(std::move(out));
}

PartialMatching compose(const LayeredGraph& g, std::size_t i, std::size_t j) {
    if (i >= j) throw std::invalid_argument("compose: requires i < i'");
    if (j > g.gaps()) throw std::invalid_argument("compose: i' exceeds the number of gaps");
    PartialMatching acc = g.matching(i + 1);
    for (std::size_t gap = i + 2; gap <= j; ++gap) acc = acc.then(g.matching(gap));
    return acc;
}

bool is_nice(const LayeredGraph& g) {
    const auto& seq = g.seq();
    std::vector<std::optional<Index>> pos;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        pos.assign(seq[i], std::nullopt);
        for (Index v = 0; v < seq[i]; ++v) pos[v] = v;
        std::uint32_t running_min = seq[i];
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            const auto& m = g.matching(j);
            std::uint32_t alive = 0;
            for (auto& p : pos) {
                if (!p) continue;
                p = m.image(*p);
                if (p) ++alive;
            }
            running_min = std::min(running_min, seq[j]);
            if (alive != running_min) return false;
        }
    }
    return true;
}

std::vector<std::size_t> cycle_decomposition(const PartialMatching& a, const PartialMatching& b) {
    if (!a.is_perfect() || !b.is_perfect()) {
        throw std::invalid_argument("cycle_decomposition: both matchings must be perfect");
    }
    if (a.left_size() != b.left_size() || a.right_size() != b.right_size()) {
        throw std::invalid_argument("cycle_decomposition: matchings on different bipartitions");
    }
    const Index h = a.left_size();
    std::vector<bool> seen(h, false);
    std::vector<std::size_t> lengths;
    for (Index start = 0; start < h; ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        Index v = start;
        do {
            seen[v] = true;
            len += 2;
            v = *b.preimage(*a.image(v));
        } while (v != start);
        lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

// ---------------------------------------------------------------------------

void write_layered(std::ostream& out, const LayeredGraph& g) {
    const auto& seq = g.seq();
    out << "layered " << seq.size() << '\n';
    for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? " " : "") << seq[i];
    out << '\n';
    for (std::size_t gap = 1; gap <= g.gaps(); ++gap) {
        out << "gap " << gap << ':';
        for (auto [l, r] : g.matching(gap).pairs()) out << ' ' << l << '>' << r;
        out << '\n';
    }
}

std::string to_layered_text(const LayeredGraph& g) {
    std::ostringstream os;
    write_layered(os, g);
    return os.str();
}

LayeredGraph read_layered(std::istream& in) {
    std::string word;
    std::size_t layers = 0;
    if (!(in >> word >> layers) || word != "layered" || layers == 0) {
        throw std::invalid_argument("read_layered: expected 'layered <k+1>' header");
    }
    std::vector<std::uint32_t> sizes(layers);
    for (auto& s : sizes) {
        if (!(in >> s)) throw std::invalid_argument("read_layered: truncated size line");
    }
    LayerSequence seq(std::move(sizes));
    std::string line;
    std::getline(in, line);
    std::vector<PartialMatching> ms;
    for (std::size_t gap = 1; gap < layers; ++gap) {
        if (!std::getline(in, line)) throw std::invalid_argument("read_layered: missing gap line");
        std::istringstream ls(line);
        std::string tag;
        ls >> word >> tag;
        if (word != "gap" || tag != std::to_string(gap) + ":") {
            throw std::invalid_argument("read_layered: expected 'gap " + std::to_string(gap) + ":'");
        }
        PartialMatching m(seq[gap - 1], seq[gap]);
        while (ls >> word) {
            auto gt = word.find('>');
            if (gt == std::string::npos) throw std::invalid_argument("read_layered: bad pair " + word);
            m.add(static_cast<Index>(std::stoul(word.substr(0, gt))),
                  static_cast<Index>(std::stoul(word.substr(gt + 1))));
        }
        ms.push_back(std::move(m));
    }
    return LayeredGraph(std::move(seq), std::move(ms));
}

LayeredGraph parse_layered(const std::string& text) {
    std::istringstream is(text);
    return read_layered(is);
}

} // namespace cyclegap
