#include "cyclegap/rng.hpp"

#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace cyclegap {

namespace {

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
    : seed_(seed), stream_(stream) {
    std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream),
                      lo32(substream), hi32(substream)};
    engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: bound must be positive");
    }
    // Lemire's multiply-shift with rejection of the biased low region.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        if (static_cast<std::uint64_t>(m) >= threshold) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

double Rng::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> random_permutation(std::uint32_t n, Rng& rng) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    shuffle(p, rng);
    return p;
}

std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k, Rng& rng) {
    if (k > n) {
        throw std::invalid_argument("sample_without_replacement: k > n");
    }
    // Partial Fisher-Yates over a sparse view of the identity array.
    std::unordered_map<std::uint32_t, std::uint32_t> moved;
    auto at = [&](std::uint32_t i) {
        auto it = moved.find(i);
        return it == moved.end() ? i : it->second;
    };
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
        std::uint32_t vi = at(i);
        std::uint32_t vj = at(j);
        out.push_back(vj);
        moved[j] = vi;
        moved[i] = vj;
    }
    return out;
}

} // namespace cyclegap
