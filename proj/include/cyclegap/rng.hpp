#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace cyclegap {

// Deterministic generator keyed by (seed, stream, substream).
// Engine is std::mt19937_64, whose output sequence is fixed by the standard;
// the seeding goes through std::seed_seq, which is also fully specified.
// Everything derived from raw draws (bounded ints, shuffles, reals) is done
// here rather than with <random> distributions, which are not portable.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    bool coin() { return (next() >> 63) != 0; }

    /// Independent child generator for trial/substream `sub`.
    Rng child(std::uint64_t sub) const { return Rng(seed_, stream_, sub); }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Stateless 64-bit mixer, used for keyed hashing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(items[i - 1], items[j]);
    }
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    shuffle(std::span<T>(items), rng);
}

/// Uniform permutation of {0, ..., n-1}.
std::vector<std::uint32_t> random_permutation(std::uint32_t n, Rng& rng);

/// k distinct values from {0, ..., n-1}, uniform over k-subsets, in draw order.
std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k, Rng& rng);

} // namespace cyclegap
