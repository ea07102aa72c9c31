#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sybil {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent sub-seed from a base seed and a salt. Used wherever
// one user-facing seed has to drive several samplers (instance, training,
// noise) without correlating their streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// Deterministic RNG. Bounded draws and unit doubles are implemented by hand
// (not via std distributions, whose output is implementation-defined) so that
// a seed pins the byte stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, bound), bound > 0. Mask-and-reject, unbiased.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const int shift = __builtin_clzll(bound - 1);
        const std::uint64_t mask = ~0ULL >> shift;
        for (;;) {
            const std::uint64_t x = gen_() & mask;
            if (x < bound) return x;
        }
    }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // First `count` entries of a uniform random permutation of `items`.
    template <typename T>
    void partial_shuffle(std::vector<T>& items, std::size_t count) {
        const std::size_t n = items.size();
        if (count > n) count = n;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(items[i], items[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace sybil
