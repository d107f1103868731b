#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace invnet {

// Deterministic random source.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Distributions are implemented here rather than taken from <random>, whose
// distribution algorithms are implementation-defined:
//   uniform()  -> top 53 bits of one draw scaled by 2^-53, in [0, 1)
//   normal()   -> Box-Muller on two uniforms, one value per call (no caching)
//   below(n)   -> rejection sampling, unbiased
// Child streams are seeded with splitmix64(seed ^ fnv1a64(label)), so a child
// depends only on the parent seed and the label, never on how many draws the
// parent has made.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();
    double uniform();
    double uniform(double lo, double hi);
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    // Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n);

    SeededRng child(std::string_view label) const;

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace invnet
