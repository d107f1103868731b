#include "invnet/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "invnet/error.hpp"

namespace invnet {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t SeededRng::next_u64() { return engine_(); }

double SeededRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SeededRng::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t SeededRng::below(std::size_t n) {
    if (n == 0) throw InputError("SeededRng::below: empty range");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

SeededRng SeededRng::child(std::string_view label) const {
    return SeededRng(splitmix64(seed_ ^ fnv1a64(label)));
}

std::vector<std::size_t> SeededRng::permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(idx));
    return idx;
}

}  // namespace invnet
