#pragma once

#include <cstdint>
#include <random>

namespace cogsa {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Used for seed derivation so
// that child streams are reproducible from a single master seed, independent
// of language or platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Child seed for run `index` of a batch started with `master`.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ull * index);
}

// Deterministic uniform stream. mt19937_64 output is fully specified by the
// standard, and the double conversion below avoids std::uniform_real_distribution,
// whose draw sequence is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform index in {0, ..., n-1}, n >= 1
    std::size_t uniform_index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace cogsa
