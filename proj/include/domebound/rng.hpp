#pragma once

#include <cmath>
#include <cstdint>

namespace domebound {

// splitmix64-based generator; output does not depend on the standard
// library's distribution implementations, so randomized checks replay
// bit-identically from a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // uniform integer in [0, n)
    int below(int n) { return static_cast<int>(uniform() * n) % n; }

private:
    std::uint64_t state_;
};

} // namespace domebound
