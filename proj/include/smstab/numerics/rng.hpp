#pragma once

#include <cmath>
#include <cstdint>

namespace smstab::num {

// splitmix64: tiny deterministic generator; identical streams on every platform,
// which keeps seeded reports byte-reproducible
class splitmix64 {
public:
    explicit splitmix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // multiplicative factor spanning [10^-decades, 10^+decades]
    double log_factor(double decades) { return std::pow(10.0, uniform(-decades, decades)); }

private:
    std::uint64_t state_;
};

}  // namespace smstab::num
