#pragma once

#include <cstdint>
#include <random>

namespace termfit {

/// Deterministic random stream. The draw-to-double mappings below are part
/// of the reproducibility contract and must not change:
///   uniform():       (mt19937_64() >> 11) * 2^-53, i.e. 53-bit doubles in [0,1)
///   normal():        Box-Muller from exactly two uniform() draws, no caching
///   uniform_index(): floor(uniform() * n)
/// Identical seeds therefore yield identical sequences on every platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed), seed_(seed) {}

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform_in(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    double normal();

    std::size_t uniform_index(std::size_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64 gen_;
    std::uint64_t seed_;
};

/// Derives the seed for run `index` of a multistart from the master seed
/// (SplitMix64 finalizer over master + (index+1)*golden-gamma). Documented
/// so individual runs can be reproduced in isolation.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace termfit
