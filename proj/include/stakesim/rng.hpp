// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_RNG_HPP
#define STAKESIM_RNG_HPP

#include <cstdint>

namespace stakesim {

// Deterministic seeded generator (xoshiro256++ seeded via splitmix64).
// The raw draw sequence for a given (seed, stream) is identical on every
// platform; std::random distributions are never used because their output
// is implementation-defined. An Rng is an owned value and is never shared:
// parallel work derives child streams with distinct stream ids.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(uint64_t seed, uint64_t stream);

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, n).
    uint64_t below(uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    // Number of Bernoulli(p) trials up to and including the first success
    // (inverse-CDF geometric, support {1, 2, ...}).
    uint64_t geometric(double p);

    double normal();                       // standard normal, Box-Muller
    double lognormal(double median, double sigma);

    // Child stream derived from this generator's identity; independent of
    // draw position so derivation order never matters.
    Rng child(uint64_t stream) const { return Rng(seed_, mix_streams(stream_, stream)); }

private:
    static uint64_t mix_streams(uint64_t a, uint64_t b);
    uint64_t seed_;
    uint64_t stream_;
    uint64_t s_[4];
};

} // namespace stakesim

#endif // STAKESIM_RNG_HPP
