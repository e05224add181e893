// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/rng.hpp>

#include <cmath>
#include <stdexcept>

namespace stakesim {

namespace {

uint64_t splitmix64(uint64_t& x)
{
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream)
{
    uint64_t x = seed ^ rotl(stream, 32) ^ 0x53746b53696d3256ULL;
    for (auto& limb : s_) limb = splitmix64(x);
    // All-zero state would be a fixed point; splitmix cannot produce four
    // zero outputs from any x, but keep the guarantee explicit.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t Rng::next_u64()
{
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

uint64_t Rng::below(uint64_t n)
{
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

uint64_t Rng::geometric(double p)
{
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Rng::geometric: p outside (0,1]");
    if (p == 1.0) return 1;
    double u = uniform01();
    // 1 - u avoids log(0); support starts at 1.
    double g = std::floor(std::log1p(-u) / std::log1p(-p)) + 1.0;
    if (g < 1.0) g = 1.0;
    if (g > 9.0e18) g = 9.0e18;
    return static_cast<uint64_t>(g);
}

double Rng::normal()
{
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double Rng::lognormal(double median, double sigma)
{
    return median * std::exp(sigma * normal());
}

uint64_t Rng::mix_streams(uint64_t a, uint64_t b)
{
    uint64_t x = a ^ rotl(b, 17) ^ 0x9e3779b97f4a7c15ULL;
    return splitmix64(x);
}

} // namespace stakesim
