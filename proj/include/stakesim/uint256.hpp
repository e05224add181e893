// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_UINT256_HPP
#define STAKESIM_UINT256_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <string>

namespace stakesim {

// 256-bit unsigned integer with total ordering and bit-exact serialization.
// Limbs are stored least-significant first; the byte form is little-endian,
// matching how digests are interpreted as numbers throughout.
struct Uint256 {
    std::array<uint64_t, 4> limbs{0, 0, 0, 0};

    constexpr Uint256() = default;
    constexpr explicit Uint256(uint64_t low) : limbs{low, 0, 0, 0} {}

    static Uint256 max();
    static Uint256 from_bytes_le(const uint8_t bytes[32]);
    void to_bytes_le(uint8_t out[32]) const;

    // Hex strings are big-endian (most significant nibble first), the usual
    // display convention for 256-bit values.
    static Uint256 from_hex(const std::string& hex);
    std::string to_hex() const;

    bool is_zero() const { return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0; }
    uint64_t low64() const { return limbs[0]; }

    friend std::strong_ordering operator<=>(const Uint256& a, const Uint256& b) {
        for (int i = 3; i >= 0; --i) {
            if (a.limbs[i] != b.limbs[i])
                return a.limbs[i] < b.limbs[i] ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Uint256& a, const Uint256& b) { return a.limbs == b.limbs; }
};

using Hash256 = Uint256;

struct Uint256Hasher {
    size_t operator()(const Uint256& v) const noexcept {
        // Digest limbs are already uniform; fold them.
        return static_cast<size_t>(v.limbs[0] ^ (v.limbs[1] * 0x9e3779b97f4a7c15ULL) ^
                                   (v.limbs[2] << 1) ^ (v.limbs[3] >> 1));
    }
};

// v * m, saturating to the 256-bit maximum on overflow.
inline Uint256 mul_u64_saturating(const Uint256& v, uint64_t m)
{
    Uint256 out;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(v.limbs[i]) * m + carry;
        out.limbs[i] = static_cast<uint64_t>(prod);
        carry = prod >> 64;
    }
    return carry != 0 ? Uint256::max() : out;
}

} // namespace stakesim

#endif // STAKESIM_UINT256_HPP
