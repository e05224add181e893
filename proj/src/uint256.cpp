// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/uint256.hpp>

#include <stdexcept>

namespace stakesim {

Uint256 Uint256::max()
{
    Uint256 v;
    v.limbs = {~0ULL, ~0ULL, ~0ULL, ~0ULL};
    return v;
}

Uint256 Uint256::from_bytes_le(const uint8_t bytes[32])
{
    Uint256 v;
    for (int i = 0; i < 4; ++i) {
        uint64_t limb = 0;
        for (int j = 7; j >= 0; --j)
            limb = (limb << 8) | bytes[i * 8 + j];
        v.limbs[i] = limb;
    }
    return v;
}

void Uint256::to_bytes_le(uint8_t out[32]) const
{
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j)
            out[i * 8 + j] = static_cast<uint8_t>(limbs[i] >> (8 * j));
}

static int hex_nibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("Uint256::from_hex: bad hex character");
}

Uint256 Uint256::from_hex(const std::string& hex)
{
    std::string s = hex;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
    if (s.empty() || s.size() > 64) throw std::invalid_argument("Uint256::from_hex: bad length");
    uint8_t bytes[32] = {0};
    // Right-align: the last hex digit is the least significant nibble.
    int nibble_index = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it, ++nibble_index) {
        int v = hex_nibble(*it);
        bytes[nibble_index / 2] |= static_cast<uint8_t>(v << (4 * (nibble_index % 2)));
    }
    return from_bytes_le(bytes);
}

std::string Uint256::to_hex() const
{
    static const char* digits = "0123456789abcdef";
    uint8_t bytes[32];
    to_bytes_le(bytes);
    std::string s(64, '0');
    for (int i = 0; i < 32; ++i) {
        s[62 - 2 * i] = digits[bytes[i] >> 4];
        s[63 - 2 * i] = digits[bytes[i] & 0xf];
    }
    return s;
}

} // namespace stakesim
