// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_SHA256_HPP
#define STAKESIM_SHA256_HPP

#include <stakesim/uint256.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace stakesim {

// The one hash used everywhere: SHA-256 over a fixed-order little-endian
// field serialization. Digests are interpreted as little-endian 256-bit
// integers (byte 0 of the digest is the least significant byte).

// General path, any message length.
Hash256 sha256(const uint8_t* data, size_t len);
Hash256 sha256(const std::vector<uint8_t>& data);

// Single-block fast path for messages up to 55 bytes (kernels are 48 bytes,
// selection preimages 40). Uses the SHA extension when the CPU has it; the
// dispatch is resolved once at startup. Output is identical to sha256().
Hash256 sha256_short(const uint8_t* data, size_t len);

// Incremental little-endian serializer for hash preimages.
class HashWriter {
public:
    void u32(uint32_t v)
    {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v)
    {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
    void hash(const Hash256& h)
    {
        uint8_t bytes[32];
        h.to_bytes_le(bytes);
        buf_.insert(buf_.end(), bytes, bytes + 32);
    }
    Hash256 finalize() const { return sha256(buf_.data(), buf_.size()); }
    const std::vector<uint8_t>& bytes() const { return buf_; }

private:
    std::vector<uint8_t> buf_;
};

} // namespace stakesim

#endif // STAKESIM_SHA256_HPP
