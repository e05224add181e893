// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_KERNEL_HPP
#define STAKESIM_KERNEL_HPP

#include <stakesim/amount.hpp>
#include <stakesim/chainparams.hpp>
#include <stakesim/sha256.hpp>
#include <stakesim/uint256.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace stakesim {

struct UtxoId {
    Hash256 tx_hash;
    uint32_t output_index = 0;

    friend auto operator<=>(const UtxoId&, const UtxoId&) = default;
};

struct UtxoIdHasher {
    size_t operator()(const UtxoId& id) const noexcept
    {
        return Uint256Hasher{}(id.tx_hash) ^ (static_cast<size_t>(id.output_index) << 7);
    }
};

struct Utxo {
    UtxoId id;
    Amount amount = 0;                 // units; must be > 0
    Timestamp tx_time = 0;             // when the output was created
    Timestamp block_time_from = 0;     // timestamp of the confirming block
    uint64_t tx_offset = 0;            // byte offset within the confirming block
    NodeId owner = 0;
};

// The six-field preimage of the stake check. Serialization is 48 bytes:
// each field written as 8-byte little-endian in the order below.
struct Kernel {
    uint64_t n_stake_modifier = 0;
    Timestamp n_time_block_from = 0;
    uint64_t n_tx_prev_offset = 0;
    Timestamp n_tx_prev_time = 0;
    uint32_t n_prevout_num = 0;
    Timestamp n_time_tx = 0;
};

struct Target {
    Uint256 value; // must be nonzero

    friend bool operator==(const Target&, const Target&) = default;
};

class IneligibleStakeError : public std::runtime_error {
public:
    explicit IneligibleStakeError(const std::string& what) : std::runtime_error(what) {}
};

void serialize_kernel(const Kernel& k, uint8_t out[48]);
Hash256 kernel_hash(const Kernel& k);

Kernel make_kernel(const Utxo& u, uint64_t stake_modifier, Timestamp now);

// Coin-age multiplier applied to the stake target. Peercoin mode: zero
// until min_stake_age, then linear in seconds reaching 1 one day later and
// capping at 60 after sixty more days. NeuCoin mode: a flat 1 once eligible.
double time_weight(Seconds age, const ChainParams& params);

// target * amount (* time weight), computed through 512 bits and clamped to
// the 256-bit maximum, at which point every hash passes.
Uint256 stake_threshold(const Target& target, const Utxo& utxo, Timestamp now,
                        const ChainParams& params);

enum class StakeCheck { PASS, FAIL };

// Throws IneligibleStakeError when the stake is younger than min_stake_age;
// that is a different outcome than a failed hash comparison.
StakeCheck check_stake(const Kernel& k, const Target& target, const Utxo& utxo,
                       const ChainParams& params);

// Exponential-moving-average retarget with per-step clamp to [prev/2, 2*prev]:
//   next = prev * ((w-1)*tau + 2*spacing) / ((w+1)*tau)
Target retarget(const Target& prev, Seconds actual_spacing, const ChainParams& params);

// Target giving the whole staked supply one expected block per tau.
Target initial_target(Amount total_staked, const ChainParams& params);

struct StakeHit {
    Utxo utxo;
    Kernel kernel;
    Hash256 proof;
};

struct MineTickResult {
    std::vector<StakeHit> hits;     // sorted by utxo id
    uint64_t hashes_evaluated = 0;  // exactly one per eligible utxo
    uint64_t skipped_young = 0;
};

// One stake check per eligible UTXO at timestamp `now`, all against the
// same modifier (callers group per-modifier in static mode).
MineTickResult mine_tick(std::span<const Utxo> utxos, uint64_t stake_modifier,
                         const Target& target, Timestamp now, const ChainParams& params);

} // namespace stakesim

#endif // STAKESIM_KERNEL_HPP
