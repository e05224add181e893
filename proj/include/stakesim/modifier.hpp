// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_MODIFIER_HPP
#define STAKESIM_MODIFIER_HPP

#include <stakesim/chainparams.hpp>
#include <stakesim/kernel.hpp>
#include <stakesim/uint256.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stakesim {

class NotEnoughHistoryError : public std::runtime_error {
public:
    explicit NotEnoughHistoryError(const std::string& what) : std::runtime_error(what) {}
};

class WindowExhaustedError : public std::runtime_error {
public:
    explicit WindowExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

class ModifierNotReadyError : public std::runtime_error {
public:
    explicit ModifierNotReadyError(const std::string& what) : std::runtime_error(what) {}
};

// What modifier generation needs to know about a chain block.
struct SourceBlockRef {
    Hash256 block_id;
    Hash256 hash_proof;
    Timestamp timestamp = 0;
};

struct ModifierSchedule {
    ModifierMode mode = ModifierMode::DYNAMIC;
    Timestamp interval_start = 0;
    uint64_t value = 0;
    std::array<SourceBlockRef, 64> source_blocks{};
    int fallback_windows = 0; // windows that had to borrow an earlier block
};

// The 64 window lengths partitioning the selection interval; integer-second
// rounding is absorbed by the final window so the lengths always sum to the
// interval exactly.
std::array<Seconds, 64> window_lengths(Seconds selection_interval, WindowLaw law);

// Hash used to rank candidates within a window:
// sha256(hash_proof || prev_modifier), 40 bytes little-endian.
Hash256 selection_hash(const Hash256& hash_proof, uint64_t prev_modifier);

struct WindowSelection {
    size_t index; // into the candidate span
    int bit;      // least significant bit of the winning selection hash
};

// Picks the candidate with the minimum selection hash, ignoring entries in
// `already_selected` (flags parallel to `candidates`).
WindowSelection select_window_bit(std::span<const SourceBlockRef> candidates,
                                  uint64_t prev_modifier,
                                  std::span<const bool> already_selected);

// Assembles a modifier for the interval beginning at `interval_start`.
// `chain` holds the branch blocks with timestamps in [history_start,
// interval_start), ascending; `history_start` must reach back at least one
// selection interval. Bit i of the result comes from window i (window 0 is
// the shortest).
ModifierSchedule generate_modifier(const std::vector<SourceBlockRef>& chain,
                                   Timestamp history_start, Timestamp interval_start,
                                   const ChainParams& params, uint64_t prev_modifier);

// Interval bookkeeping shared by mining and validation. Intervals are
// aligned to absolute time: interval i covers [i*T, (i+1)*T).
inline Timestamp interval_start_for(Timestamp t, const ChainParams& params)
{
    const Seconds T = params.modifier_interval;
    // Floor even for negative t, though simulated time never goes negative.
    Timestamp i = t >= 0 ? t / T : -((-t + T - 1) / T);
    return i * T;
}

// CSV audit trace: interval_start, modifier hex, 64 source block ids.
std::string modifier_trace_csv(const std::vector<ModifierSchedule>& schedules);

} // namespace stakesim

#endif // STAKESIM_MODIFIER_HPP
