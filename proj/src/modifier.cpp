// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/modifier.hpp>

#include <stakesim/sha256.hpp>

#include <algorithm>
#include <sstream>

namespace stakesim {

std::array<Seconds, 64> window_lengths(Seconds selection_interval, WindowLaw law)
{
    // Window weights; lengths are the weights normalized to partition the
    // interval, with the final window absorbing the rounding remainder.
    double weights[64];
    double total = 0.0;
    for (int k = 0; k < 64; ++k) {
        double w;
        if (law == WindowLaw::LINEAR) {
            w = static_cast<double>(k + 1);
        } else {
            // Historical section law: the shortest window is weighted
            // 1/189 and the longest 1/63, matching the fixed-ratio section
            // durations of the original static-modifier design.
            w = 1.0 / static_cast<double>(189 - 2 * k);
        }
        weights[k] = w;
        total += w;
    }
    std::array<Seconds, 64> lengths{};
    Seconds assigned = 0;
    for (int k = 0; k < 63; ++k) {
        Seconds len = static_cast<Seconds>(
            static_cast<double>(selection_interval) * weights[k] / total);
        if (len < 1) len = 1;
        lengths[k] = len;
        assigned += len;
    }
    if (assigned >= selection_interval)
        throw std::invalid_argument("window_lengths: selection interval too short for 64 windows");
    lengths[63] = selection_interval - assigned;
    return lengths;
}

Hash256 selection_hash(const Hash256& hash_proof, uint64_t prev_modifier)
{
    uint8_t buf[40];
    hash_proof.to_bytes_le(buf);
    for (int i = 0; i < 8; ++i) buf[32 + i] = static_cast<uint8_t>(prev_modifier >> (8 * i));
    return sha256_short(buf, sizeof(buf));
}

WindowSelection select_window_bit(std::span<const SourceBlockRef> candidates,
                                  uint64_t prev_modifier,
                                  std::span<const bool> already_selected)
{
    if (candidates.size() != already_selected.size())
        throw std::invalid_argument("select_window_bit: flag span size mismatch");
    bool found = false;
    size_t best = 0;
    Hash256 best_hash;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (already_selected[i]) continue;
        Hash256 h = selection_hash(candidates[i].hash_proof, prev_modifier);
        if (!found || h < best_hash) {
            found = true;
            best = i;
            best_hash = h;
        }
    }
    if (!found) throw WindowExhaustedError("select_window_bit: no unselected candidate in window");
    return WindowSelection{best, static_cast<int>(best_hash.limbs[0] & 1)};
}

ModifierSchedule generate_modifier(const std::vector<SourceBlockRef>& chain,
                                   Timestamp history_start, Timestamp interval_start,
                                   const ChainParams& params, uint64_t prev_modifier)
{
    const Timestamp window_start = interval_start - params.selection_interval;
    if (history_start > window_start)
        throw NotEnoughHistoryError("generate_modifier: chain does not cover the selection interval");
    for (size_t i = 1; i < chain.size(); ++i)
        if (chain[i].timestamp < chain[i - 1].timestamp)
            throw std::invalid_argument("generate_modifier: chain not sorted by timestamp");
    if (!chain.empty() && chain.back().timestamp >= interval_start)
        throw std::invalid_argument("generate_modifier: block at or after interval start");

    const auto lengths = window_lengths(params.selection_interval, params.window_law);

    // Selection hashes depend only on (hash_proof, prev_modifier), so they
    // are fixed for the whole generation; rank candidates lazily per window.
    std::vector<bool> selected(chain.size(), false);

    ModifierSchedule sched;
    sched.mode = params.modifier_mode;
    sched.interval_start = interval_start;
    sched.value = 0;

    // Index of the first block at or after a timestamp.
    auto lower = [&](Timestamp t) {
        return static_cast<size_t>(
            std::lower_bound(chain.begin(), chain.end(), t,
                             [](const SourceBlockRef& b, Timestamp ts) { return b.timestamp < ts; }) -
            chain.begin());
    };

    Timestamp w_begin = window_start;
    for (int w = 0; w < 64; ++w) {
        const Timestamp w_end = w_begin + lengths[w];
        size_t lo = lower(w_begin);
        size_t hi = lower(w_end);

        bool found = false;
        size_t best = 0;
        Hash256 best_hash;
        for (size_t i = lo; i < hi; ++i) {
            if (selected[i]) continue;
            Hash256 h = selection_hash(chain[i].hash_proof, prev_modifier);
            if (!found || h < best_hash) {
                found = true;
                best = i;
                best_hash = h;
            }
        }
        if (!found) {
            // Sparse window: borrow the nearest earlier unselected block.
            ++sched.fallback_windows;
            for (size_t i = lo; i-- > 0;) {
                if (selected[i]) continue;
                found = true;
                best = i;
                best_hash = selection_hash(chain[i].hash_proof, prev_modifier);
                break;
            }
        }
        if (!found)
            throw WindowExhaustedError("generate_modifier: no selectable block for window " +
                                       std::to_string(w));
        selected[best] = true;
        sched.source_blocks[w] = chain[best];
        sched.value |= static_cast<uint64_t>(best_hash.limbs[0] & 1) << w;
        w_begin = w_end;
    }

    if (params.modifier_bits < 64)
        sched.value &= (uint64_t(1) << params.modifier_bits) - 1;
    return sched;
}

std::string modifier_trace_csv(const std::vector<ModifierSchedule>& schedules)
{
    std::ostringstream out;
    out << "interval_start,modifier";
    for (int i = 0; i < 64; ++i) out << ",source_" << i;
    out << "\n";
    char hexbuf[32];
    for (const auto& s : schedules) {
        std::snprintf(hexbuf, sizeof(hexbuf), "%016llx",
                      static_cast<unsigned long long>(s.value));
        out << s.interval_start << "," << hexbuf;
        for (const auto& src : s.source_blocks) out << "," << src.block_id.to_hex().substr(0, 16);
        out << "\n";
    }
    return out.str();
}

} // namespace stakesim
