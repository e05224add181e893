// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_AMOUNT_HPP
#define STAKESIM_AMOUNT_HPP

#include <cstdint>

namespace stakesim {

// Coin amounts are integers in the smallest denomination so that ledger
// arithmetic never drifts. 1 coin = 10^6 units.
using Amount = int64_t;
constexpr Amount COIN = 1'000'000;

// Simulated clocks are integer seconds.
using Timestamp = int64_t;
using Seconds = int64_t;

constexpr Seconds SECONDS_PER_DAY = 24 * 60 * 60;
constexpr Seconds SECONDS_PER_YEAR = 365 * SECONDS_PER_DAY;

using NodeId = uint32_t;

} // namespace stakesim

#endif // STAKESIM_AMOUNT_HPP
