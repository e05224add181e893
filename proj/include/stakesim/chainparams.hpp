// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_CHAINPARAMS_HPP
#define STAKESIM_CHAINPARAMS_HPP

#include <stakesim/amount.hpp>

#include <string>

namespace stakesim {

// Whether the stake target is scaled by the coin-age time weight.
enum class CoinAgeMode { PEERCOIN_TIME_WEIGHT, NEUCOIN_FLAT };

// Fixed-per-UTXO modifier vs. one floating modifier shared by all stakes.
enum class ModifierMode { STATIC, DYNAMIC };

// `<=` vs `<` in the mining check.
enum class StakeInequality { NON_STRICT, STRICT };

// How a second block carrying an already-seen proof is treated.
enum class DuplicateStakePolicy { DETECT_ONLY, PUNITIVE };

// Growth law for the 64 modifier selection windows. LINEAR partitions the
// selection interval with window k proportional to k. HARMONIC_SECTIONS is
// the historical section law (window k weight 1/(191-2k), normalized); it
// is the only law whose shortest window holds ~12 blocks under the
// peercoin-style parameters.
enum class WindowLaw { LINEAR, HARMONIC_SECTIONS };

struct ChainParams {
    Seconds block_time_target = 60;            // tau
    Seconds min_stake_age = 138240;            // 1.6 days
    Seconds modifier_interval = 12000;         // 200 minutes
    Seconds selection_interval = 138240;       // 1.6 days
    int modifier_bits = 64;                    // reduced only in grinding toys
    CoinAgeMode coin_age_mode = CoinAgeMode::NEUCOIN_FLAT;
    ModifierMode modifier_mode = ModifierMode::DYNAMIC;
    StakeInequality stake_inequality = StakeInequality::STRICT;
    DuplicateStakePolicy duplicate_stake_policy = DuplicateStakePolicy::PUNITIVE;
    WindowLaw window_law = WindowLaw::LINEAR;
    double reward_initial_rate = 1.00;         // fraction per year
    double reward_final_rate = 0.06;
    double reward_decline_years = 10.0;
    int retarget_smoothing = 100;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    std::string to_json() const;
    static ChainParams from_json(const std::string& text);
};

// Named presets. "neucoin": 60s blocks, 1.6d stake age, 200min modifier
// interval, 1.6d selection interval, strict inequality, flat coin age,
// dynamic modifier, punitive duplicates, 100%->6% over 10y.
// "peercoin": 600s blocks, 30d stake age, 6h modifier interval, 9d
// selection interval, non-strict, time weight, static modifier, detect-only
// duplicates, flat 1%.
ChainParams preset_params(const std::string& name);

} // namespace stakesim

#endif // STAKESIM_CHAINPARAMS_HPP
