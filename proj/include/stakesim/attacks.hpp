// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_ATTACKS_HPP
#define STAKESIM_ATTACKS_HPP

#include <stakesim/analytics.hpp>
#include <stakesim/chainparams.hpp>
#include <stakesim/tailprob.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stakesim {

enum class AttackKind { DOUBLE_SPEND, HISTORY_REVISION, GRINDING, PREPROGRAMMED };

struct AttackSpec {
    AttackKind kind = AttackKind::DOUBLE_SPEND;
    double p = 0.1;                 // fraction of staked coins controlled
    int64_t n_conf = 6;             // confirmations the victim waits
    int64_t lag_blocks = 1;         // history-revision / grinding start depth
    bool owns_coins = true;         // false: old keys, honest intensity stays 1
    int64_t n_stakes = 1'000'000;   // split count; must dwarf n_conf
    double hash_budget = 0.0;       // hashes/second for grinding
    Timestamp attack_window_start = 0;
    Timestamp attack_window_end = 0;
    int recycle_cycles = 8;         // preprogrammed stake-recycling rounds
    uint64_t trials = 10000;
    int64_t give_up_blocks = 0;     // 0: default 10 * max(n_conf, lag)
    int modifier_bits = 64;         // < 64 switches grinding to the exhaustive toy
    ThresholdReading reading = ThresholdReading::STRICT_MORE;
    uint64_t seed = 1;
    int jobs = 1;

    int64_t effective_give_up() const
    {
        return give_up_blocks > 0 ? give_up_blocks : 10 * std::max<int64_t>({1, n_conf, lag_blocks});
    }

    void validate(const ChainParams& params) const;
    std::string to_json() const;
    static AttackSpec from_json(const std::string& text);
};

struct AttackOutcome {
    uint64_t successes = 0;
    uint64_t trials = 0;
    double empirical = 0.0;
    double ci99_lo = 0.0; // Wilson 99% interval on the empirical rate
    double ci99_hi = 0.0;
    int64_t max_lead = 0; // best attacker lead over the main chain observed
    uint64_t early_successes = 0; // successes inside half the give-up window
    TailProb analytic;
    bool analytic_diverged = false;
    std::map<std::string, double> extras; // per-attack metrics (enrichment, ...)
    std::string note;

    std::string to_json() const;
};

// Wilson score interval at 99% confidence.
void wilson_ci99(uint64_t successes, uint64_t trials, double& lo, double& hi);

// The race model behind the double-spend table: the honest chain reaches
// the victim's n confirmations at its average pace, with attacker output
// counted over that span; afterwards block production alternates by stake
// weight, and the attack succeeds when the side branch pulls even. Stake
// splitting depletes the attacker's rate by 1/n_stakes per block mined.
AttackOutcome run_double_spend(const AttackSpec& spec, const ChainParams& params);

// Fork lag_blocks behind the tip; success means the side branch is strictly
// longer than the main chain when the give-up horizon is reached. The
// ever-pulled-ahead count and maximum lead are reported alongside.
AttackOutcome run_history_revision(const AttackSpec& spec, const ChainParams& params);

// Two-step grinding. Step one mines alone on a fork, measuring how many
// modifier source blocks the attacker controls per interval. Step two
// races interval by interval: the attacker wins an interval when some
// candidate modifier in his budget yields strictly more blocks than the
// honest expectation, and the trial succeeds when every interval wins
// until the lag is erased. With modifier_bits < 64 the candidate space is
// ground exhaustively through real kernel hashing; at full width the
// per-interval success comes from the analytic tail. A zero hash budget
// leaves no modifier choice and delegates to the history-revision race.
AttackOutcome run_grinding(const AttackSpec& spec, const ChainParams& params);

// Preprogrammed long-range attack against a fixed target: recycle stakes,
// keep those whose (static) kernels pass inside the attack window, then
// burst-mine the window. Under a dynamic modifier the retention decisions
// carry no information and enrichment stays at 1.
AttackOutcome run_preprogrammed(const AttackSpec& spec, const ChainParams& params);

AttackOutcome run_attack(const AttackSpec& spec, const ChainParams& params);

// Stake split plan: `factor` near-equal parts of `total`; the residual
// mining-power fraction after k blocks is (factor - k) / factor.
std::vector<Amount> plan_split(Amount total, int64_t n_conf, int64_t factor);

} // namespace stakesim

#endif // STAKESIM_ATTACKS_HPP
