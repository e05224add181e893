// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_ANALYTICS_HPP
#define STAKESIM_ANALYTICS_HPP

#include <stakesim/amount.hpp>
#include <stakesim/tailprob.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stakesim {

// Parameters of a block race. q and lambda are always derived from p and n
// so they cannot drift out of sync with the stored fields.
struct RaceParams {
    double p = 0.1;          // attacker's fraction of staked coins
    int64_t n = 6;           // confirmations, or lag in blocks
    double alpha = 1.0;      // main-chain intensity: 1-p if the attacker
                             // still owns the coins, 1 otherwise
    double tau = 60.0;       // block time, seconds
    double t_modifier = 12000.0;
    double hash_rate = 0.0;  // hashes/second available for grinding
    double n_stakes = 1e6;

    double q() const { return 1.0 - p; }
    double lambda() const { return static_cast<double>(n) * p / q(); }
};

// Which side of the by-one-block ambiguity the grinding threshold uses:
// strictly more blocks than the honest expectation, or at least it.
enum class ThresholdReading { STRICT_MORE, AT_LEAST_EXPECTATION };

// log-domain Poisson mass e^{-lambda} lambda^k / k!.
TailProb log_poisson_pmf(int64_t k, double lambda);

// P[X >= k] for X ~ Poisson(lambda), as a stable tail sum.
TailProb poisson_sf(int64_t k, double lambda);

// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a), the
// independent route for the identity P[X >= k] = P(k, lambda).
TailProb regularized_lower_gamma(double a, double x);

// Probability that a double spend against n confirmations succeeds for an
// attacker holding fraction p of the staked coins:
//   P = sf(n+1, lambda) + sum_{k=0}^{n} pmf(k, lambda) (p/q)^{n-k},
// lambda = n p / q. Returns 1 for p >= 0.5.
TailProb double_spend_probability(double p, int64_t n);

// P[Poiss(p t/tau) >= ceil(alpha t/tau + n)]: the attacker's branch is
// longer than the main chain at time t after the fork.
TailProb catchup_probability_at(double t, const RaceParams& rp);

struct CatchupBound {
    TailProb value;
    TailProb remainder;  // geometric majorant of the truncated tail
    bool diverged = false;
    int64_t terms = 0;
};

// Upper bound sum_{i>=1} P[Poiss(p i) >= ceil(alpha i + n)]; diverges
// (returns 1) when p >= alpha.
CatchupBound catchup_upper_bound(const RaceParams& rp);

// Per-modifier probability of producing more blocks than the honest
// expectation over one modifier interval.
TailProb grinding_trial_probability(const RaceParams& rp,
                                    ThresholdReading reading = ThresholdReading::STRICT_MORE);

// 1 - (1 - trial)^E with E = clamp(hash_rate * T_mod / n_stakes, 1, 2^64).
TailProb grinding_success_probability(const RaceParams& rp,
                                      ThresholdReading reading = ThresholdReading::STRICT_MORE);

struct ThresholdResult {
    double p_star = 0.5;
    bool crossed = false;  // false: no crossing found in (0, 0.5]
};

// Smallest attacker fraction whose grinding success reaches success_target,
// found by bisection after a monotonicity scan.
ThresholdResult grinding_threshold(double hash_rate, double t_modifier, double tau,
                                   double n_stakes, double success_target,
                                   ThresholdReading reading = ThresholdReading::STRICT_MORE);

// CSV reproductions of the reference table and figure series.
std::string table1_csv(const std::vector<double>& p_rows, const std::vector<int64_t>& n_cols);
std::string catchup_series_csv(const std::vector<double>& p_values, int64_t n_max, int64_t n_step,
                               bool owns_coins, double tau);
std::string grinding_curve_csv(const std::vector<double>& hash_rates, double t_modifier,
                               double tau, double n_stakes, double p_step);
std::string grinding_threshold_csv(const std::vector<double>& t_modifiers, double hash_rate,
                                   double tau, double n_stakes, double success_target);

} // namespace stakesim

#endif // STAKESIM_ANALYTICS_HPP
