// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Slow-path oracle: 200-decimal-digit Poisson and series arithmetic via
// MPFR, kept independent of the log-domain fast paths it checks.

#ifndef STAKESIM_TESTS_HIGHPREC_HPP
#define STAKESIM_TESTS_HIGHPREC_HPP

#include <cstdint>

namespace oracle {

// log10 of the Poisson pmf / survival function, summed digit-exactly.
double log10_poisson_pmf(int64_t k, double lambda);
double log10_poisson_sf(int64_t k, double lambda);

// log10 of 1 - (1 - q)^n for q = 10^log10_q, via 200-digit binomial
// series / direct power.
double log10_complement_power(double log10_q, double n);

// log10 of the double-spend race probability
//   sf(n+1, l) + sum_k pmf(k, l) (p/q)^{n-k},  l = n p / q.
double log10_double_spend(double p, int64_t n);

// log10 of sum_{i=1..terms} P[Poiss(p i) >= ceil(alpha i + n)].
double log10_catchup_bound(double p, double alpha, int64_t n, int64_t max_terms);

} // namespace oracle

#endif // STAKESIM_TESTS_HIGHPREC_HPP
