// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_TAILPROB_HPP
#define STAKESIM_TAILPROB_HPP

#include <string>

namespace stakesim {

// Probability carried as log10 so that magnitudes like 1e-95 keep full
// precision. Zero is an explicit flag rather than -inf so the value stays
// serializable and comparable.
class TailProb {
public:
    TailProb() : log10_(0.0), zero_(true) {}

    static TailProb zero() { return TailProb(); }
    static TailProb one() { return from_log10(0.0); }
    static TailProb from_linear(double x);
    static TailProb from_log10(double l10);

    bool is_zero() const { return zero_; }
    double log10_value() const;       // throws on zero
    double to_linear() const;         // underflows to 0.0 below ~1e-308

    // a + b, computed stably in log domain. Callers keep sums <= 1.
    TailProb operator+(const TailProb& o) const;
    TailProb operator*(const TailProb& o) const;

    bool operator<(const TailProb& o) const;
    bool operator<=(const TailProb& o) const { return !(o < *this); }

    std::string str() const;          // "1.234e-95" style, exact in the exponent

private:
    double log10_;
    bool zero_;
};

// 1 - (1 - q)^k for q in [0,1], k >= 0 (k may be fractional), evaluated so
// that the q*k << 1 regime keeps relative error below 1e-9.
TailProb tailprob_complement_power(const TailProb& q, double k);

} // namespace stakesim

#endif // STAKESIM_TAILPROB_HPP
