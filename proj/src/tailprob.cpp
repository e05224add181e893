// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/tailprob.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stakesim {

namespace {
constexpr double LN10 = 2.302585092994045684;
}

TailProb TailProb::from_linear(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("TailProb: linear value outside [0,1]");
    if (x == 0.0) return TailProb();
    return from_log10(std::log10(x));
}

TailProb TailProb::from_log10(double l10)
{
    if (l10 > 0.0) throw std::domain_error("TailProb: log10 value above 0");
    if (std::isnan(l10)) throw std::domain_error("TailProb: log10 value is NaN");
    TailProb p;
    p.log10_ = l10;
    p.zero_ = false;
    return p;
}

double TailProb::log10_value() const
{
    if (zero_) throw std::domain_error("TailProb: log10 of zero");
    return log10_;
}

double TailProb::to_linear() const
{
    if (zero_) return 0.0;
    return std::pow(10.0, log10_);
}

TailProb TailProb::operator+(const TailProb& o) const
{
    if (zero_) return o;
    if (o.zero_) return *this;
    const double hi = std::max(log10_, o.log10_);
    const double lo = std::min(log10_, o.log10_);
    double l10 = hi + std::log1p(std::pow(10.0, lo - hi)) / LN10;
    if (l10 > 0.0) l10 = 0.0; // sums are probabilities; cap rounding spill
    return from_log10(l10);
}

TailProb TailProb::operator*(const TailProb& o) const
{
    if (zero_ || o.zero_) return TailProb();
    return from_log10(log10_ + o.log10_);
}

bool TailProb::operator<(const TailProb& o) const
{
    if (zero_) return !o.zero_;
    if (o.zero_) return false;
    return log10_ < o.log10_;
}

std::string TailProb::str() const
{
    if (zero_) return "0";
    const double e = std::floor(log10_);
    const double mant = std::pow(10.0, log10_ - e);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6ge%+.0f", mant, e);
    return buf;
}

TailProb tailprob_complement_power(const TailProb& q, double k)
{
    if (k < 0.0) throw std::domain_error("tailprob_complement_power: negative exponent");
    if (k == 0.0 || q.is_zero()) return TailProb::zero();
    const double lq = q.log10_value();
    if (lq >= 0.0) return TailProb::one(); // q == 1
    const double lu = std::log10(k) + lq;  // log10 of k*q
    if (lu < -15.0) {
        // 1-(1-q)^k = kq - C(k,2)q^2 + ...; with kq < 1e-15 the second term
        // is below 1e-9 relative of the first even before the sign helps.
        return TailProb::from_log10(lu);
    }
    const double qlin = std::pow(10.0, lq);
    double r;
    if (lq > -17.0) {
        r = -std::expm1(k * std::log1p(-qlin));
    } else {
        // q too small for log1p to see past q itself; kq is the exact
        // exponent to machine precision.
        r = -std::expm1(-k * qlin);
    }
    if (r >= 1.0) return TailProb::one();
    return TailProb::from_linear(r);
}

} // namespace stakesim
