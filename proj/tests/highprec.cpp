// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "highprec.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// 200 decimal digits.
constexpr mpfr_prec_t PREC = 700;

struct Real {
    mpfr_t v;
    Real() { mpfr_init2(v, PREC); }
    explicit Real(double x) : Real() { mpfr_set_d(v, x, MPFR_RNDN); }
    Real(const Real& o) : Real() { mpfr_set(v, o.v, MPFR_RNDN); }
    Real& operator=(const Real& o)
    {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Real() { mpfr_clear(v); }
    double log10() const
    {
        Real r;
        mpfr_log10(r.v, v, MPFR_RNDN);
        return mpfr_get_d(r.v, MPFR_RNDN);
    }
};

// pmf(k, lambda) computed as exp(-lambda + k ln lambda - lnGamma(k+1)).
Real poisson_pmf(int64_t k, double lambda)
{
    Real l(lambda), t, lg, kk(static_cast<double>(k));
    mpfr_log(t.v, l.v, MPFR_RNDN);             // ln lambda
    mpfr_mul(t.v, t.v, kk.v, MPFR_RNDN);       // k ln lambda
    mpfr_sub(t.v, t.v, l.v, MPFR_RNDN);        // - lambda
    Real kp1(static_cast<double>(k) + 1.0);
    mpfr_lngamma(lg.v, kp1.v, MPFR_RNDN);
    mpfr_sub(t.v, t.v, lg.v, MPFR_RNDN);
    Real out;
    mpfr_exp(out.v, t.v, MPFR_RNDN);
    return out;
}

Real poisson_sf_real(int64_t k, double lambda)
{
    if (k <= 0) return Real(1.0);
    Real sum(0.0);
    Real term = poisson_pmf(k, lambda);
    Real l(lambda);
    Real j(static_cast<double>(k));
    Real ratio, stop;
    for (int64_t i = 0; i < 100000000; ++i) {
        mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
        mpfr_add_d(j.v, j.v, 1.0, MPFR_RNDN);
        mpfr_div(ratio.v, l.v, j.v, MPFR_RNDN);
        mpfr_mul(term.v, term.v, ratio.v, MPFR_RNDN);
        mpfr_mul_d(stop.v, sum.v, 1e-60, MPFR_RNDN);
        if (mpfr_cmp(term.v, stop.v) < 0) break;
    }
    return sum;
}

} // namespace

double log10_poisson_pmf(int64_t k, double lambda)
{
    return poisson_pmf(k, lambda).log10();
}

double log10_poisson_sf(int64_t k, double lambda)
{
    return poisson_sf_real(k, lambda).log10();
}

double log10_complement_power(double log10_q, double n)
{
    // q = 10^log10_q; result = 1 - (1-q)^n = -expm1(n log1p(-q)).
    Real q, l10(log10_q), ln10;
    Real ten(10.0);
    mpfr_log(ln10.v, ten.v, MPFR_RNDN);
    Real t;
    mpfr_mul(t.v, l10.v, ln10.v, MPFR_RNDN);
    mpfr_exp(q.v, t.v, MPFR_RNDN); // q

    Real negq(0.0);
    mpfr_neg(negq.v, q.v, MPFR_RNDN);
    Real lp;
    mpfr_log1p(lp.v, negq.v, MPFR_RNDN); // log(1-q)
    Real nn(n);
    mpfr_mul(lp.v, lp.v, nn.v, MPFR_RNDN);
    Real em;
    mpfr_expm1(em.v, lp.v, MPFR_RNDN); // (1-q)^n - 1
    mpfr_neg(em.v, em.v, MPFR_RNDN);
    return em.log10();
}

double log10_double_spend(double p, int64_t n)
{
    if (p >= 0.5) return 0.0;
    const double q = 1.0 - p;
    const double lambda = static_cast<double>(n) * p / q;
    Real total = poisson_sf_real(n + 1, lambda);
    Real r(p / q);
    for (int64_t k = 0; k <= n; ++k) {
        Real term = poisson_pmf(k, lambda);
        Real pw, ex(static_cast<double>(n - k));
        mpfr_pow(pw.v, r.v, ex.v, MPFR_RNDN);
        mpfr_mul(term.v, term.v, pw.v, MPFR_RNDN);
        mpfr_add(total.v, total.v, term.v, MPFR_RNDN);
    }
    return total.log10();
}

double log10_catchup_bound(double p, double alpha, int64_t n, int64_t max_terms)
{
    Real total(0.0);
    for (int64_t i = 1; i <= max_terms; ++i) {
        const double x = alpha * static_cast<double>(i) + static_cast<double>(n);
        const int64_t k = static_cast<int64_t>(std::ceil(x - 1e-9));
        Real term = poisson_sf_real(k, p * static_cast<double>(i));
        mpfr_add(total.v, total.v, term.v, MPFR_RNDN);
        Real stop;
        mpfr_mul_d(stop.v, total.v, 1e-35, MPFR_RNDN);
        if (i > 8 && mpfr_cmp(term.v, stop.v) < 0) break;
    }
    return total.log10();
}

} // namespace oracle
