// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/analytics.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stakesim {

namespace {

constexpr double LN10 = 2.302585092994045684;

double log10_pmf(int64_t k, double lambda)
{
    return (-lambda + static_cast<double>(k) * std::log(lambda) -
            std::lgamma(static_cast<double>(k) + 1.0)) /
           LN10;
}

// Integer threshold helpers tolerant of float noise around exact integers.
int64_t floor_eps(double x) { return static_cast<int64_t>(std::floor(x + 1e-9)); }
int64_t ceil_eps(double x) { return static_cast<int64_t>(std::ceil(x - 1e-9)); }

} // namespace

TailProb log_poisson_pmf(int64_t k, double lambda)
{
    if (lambda <= 0.0) throw std::domain_error("log_poisson_pmf: lambda must be positive");
    if (k < 0) throw std::domain_error("log_poisson_pmf: negative k");
    return TailProb::from_log10(std::min(0.0, log10_pmf(k, lambda)));
}

TailProb poisson_sf(int64_t k, double lambda)
{
    if (lambda <= 0.0) throw std::domain_error("poisson_sf: lambda must be positive");
    if (k <= 0) return TailProb::one();

    if (static_cast<double>(k) > lambda) {
        // Factor the tail at pmf(k); the term ratio lambda/(k+i) < 1 keeps
        // the scaled sum small and strictly decreasing.
        double sum = 1.0, term = 1.0;
        double j = static_cast<double>(k);
        while (true) {
            term *= lambda / (j + 1.0);
            sum += term;
            j += 1.0;
            if (term < sum * 1e-18) break;
        }
        return TailProb::from_log10(std::min(0.0, log10_pmf(k, lambda) + std::log10(sum)));
    }

    // k <= lambda: the complement cdf(k-1) is at most about a half, so the
    // linear subtraction cannot cancel.
    double sum = 1.0, term = 1.0;
    for (double j = static_cast<double>(k - 1); j >= 1.0; j -= 1.0) {
        term *= j / lambda;
        sum += term;
        if (term < sum * 1e-18) break;
    }
    const double cdf = std::pow(10.0, log10_pmf(k - 1, lambda)) * sum;
    return TailProb::from_linear(std::min(1.0, std::max(0.0, 1.0 - cdf)));
}

TailProb regularized_lower_gamma(double a, double x)
{
    if (a <= 0.0 || x < 0.0) throw std::domain_error("regularized_lower_gamma: bad arguments");
    if (x == 0.0) return TailProb::zero();

    if (x < a + 1.0) {
        // Series for the lower function, factored so the log comes out
        // exactly even when P is far below double range.
        double sum = 1.0 / a, term = 1.0 / a;
        for (int n = 1; n < 100000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        const double l10 =
            (a * std::log(x) - x - std::lgamma(a)) / LN10 + std::log10(sum);
        return TailProb::from_log10(std::min(0.0, l10));
    }

    // Upper function Q by Lentz continued fraction; P = 1 - Q is O(1) here.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double logq = a * std::log(x) - x - std::lgamma(a) + std::log(h);
    const double q = std::exp(logq);
    return TailProb::from_linear(std::min(1.0, std::max(0.0, 1.0 - q)));
}

TailProb double_spend_probability(double p, int64_t n)
{
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("double_spend_probability: p outside (0,1)");
    if (n < 0) throw std::domain_error("double_spend_probability: negative n");
    if (p >= 0.5) return TailProb::one();
    if (n == 0) return TailProb::one();

    const double q = 1.0 - p;
    const double lambda = static_cast<double>(n) * p / q;
    const double log10_r = std::log10(p / q);

    TailProb total = poisson_sf(n + 1, lambda);
    for (int64_t k = 0; k <= n; ++k) {
        const double l10 = log10_pmf(k, lambda) + static_cast<double>(n - k) * log10_r;
        total = total + TailProb::from_log10(std::min(0.0, l10));
    }
    return total;
}

TailProb catchup_probability_at(double t, const RaceParams& rp)
{
    if (t <= 0.0) throw std::domain_error("catchup_probability_at: t must be positive");
    const double blocks = t / rp.tau;
    const int64_t k = ceil_eps(rp.alpha * blocks + static_cast<double>(rp.n));
    const double lambda = rp.p * blocks;
    if (lambda <= 0.0) return TailProb::zero();
    return poisson_sf(k, lambda);
}

CatchupBound catchup_upper_bound(const RaceParams& rp)
{
    CatchupBound out;
    if (rp.p >= rp.alpha) {
        out.value = TailProb::one();
        out.diverged = true;
        return out;
    }
    TailProb sum = TailProb::zero();
    double prev_l10 = 1.0; // sentinel above any probability
    double ratio_l10 = 0.0;
    int64_t i = 1;
    for (;; ++i) {
        const int64_t k = ceil_eps(rp.alpha * static_cast<double>(i) + static_cast<double>(rp.n));
        const TailProb term = poisson_sf(k, rp.p * static_cast<double>(i));
        sum = sum + term;
        const double tl10 = term.log10_value();
        const bool decreasing = tl10 < prev_l10;
        if (decreasing) ratio_l10 = tl10 - prev_l10;
        prev_l10 = tl10;
        if (decreasing && !sum.is_zero() && tl10 < sum.log10_value() - 30.0) break;
        if (i > 5'000'000)
            throw std::runtime_error("catchup_upper_bound: series did not settle");
    }
    out.terms = i;
    // Geometric majorant for the dropped remainder.
    if (ratio_l10 < 0.0) {
        const double rho = std::pow(10.0, ratio_l10);
        out.remainder = TailProb::from_log10(
            std::min(0.0, prev_l10 + ratio_l10 - std::log10(1.0 - rho)));
    } else {
        out.remainder = TailProb::one();
    }
    out.value = sum;
    return out;
}

TailProb grinding_trial_probability(const RaceParams& rp, ThresholdReading reading)
{
    if (!(rp.p > 0.0 && rp.p < 1.0))
        throw std::domain_error("grinding_trial_probability: p outside (0,1)");
    const double blocks = rp.t_modifier / rp.tau;
    const double honest_expected = (1.0 - rp.p) * blocks;
    const int64_t threshold = reading == ThresholdReading::STRICT_MORE
                                  ? floor_eps(honest_expected) + 1
                                  : ceil_eps(honest_expected);
    return poisson_sf(threshold, rp.p * blocks);
}

TailProb grinding_success_probability(const RaceParams& rp, ThresholdReading reading)
{
    if (rp.hash_rate < 0.0 || rp.n_stakes < 1.0)
        throw std::domain_error("grinding_success_probability: bad hash budget");
    const TailProb trial = grinding_trial_probability(rp, reading);
    double tries = rp.hash_rate * rp.t_modifier / rp.n_stakes;
    tries = std::min(tries, 18446744073709551616.0); // 2^64 modifier space
    tries = std::max(tries, 1.0);                    // the natural modifier is one try
    return tailprob_complement_power(trial, tries);
}

ThresholdResult grinding_threshold(double hash_rate, double t_modifier, double tau,
                                   double n_stakes, double success_target,
                                   ThresholdReading reading)
{
    if (!(success_target > 0.0 && success_target < 1.0))
        throw std::domain_error("grinding_threshold: target outside (0,1)");
    RaceParams rp;
    rp.tau = tau;
    rp.t_modifier = t_modifier;
    rp.hash_rate = hash_rate;
    rp.n_stakes = n_stakes;

    auto success_l10 = [&](double p) {
        rp.p = p;
        const TailProb s = grinding_success_probability(rp, reading);
        return s.is_zero() ? -1e9 : s.log10_value();
    };

    // The bisection assumes success grows with p; scan first.
    double prev = -1e18;
    for (double p = 0.02; p < 0.50; p += 0.02) {
        const double cur = success_l10(p);
        if (cur + 1e-12 < prev)
            throw std::runtime_error("grinding_threshold: success not monotone in p");
        prev = cur;
    }

    const double target_l10 = std::log10(success_target);
    double lo = 0.002, hi = 0.5;
    if (success_l10(hi - 1e-9) < target_l10) return ThresholdResult{0.5, false};
    if (success_l10(lo) >= target_l10) return ThresholdResult{lo, false};
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (success_l10(mid) >= target_l10)
            hi = mid;
        else
            lo = mid;
    }
    return ThresholdResult{0.5 * (lo + hi), true};
}

std::string table1_csv(const std::vector<double>& p_rows, const std::vector<int64_t>& n_cols)
{
    std::ostringstream out;
    out << "p";
    for (int64_t n : n_cols) out << "," << n << "_conf";
    out << "\n";
    char buf[64];
    for (double p : p_rows) {
        std::snprintf(buf, sizeof(buf), "%.2f", p);
        out << buf;
        for (int64_t n : n_cols) out << "," << double_spend_probability(p, n).str();
        out << "\n";
    }
    return out.str();
}

std::string catchup_series_csv(const std::vector<double>& p_values, int64_t n_max, int64_t n_step,
                               bool owns_coins, double tau)
{
    std::ostringstream out;
    out << "n";
    for (double p : p_values) out << ",p_" << p;
    out << "\n";
    for (int64_t n = n_step; n <= n_max; n += n_step) {
        out << n;
        for (double p : p_values) {
            RaceParams rp;
            rp.p = p;
            rp.n = n;
            rp.alpha = owns_coins ? 1.0 - p : 1.0;
            rp.tau = tau;
            const CatchupBound b = catchup_upper_bound(rp);
            out << "," << (b.diverged ? "1" : b.value.str());
        }
        out << "\n";
    }
    return out.str();
}

std::string grinding_curve_csv(const std::vector<double>& hash_rates, double t_modifier,
                               double tau, double n_stakes, double p_step)
{
    std::ostringstream out;
    out << "p";
    for (double h : hash_rates) out << ",h_" << h;
    out << "\n";
    for (double p = p_step; p < 0.5; p += p_step) {
        out << p;
        for (double h : hash_rates) {
            RaceParams rp;
            rp.p = p;
            rp.tau = tau;
            rp.t_modifier = t_modifier;
            rp.hash_rate = h;
            rp.n_stakes = n_stakes;
            out << "," << grinding_success_probability(rp).str();
        }
        out << "\n";
    }
    return out.str();
}

std::string grinding_threshold_csv(const std::vector<double>& t_modifiers, double hash_rate,
                                   double tau, double n_stakes, double success_target)
{
    std::ostringstream out;
    out << "t_modifier_s,p_star,crossed\n";
    for (double tm : t_modifiers) {
        const ThresholdResult r =
            grinding_threshold(hash_rate, tm, tau, n_stakes, success_target);
        out << tm << "," << r.p_star << "," << (r.crossed ? 1 : 0) << "\n";
    }
    return out.str();
}

} // namespace stakesim
