// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/tailprob.hpp>

#include "highprec.hpp"

#include <doctest.h>

#include <cmath>

using namespace stakesim;

TEST_CASE("from_linear basics")
{
    CHECK(TailProb::from_linear(1.0).log10_value() == doctest::Approx(0.0));
    CHECK(TailProb::from_linear(0.0).is_zero());
    CHECK(TailProb::from_linear(1e-35).log10_value() == doctest::Approx(-35.0).epsilon(1e-12));
    CHECK_THROWS_AS(TailProb::from_linear(1.5), std::domain_error);
    CHECK_THROWS_AS(TailProb::from_linear(-0.1), std::domain_error);
}

TEST_CASE("round trip within 1e-9 relative where representable")
{
    for (double x : {1.0, 1e-5, 1e-50, 1e-300}) {
        const TailProb p = TailProb::from_linear(x);
        CHECK(p.to_linear() == doctest::Approx(x).epsilon(1e-9));
        const TailProb again = TailProb::from_linear(p.to_linear());
        CHECK(again.log10_value() == doctest::Approx(p.log10_value()).epsilon(1e-12));
    }
}

TEST_CASE("log-domain sum and product")
{
    const TailProb a = TailProb::from_log10(-50.0);
    const TailProb b = TailProb::from_log10(-50.0);
    CHECK((a + b).log10_value() == doctest::Approx(-50.0 + std::log10(2.0)));
    CHECK((a * b).log10_value() == doctest::Approx(-100.0));
    CHECK((TailProb::zero() + a).log10_value() == doctest::Approx(-50.0));
    CHECK((TailProb::zero() * a).is_zero());
    CHECK(TailProb::zero() < a);
    CHECK(a < TailProb::one());
}

TEST_CASE("complement power: trivial cases")
{
    CHECK(tailprob_complement_power(TailProb::zero(), 10).is_zero());
    CHECK(tailprob_complement_power(TailProb::from_linear(0.5), 0).is_zero());
    CHECK(tailprob_complement_power(TailProb::from_linear(0.5), 1).to_linear() ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tailprob_complement_power(TailProb::one(), 3).to_linear() == doctest::Approx(1.0));
}

TEST_CASE("complement power: extreme tail against the 200-digit oracle")
{
    // q = 1e-46, k = 1e19: the result is kq to within C(k,2)q^2.
    const TailProb q = TailProb::from_log10(-46.0);
    const TailProb r = tailprob_complement_power(q, 1e19);
    const double expect = oracle::log10_complement_power(-46.0, 1e19);
    CHECK(r.log10_value() == doctest::Approx(expect).epsilon(1e-9));
    CHECK(std::fabs(r.log10_value() - (-27.0)) < 0.01); // within 1% of 1e-27

    // Moderate regime exercises the expm1 path.
    for (double lq : {-3.0, -8.0, -14.0, -16.0, -20.0}) {
        for (double k : {1.0, 7.0, 1e3, 1e12}) {
            const double got = tailprob_complement_power(TailProb::from_log10(lq), k)
                                   .log10_value();
            const double want = oracle::log10_complement_power(lq, k);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}
