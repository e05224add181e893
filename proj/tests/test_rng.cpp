// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <set>

using namespace stakesim;

TEST_CASE("same seed and stream replay identically")
{
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams are independent of draw position")
{
    Rng parent(9, 1);
    parent.next_u64();
    parent.next_u64();
    Rng c1 = parent.child(5);
    Rng c2 = Rng(9, 1).child(5);
    for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c2.next_u64());
}

TEST_CASE("distinct streams diverge")
{
    Rng a(1, 0), b(1, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("uniform01 range and mean")
{
    Rng r(123, 0);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("geometric has the right mean")
{
    Rng r(77, 0);
    const double p = 0.01;
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(r.geometric(p));
    // mean 1/p = 100, sd/sqrt(n) ~ 0.22
    CHECK(sum / n == doctest::Approx(100.0).epsilon(0.01));
    CHECK(r.geometric(1.0) == 1);
    CHECK_THROWS_AS(r.geometric(0.0), std::invalid_argument);
}

TEST_CASE("below is in range and unbiased enough")
{
    Rng r(5, 5);
    std::set<uint64_t> seen;
    for (int i = 0; i < 3000; ++i) {
        const uint64_t v = r.below(10);
        REQUIRE(v < 10);
        seen.insert(v);
    }
    CHECK(seen.size() == 10);
}
