// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/kernel.hpp>

#include <stakesim/rng.hpp>

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <set>

using namespace stakesim;

namespace {

Utxo test_utxo(Amount amount, Timestamp tx_time)
{
    Utxo u;
    u.id.tx_hash = Uint256::from_hex("11");
    u.id.output_index = 0;
    u.amount = amount;
    u.tx_time = tx_time;
    u.block_time_from = tx_time;
    u.tx_offset = 80;
    return u;
}

Uint256 random_u256(Rng& rng)
{
    Uint256 v;
    for (auto& limb : v.limbs) limb = rng.next_u64();
    return v;
}

} // namespace

TEST_CASE("kernel serialization is the documented 48-byte layout")
{
    Kernel k;
    k.n_stake_modifier = 0x0102030405060708ULL;
    k.n_time_block_from = 0x1112131415161718LL;
    k.n_tx_prev_offset = 0x2122232425262728ULL;
    k.n_tx_prev_time = 0x3132333435363738LL;
    k.n_prevout_num = 0x41424344;
    k.n_time_tx = 0x5152535455565758LL;
    uint8_t buf[48];
    serialize_kernel(k, buf);
    // Each field 8-byte little-endian, in declaration order.
    CHECK(buf[0] == 0x08);
    CHECK(buf[7] == 0x01);
    CHECK(buf[8] == 0x18);
    CHECK(buf[16] == 0x28);
    CHECK(buf[24] == 0x38);
    CHECK(buf[32] == 0x44);
    CHECK(buf[39] == 0x00); // prevout is 32-bit, upper bytes zero
    CHECK(buf[40] == 0x58);
    CHECK(buf[47] == 0x51);
}

TEST_CASE("identical kernels hash identically; hashing is sha256")
{
    Kernel k;
    k.n_stake_modifier = 7;
    k.n_time_tx = 12345;
    CHECK(kernel_hash(k) == kernel_hash(k));
    uint8_t buf[48];
    serialize_kernel(k, buf);
    CHECK(kernel_hash(k) == sha256(buf, 48)); // short path == general path
}

TEST_CASE("golden kernel vectors stay frozen")
{
    std::ifstream f(std::string(STAKESIM_FIXTURE_DIR) + "/kernel_vectors.json");
    REQUIRE(f.good());
    nlohmann::json vectors;
    f >> vectors;
    REQUIRE(vectors.is_array());
    REQUIRE(vectors.size() >= 3);
    for (const auto& v : vectors) {
        Kernel k;
        k.n_stake_modifier = v.at("modifier").get<uint64_t>();
        k.n_time_block_from = v.at("time_block_from").get<int64_t>();
        k.n_tx_prev_offset = v.at("tx_prev_offset").get<uint64_t>();
        k.n_tx_prev_time = v.at("tx_prev_time").get<int64_t>();
        k.n_prevout_num = v.at("prevout_num").get<uint32_t>();
        k.n_time_tx = v.at("time_tx").get<int64_t>();
        CHECK(kernel_hash(k).to_hex() == v.at("digest").get<std::string>());
    }
}

TEST_CASE("one-second timestamp change flips the hash")
{
    Rng rng(2024, 0);
    int collisions = 0;
    for (int i = 0; i < 10000; ++i) {
        Kernel k;
        k.n_stake_modifier = rng.next_u64();
        k.n_tx_prev_time = static_cast<Timestamp>(rng.next_u64() >> 20);
        k.n_time_tx = static_cast<Timestamp>(rng.next_u64() >> 20);
        Kernel k2 = k;
        k2.n_time_tx += 1;
        if (kernel_hash(k) == kernel_hash(k2)) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("time weight: peercoin ladder and neucoin flat")
{
    const ChainParams ppc = preset_params("peercoin");
    CHECK(time_weight(29 * SECONDS_PER_DAY, ppc) == 0.0);
    CHECK(time_weight(30 * SECONDS_PER_DAY, ppc) == 0.0);
    CHECK(time_weight(31 * SECONDS_PER_DAY, ppc) == doctest::Approx(1.0));
    CHECK(time_weight(61 * SECONDS_PER_DAY, ppc) == doctest::Approx(31.0));
    CHECK(time_weight(91 * SECONDS_PER_DAY, ppc) == doctest::Approx(60.0));
    CHECK(time_weight(200 * SECONDS_PER_DAY, ppc) == doctest::Approx(60.0));
    // Continuous in seconds.
    CHECK(time_weight(30 * SECONDS_PER_DAY + 43200, ppc) == doctest::Approx(0.5));

    const ChainParams neu = preset_params("neucoin");
    CHECK(time_weight(200 * SECONDS_PER_DAY, neu) == doctest::Approx(1.0));
    CHECK(time_weight(neu.min_stake_age, neu) == doctest::Approx(1.0));
    CHECK(time_weight(neu.min_stake_age - 1, neu) == 0.0);
}

TEST_CASE("check_stake: zero hash beats any threshold; boundary follows the inequality")
{
    ChainParams neu = preset_params("neucoin");
    const Utxo u = test_utxo(100 * COIN, 0);
    const Timestamp now = neu.min_stake_age + 10;

    // Find a kernel whose hash we then use as the exact threshold.
    Kernel k = make_kernel(u, 99, now);
    const Hash256 h = kernel_hash(k);

    Utxo unit = test_utxo(1, 0);
    Kernel uk = make_kernel(unit, 99, now);
    const Hash256 uh = kernel_hash(uk);
    Target exact{uh}; // threshold = hash * amount(1) = hash

    CHECK(check_stake(uk, exact, unit, neu) == StakeCheck::FAIL); // strict '<'
    ChainParams ppc_style = neu;
    ppc_style.stake_inequality = StakeInequality::NON_STRICT;
    CHECK(check_stake(uk, exact, unit, ppc_style) == StakeCheck::PASS); // '<='

    // A zero hash cannot be constructed, but any positive threshold above
    // the hash passes; use the max target as the stand-in for "any hash
    // wins".
    Target max_t{Uint256::max()};
    CHECK(check_stake(k, max_t, u, neu) == StakeCheck::PASS);

    // Young stake is an eligibility error, not a failed check.
    Utxo young = test_utxo(100 * COIN, now - neu.min_stake_age + 5);
    Kernel yk = make_kernel(young, 99, now);
    CHECK_THROWS_AS(check_stake(yk, max_t, young, neu), IneligibleStakeError);
}

TEST_CASE("doubling the amount doubles the per-second pass probability")
{
    // Threshold far below 2^256: compare pass counts over random hashes.
    const ChainParams neu = preset_params("neucoin");
    Target t;
    t.value.limbs = {0, 0, 0, 0x0000a00000000000ULL}; // ~ 2^255 * 4.8e-5
    const Utxo u1 = test_utxo(1, 0);
    const Utxo u2 = test_utxo(2, 0);
    const Uint256 th1 = stake_threshold(t, u1, 0, neu);
    const Uint256 th2 = stake_threshold(t, u2, 0, neu);
    Rng rng(555, 0);
    uint64_t c1 = 0, c2 = 0;
    for (int i = 0; i < 1000000; ++i) {
        const Uint256 h = random_u256(rng);
        if (h < th1) ++c1;
        if (h < th2) ++c2;
    }
    REQUIRE(c1 > 0);
    CHECK(static_cast<double>(c2) / static_cast<double>(c1) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("check monotonicity in amount")
{
    const ChainParams neu = preset_params("neucoin");
    Rng rng(808, 0);
    const Timestamp now = neu.min_stake_age;
    for (int i = 0; i < 2000; ++i) {
        Target t;
        t.value = random_u256(rng);
        t.value.limbs[3] >>= 30; // keep thresholds small enough to fail sometimes
        if (t.value.is_zero()) continue;
        const Amount a = static_cast<Amount>(1 + (rng.next_u64() & 0xffff));
        const Amount bigger = a + static_cast<Amount>(1 + (rng.next_u64() & 0xffff));
        Utxo ua = test_utxo(a, 0);
        Utxo ub = test_utxo(bigger, 0);
        ub.id = ua.id; // same kernel identity
        const Kernel k = make_kernel(ua, rng.next_u64(), now);
        if (check_stake(k, t, ua, neu) == StakeCheck::PASS)
            CHECK(check_stake(k, t, ub, neu) == StakeCheck::PASS);
    }
}

TEST_CASE("threshold saturates instead of wrapping")
{
    const ChainParams neu = preset_params("neucoin");
    Target t;
    t.value = Uint256::max();
    const Utxo u = test_utxo(1'000'000'000 * COIN, 0);
    CHECK(stake_threshold(t, u, 0, neu) == Uint256::max());
    // At saturation every hash passes.
    const Kernel k = make_kernel(u, 1, neu.min_stake_age);
    CHECK(check_stake(k, t, u, neu) == StakeCheck::PASS);
}

TEST_CASE("retarget: fixed point, stated ratio, floor, clamp")
{
    ChainParams p = preset_params("neucoin");
    p.retarget_smoothing = 100;
    Target prev;
    prev.value = Uint256(101000000ULL);

    CHECK(retarget(prev, p.block_time_target, p).value == prev.value);

    // spacing 2*tau, w=100: ratio (99 + 4) / 101
    CHECK(retarget(prev, 2 * p.block_time_target, p).value == Uint256(103000000ULL));

    // spacing -> 0 floors at (w-1)/(w+1)
    const Target floor_t = retarget(prev, 1, p);
    CHECK(floor_t.value >= Uint256(99000000ULL));
    CHECK(floor_t.value < Uint256(99003000ULL));

    // enormous spacing clamps at exactly 2x
    CHECK(retarget(prev, 1'000'000'000, p).value == Uint256(202000000ULL));

    CHECK_THROWS_AS(retarget(prev, 0, p), std::invalid_argument);
}

TEST_CASE("mine_tick: empty set, young stakes, equilibrium rate")
{
    const ChainParams neu = preset_params("neucoin");

    CHECK(mine_tick({}, 1, Target{Uint256(1)}, 0, neu).hits.empty());

    // All young: skipped without hashing.
    std::vector<Utxo> young{test_utxo(5 * COIN, 100), test_utxo(7 * COIN, 200)};
    const MineTickResult r = mine_tick(young, 1, Target{Uint256(1)}, 300, neu);
    CHECK(r.hits.empty());
    CHECK(r.hashes_evaluated == 0);
    CHECK(r.skipped_young == 2);

    // One UTXO holding the whole supply at the equilibrium target makes
    // one block per tau on average.
    const Amount supply = 1000 * COIN;
    const Target t0 = initial_target(supply, neu);
    std::vector<Utxo> all{test_utxo(supply, -neu.min_stake_age)};
    uint64_t hits = 0, hashes = 0;
    for (Timestamp now = 0; now < 100000; ++now) {
        const MineTickResult tick = mine_tick(all, 42, t0, now, neu);
        hits += tick.hits.size();
        hashes += tick.hashes_evaluated;
    }
    CHECK(hashes == 100000); // exactly one hash per utxo per second
    const double expected = 100000.0 / static_cast<double>(neu.block_time_target);
    CHECK(static_cast<double>(hits) == doctest::Approx(expected).epsilon(0.05));
}
