// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/chainparams.hpp>

#include <doctest.h>

using namespace stakesim;

TEST_CASE("presets validate and carry the documented values")
{
    const ChainParams neu = preset_params("neucoin");
    CHECK(neu.block_time_target == 60);
    CHECK(neu.min_stake_age == Seconds{138240});      // 1.6 days
    CHECK(neu.modifier_interval == Seconds{12000});   // 200 minutes
    CHECK(neu.selection_interval == Seconds{138240}); // 1.6 days
    CHECK(neu.stake_inequality == StakeInequality::STRICT);
    CHECK(neu.coin_age_mode == CoinAgeMode::NEUCOIN_FLAT);
    CHECK(neu.modifier_mode == ModifierMode::DYNAMIC);
    CHECK(neu.duplicate_stake_policy == DuplicateStakePolicy::PUNITIVE);
    CHECK(neu.reward_initial_rate == doctest::Approx(1.0));
    CHECK(neu.reward_final_rate == doctest::Approx(0.06));
    CHECK(neu.reward_decline_years == doctest::Approx(10.0));

    const ChainParams ppc = preset_params("peercoin");
    CHECK(ppc.block_time_target == 600);
    CHECK(ppc.min_stake_age == 30 * SECONDS_PER_DAY);
    CHECK(ppc.modifier_interval == Seconds{21600});
    CHECK(ppc.selection_interval == 9 * SECONDS_PER_DAY);
    CHECK(ppc.stake_inequality == StakeInequality::NON_STRICT);
    CHECK(ppc.coin_age_mode == CoinAgeMode::PEERCOIN_TIME_WEIGHT);
    CHECK(ppc.modifier_mode == ModifierMode::STATIC);
    CHECK(ppc.duplicate_stake_policy == DuplicateStakePolicy::DETECT_ONLY);
    CHECK(ppc.reward_initial_rate == doctest::Approx(0.01));

    CHECK_THROWS_AS(preset_params("dogecoin"), std::invalid_argument);
}

TEST_CASE("invariants rejected")
{
    ChainParams p = preset_params("neucoin");
    p.min_stake_age = p.selection_interval - 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = preset_params("neucoin");
    p.modifier_interval = p.selection_interval + 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = preset_params("neucoin");
    p.reward_final_rate = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = preset_params("neucoin");
    p.reward_final_rate = p.reward_initial_rate + 0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("json round trip")
{
    ChainParams p = preset_params("peercoin");
    p.retarget_smoothing = 42;
    const ChainParams q = ChainParams::from_json(p.to_json());
    CHECK(q.block_time_target == p.block_time_target);
    CHECK(q.min_stake_age == p.min_stake_age);
    CHECK(q.modifier_interval == p.modifier_interval);
    CHECK(q.selection_interval == p.selection_interval);
    CHECK(q.coin_age_mode == p.coin_age_mode);
    CHECK(q.modifier_mode == p.modifier_mode);
    CHECK(q.stake_inequality == p.stake_inequality);
    CHECK(q.duplicate_stake_policy == p.duplicate_stake_policy);
    CHECK(q.window_law == p.window_law);
    CHECK(q.retarget_smoothing == 42);
}

TEST_CASE("json preset base plus override")
{
    const ChainParams p =
        ChainParams::from_json(R"({"preset":"neucoin","selection_interval_s":86400})");
    CHECK(p.selection_interval == Seconds{86400});
    CHECK(p.block_time_target == 60);
    CHECK_THROWS_AS(ChainParams::from_json("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(ChainParams::from_json(R"({"coin_age_mode":"bogus"})"),
                    std::invalid_argument);
}
