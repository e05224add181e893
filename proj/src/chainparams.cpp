// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/chainparams.hpp>

#include <json.hpp>

#include <stdexcept>

namespace stakesim {

namespace {

const char* coin_age_name(CoinAgeMode m)
{
    return m == CoinAgeMode::PEERCOIN_TIME_WEIGHT ? "peercoin_time_weight" : "neucoin_flat";
}
const char* modifier_name(ModifierMode m)
{
    return m == ModifierMode::STATIC ? "static" : "dynamic";
}
const char* inequality_name(StakeInequality m)
{
    return m == StakeInequality::NON_STRICT ? "non_strict" : "strict";
}
const char* duplicate_name(DuplicateStakePolicy m)
{
    return m == DuplicateStakePolicy::DETECT_ONLY ? "detect_only" : "punitive";
}
const char* window_law_name(WindowLaw m)
{
    return m == WindowLaw::LINEAR ? "linear" : "harmonic_sections";
}

template <typename T>
T enum_from(const std::string& s, std::initializer_list<std::pair<const char*, T>> table,
            const char* field)
{
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw std::invalid_argument(std::string("ChainParams: bad value for ") + field + ": " + s);
}

} // namespace

void ChainParams::validate() const
{
    if (block_time_target < 1)
        throw std::invalid_argument("ChainParams: block_time_target must be >= 1 second");
    if (modifier_interval < 1 || selection_interval < 1 || min_stake_age < 1)
        throw std::invalid_argument("ChainParams: intervals must be positive");
    // The protocol needs stakes to be unable to mine before the modifier
    // that will govern them is seeded; equality is permitted because the
    // neucoin parameters set both spans to 1.6 days.
    if (min_stake_age < selection_interval)
        throw std::invalid_argument("ChainParams: min_stake_age must be >= selection_interval");
    if (modifier_interval > selection_interval)
        throw std::invalid_argument("ChainParams: modifier_interval must be <= selection_interval");
    if (modifier_bits < 1 || modifier_bits > 64)
        throw std::invalid_argument("ChainParams: modifier_bits outside [1,64]");
    if (!(reward_final_rate > 0.0) || reward_final_rate > reward_initial_rate)
        throw std::invalid_argument("ChainParams: need 0 < reward_final_rate <= reward_initial_rate");
    if (reward_decline_years < 0.0)
        throw std::invalid_argument("ChainParams: reward_decline_years must be >= 0");
    if (retarget_smoothing < 2)
        throw std::invalid_argument("ChainParams: retarget_smoothing must be >= 2");
}

std::string ChainParams::to_json() const
{
    nlohmann::json j;
    j["block_time_target_s"] = block_time_target;
    j["min_stake_age_s"] = min_stake_age;
    j["modifier_interval_s"] = modifier_interval;
    j["selection_interval_s"] = selection_interval;
    j["modifier_bits"] = modifier_bits;
    j["coin_age_mode"] = coin_age_name(coin_age_mode);
    j["modifier_mode"] = modifier_name(modifier_mode);
    j["stake_inequality"] = inequality_name(stake_inequality);
    j["duplicate_stake_policy"] = duplicate_name(duplicate_stake_policy);
    j["window_law"] = window_law_name(window_law);
    j["reward_initial_rate"] = reward_initial_rate;
    j["reward_final_rate"] = reward_final_rate;
    j["reward_decline_years"] = reward_decline_years;
    j["retarget_smoothing"] = retarget_smoothing;
    return j.dump(2);
}

ChainParams ChainParams::from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("ChainParams: JSON parse error: ") + e.what());
    }
    ChainParams p;
    if (j.contains("preset")) p = preset_params(j.at("preset").get<std::string>());
    auto get_i64 = [&](const char* key, Seconds& out) {
        if (j.contains(key)) out = j.at(key).get<int64_t>();
    };
    get_i64("block_time_target_s", p.block_time_target);
    get_i64("min_stake_age_s", p.min_stake_age);
    get_i64("modifier_interval_s", p.modifier_interval);
    get_i64("selection_interval_s", p.selection_interval);
    if (j.contains("modifier_bits")) p.modifier_bits = j.at("modifier_bits").get<int>();
    if (j.contains("coin_age_mode"))
        p.coin_age_mode = enum_from<CoinAgeMode>(
            j.at("coin_age_mode").get<std::string>(),
            {{"peercoin_time_weight", CoinAgeMode::PEERCOIN_TIME_WEIGHT},
             {"neucoin_flat", CoinAgeMode::NEUCOIN_FLAT}},
            "coin_age_mode");
    if (j.contains("modifier_mode"))
        p.modifier_mode = enum_from<ModifierMode>(
            j.at("modifier_mode").get<std::string>(),
            {{"static", ModifierMode::STATIC}, {"dynamic", ModifierMode::DYNAMIC}},
            "modifier_mode");
    if (j.contains("stake_inequality"))
        p.stake_inequality = enum_from<StakeInequality>(
            j.at("stake_inequality").get<std::string>(),
            {{"non_strict", StakeInequality::NON_STRICT}, {"strict", StakeInequality::STRICT}},
            "stake_inequality");
    if (j.contains("duplicate_stake_policy"))
        p.duplicate_stake_policy = enum_from<DuplicateStakePolicy>(
            j.at("duplicate_stake_policy").get<std::string>(),
            {{"detect_only", DuplicateStakePolicy::DETECT_ONLY},
             {"punitive", DuplicateStakePolicy::PUNITIVE}},
            "duplicate_stake_policy");
    if (j.contains("window_law"))
        p.window_law = enum_from<WindowLaw>(
            j.at("window_law").get<std::string>(),
            {{"linear", WindowLaw::LINEAR}, {"harmonic_sections", WindowLaw::HARMONIC_SECTIONS}},
            "window_law");
    if (j.contains("reward_initial_rate")) p.reward_initial_rate = j.at("reward_initial_rate").get<double>();
    if (j.contains("reward_final_rate")) p.reward_final_rate = j.at("reward_final_rate").get<double>();
    if (j.contains("reward_decline_years")) p.reward_decline_years = j.at("reward_decline_years").get<double>();
    if (j.contains("retarget_smoothing")) p.retarget_smoothing = j.at("retarget_smoothing").get<int>();
    p.validate();
    return p;
}

ChainParams preset_params(const std::string& name)
{
    ChainParams p;
    if (name == "neucoin") {
        // Defaults above are the neucoin preset.
    } else if (name == "peercoin") {
        p.block_time_target = 600;
        p.min_stake_age = 30 * SECONDS_PER_DAY;
        p.modifier_interval = 6 * 60 * 60;
        p.selection_interval = 9 * SECONDS_PER_DAY;
        p.coin_age_mode = CoinAgeMode::PEERCOIN_TIME_WEIGHT;
        p.modifier_mode = ModifierMode::STATIC;
        p.stake_inequality = StakeInequality::NON_STRICT;
        p.duplicate_stake_policy = DuplicateStakePolicy::DETECT_ONLY;
        p.window_law = WindowLaw::HARMONIC_SECTIONS;
        p.reward_initial_rate = 0.01;
        p.reward_final_rate = 0.01;
        p.reward_decline_years = 0.0;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    p.validate();
    return p;
}

} // namespace stakesim
