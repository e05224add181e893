// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/kernel.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>

namespace stakesim {

namespace mp = boost::multiprecision;

namespace {

mp::uint512_t to_uint512(const Uint256& v)
{
    mp::uint512_t r = 0;
    for (int i = 3; i >= 0; --i) {
        r <<= 64;
        r += v.limbs[i];
    }
    return r;
}

Uint256 clamp_to_uint256(const mp::uint512_t& v)
{
    static const mp::uint512_t MAX256 = (mp::uint512_t(1) << 256) - 1;
    if (v >= MAX256) return Uint256::max();
    Uint256 out;
    mp::uint512_t rest = v;
    for (int i = 0; i < 4; ++i) {
        out.limbs[i] = static_cast<uint64_t>(rest & 0xffffffffffffffffULL);
        rest >>= 64;
    }
    return out;
}

inline void put_u64(uint8_t* out, uint64_t v)
{
    for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(v >> (8 * i));
}

} // namespace

void serialize_kernel(const Kernel& k, uint8_t out[48])
{
    put_u64(out + 0, k.n_stake_modifier);
    put_u64(out + 8, static_cast<uint64_t>(k.n_time_block_from));
    put_u64(out + 16, k.n_tx_prev_offset);
    put_u64(out + 24, static_cast<uint64_t>(k.n_tx_prev_time));
    put_u64(out + 32, k.n_prevout_num);
    put_u64(out + 40, static_cast<uint64_t>(k.n_time_tx));
}

Hash256 kernel_hash(const Kernel& k)
{
    uint8_t buf[48];
    serialize_kernel(k, buf);
    return sha256_short(buf, sizeof(buf));
}

Kernel make_kernel(const Utxo& u, uint64_t stake_modifier, Timestamp now)
{
    Kernel k;
    k.n_stake_modifier = stake_modifier;
    k.n_time_block_from = u.block_time_from;
    k.n_tx_prev_offset = u.tx_offset;
    k.n_tx_prev_time = u.tx_time;
    k.n_prevout_num = u.id.output_index;
    k.n_time_tx = now;
    return k;
}

double time_weight(Seconds age, const ChainParams& params)
{
    if (age < 0) throw std::invalid_argument("time_weight: negative age");
    if (age < params.min_stake_age) return 0.0;
    if (params.coin_age_mode == CoinAgeMode::NEUCOIN_FLAT) return 1.0;
    const Seconds growth = age - params.min_stake_age;
    const double w = static_cast<double>(growth) / SECONDS_PER_DAY;
    return std::min(60.0, w);
}

Uint256 stake_threshold(const Target& target, const Utxo& utxo, Timestamp now,
                        const ChainParams& params)
{
    if (params.coin_age_mode == CoinAgeMode::NEUCOIN_FLAT)
        return mul_u64_saturating(target.value, static_cast<uint64_t>(utxo.amount));

    // Weight enters as clamped seconds over a day so the threshold stays
    // in integer arithmetic.
    mp::uint512_t prod = to_uint512(target.value);
    prod *= static_cast<uint64_t>(utxo.amount);
    Seconds age = now - utxo.tx_time;
    Seconds weight_seconds =
        std::clamp<Seconds>(age - params.min_stake_age, 0, 60 * SECONDS_PER_DAY);
    prod *= static_cast<uint64_t>(weight_seconds);
    prod /= static_cast<uint64_t>(SECONDS_PER_DAY);
    return clamp_to_uint256(prod);
}

namespace {

StakeCheck check_against_threshold(const Hash256& h, const Uint256& threshold,
                                   const ChainParams& params)
{
    const bool pass = params.stake_inequality == StakeInequality::STRICT ? h < threshold
                                                                         : h <= threshold;
    return pass ? StakeCheck::PASS : StakeCheck::FAIL;
}

} // namespace

StakeCheck check_stake(const Kernel& k, const Target& target, const Utxo& utxo,
                       const ChainParams& params)
{
    if (target.value.is_zero()) throw std::invalid_argument("check_stake: zero target");
    if (utxo.amount <= 0) throw std::invalid_argument("check_stake: non-positive amount");
    const Seconds age = k.n_time_tx - utxo.tx_time;
    if (age < params.min_stake_age)
        throw IneligibleStakeError("check_stake: stake younger than min_stake_age");

    const Uint256 threshold = stake_threshold(target, utxo, k.n_time_tx, params);
    return check_against_threshold(kernel_hash(k), threshold, params);
}

Target retarget(const Target& prev, Seconds actual_spacing, const ChainParams& params)
{
    if (actual_spacing <= 0) throw std::invalid_argument("retarget: spacing must be positive");
    const int64_t w = params.retarget_smoothing;
    const int64_t tau = params.block_time_target;
    // Spacings beyond the clamp's reach contribute nothing more.
    const Seconds spacing = std::min<Seconds>(actual_spacing, (w + 3) * tau);

    mp::uint512_t next = to_uint512(prev.value);
    next *= static_cast<uint64_t>((w - 1) * tau + 2 * spacing);
    next /= static_cast<uint64_t>((w + 1) * tau);

    const mp::uint512_t lo = to_uint512(prev.value) / 2;
    const mp::uint512_t hi = to_uint512(prev.value) * 2;
    next = std::clamp(next, lo, hi);
    if (next == 0) next = 1;
    return Target{clamp_to_uint256(next)};
}

Target initial_target(Amount total_staked, const ChainParams& params)
{
    if (total_staked <= 0) throw std::invalid_argument("initial_target: no stake");
    // 2^256 / (total_staked * tau), so that sum(target*amount)/2^256 = 1/tau.
    mp::uint512_t full = mp::uint512_t(1) << 256;
    full /= static_cast<uint64_t>(total_staked);
    full /= static_cast<uint64_t>(params.block_time_target);
    if (full == 0) full = 1;
    return Target{clamp_to_uint256(full)};
}

MineTickResult mine_tick(std::span<const Utxo> utxos, uint64_t stake_modifier,
                         const Target& target, Timestamp now, const ChainParams& params)
{
    MineTickResult res;
    for (const Utxo& u : utxos) {
        if (now - u.tx_time < params.min_stake_age) {
            ++res.skipped_young;
            continue;
        }
        const Kernel k = make_kernel(u, stake_modifier, now);
        const Uint256 threshold = stake_threshold(target, u, now, params);
        const Hash256 h = kernel_hash(k);
        ++res.hashes_evaluated;
        if (check_against_threshold(h, threshold, params) == StakeCheck::PASS)
            res.hits.push_back(StakeHit{u, k, h});
    }
    std::sort(res.hits.begin(), res.hits.end(),
              [](const StakeHit& a, const StakeHit& b) { return a.utxo.id < b.utxo.id; });
    return res;
}

} // namespace stakesim
