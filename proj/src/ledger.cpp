// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/ledger.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stakesim {

Hash256 block_hash(const Block& b)
{
    HashWriter w;
    w.u64(b.height);
    w.i64(b.timestamp);
    w.hash(b.prev);
    uint8_t kbuf[48];
    serialize_kernel(b.kernel, kbuf);
    for (uint8_t byte : kbuf) w.u32(byte); // keep kernel bytes distinct from field packing
    w.hash(b.hash_proof);
    w.u32(b.miner);
    w.hash(b.staked_utxo.tx_hash);
    w.u32(b.staked_utxo.output_index);
    w.i64(b.reward);
    w.u64(b.nonce);
    w.u64(b.spends.size());
    for (const Transfer& t : b.spends) {
        w.hash(t.from.tx_hash);
        w.u32(t.from.output_index);
        w.i64(t.to.amount);
        w.u32(t.to.owner);
    }
    return w.finalize();
}

double reward_rate(double elapsed_years, const ChainParams& params)
{
    if (elapsed_years < 0.0) throw std::invalid_argument("reward_rate: negative elapsed time");
    if (params.reward_decline_years <= 0.0) return params.reward_final_rate;
    const double t = std::min(elapsed_years, params.reward_decline_years);
    return params.reward_initial_rate -
           (params.reward_initial_rate - params.reward_final_rate) * t /
               params.reward_decline_years;
}

Amount coinstake_reward(Amount amount, double days_idle, double elapsed_years,
                        const ChainParams& params)
{
    if (days_idle < 0.0) throw std::invalid_argument("coinstake_reward: negative idle time");
    if (amount < 0) throw std::invalid_argument("coinstake_reward: negative amount");
    const double rate = reward_rate(elapsed_years, params);
    return static_cast<Amount>(
        std::floor(static_cast<double>(amount) * (days_idle / 365.0) * rate));
}

const char* reject_reason_name(RejectReason r)
{
    switch (r) {
    case RejectReason::NONE: return "NONE";
    case RejectReason::BAD_PROOF: return "BAD_PROOF";
    case RejectReason::YOUNG_STAKE: return "YOUNG_STAKE";
    case RejectReason::UNKNOWN_UTXO: return "UNKNOWN_UTXO";
    case RejectReason::BAD_REWARD: return "BAD_REWARD";
    case RejectReason::BANNED_MINER: return "BANNED_MINER";
    case RejectReason::DUPLICATE_STAKE: return "DUPLICATE_STAKE";
    }
    return "?";
}

uint64_t output_offset(uint32_t output_index)
{
    return 80 + 64ULL * output_index;
}

Utxo coinstake_output(const Hash256& bh, const Block& b, Amount staked_amount)
{
    Utxo u;
    u.id = UtxoId{bh, 0};
    u.amount = staked_amount + b.reward;
    u.tx_time = b.timestamp;
    u.block_time_from = b.timestamp;
    u.tx_offset = output_offset(0);
    u.owner = b.miner;
    return u;
}

ChainState::ChainState(const ChainParams& params, GenesisConfig genesis)
    : params_(params), genesis_time_(genesis.genesis_time)
{
    params_.validate();
    if (genesis.target.value.is_zero())
        throw std::invalid_argument("ChainState: zero genesis target");

    auto entry = std::make_unique<Entry>();
    entry->block.height = 0;
    entry->block.timestamp = genesis.genesis_time;
    HashWriter w;
    w.i64(genesis.genesis_time);
    for (const Utxo& u : genesis.utxos) {
        if (u.amount <= 0) throw std::invalid_argument("ChainState: non-positive genesis amount");
        if (utxo_.count(u.id)) throw std::invalid_argument("ChainState: duplicate genesis utxo id");
        utxo_.emplace(u.id, u);
        w.hash(u.id.tx_hash);
        w.u32(u.id.output_index);
        w.i64(u.amount);
        w.u32(u.owner);
    }
    entry->hash = w.finalize();
    entry->block.hash_proof = entry->hash;
    entry->height = 0;
    entry->target = genesis.target;
    entry->next_target = genesis.target;
    entry->arrival_seq = arrivals_++;
    entry->active = true;
    genesis_ = entry.get();
    tip_ = entry.get();
    leaves_.insert(entry.get());
    entries_.emplace(entry->hash, std::move(entry));
}

const ChainState::Entry* ChainState::find(const Hash256& h) const
{
    auto it = entries_.find(h);
    return it == entries_.end() ? nullptr : it->second.get();
}

std::optional<Utxo> ChainState::find_utxo(const UtxoId& id) const
{
    auto it = utxo_.find(id);
    if (it == utxo_.end()) return std::nullopt;
    return it->second;
}

Amount ChainState::total_supply() const
{
    Amount total = 0;
    for (const auto& [id, u] : utxo_) total += u.amount;
    return total;
}

uint64_t ChainState::modifier_for_interval(Timestamp interval_start, const Entry* parent) const
{
    if (interval_start < genesis_time_ + params_.selection_interval)
        return 0; // bootstrap: not one full selection interval of history yet

    // Anchor: last branch block strictly before the interval start. Two
    // branches sharing that prefix share the whole modifier sequence.
    const Entry* anchor = parent;
    while (anchor->parent && anchor->block.timestamp >= interval_start) anchor = anchor->parent;

    const auto key = std::make_pair(interval_start, anchor->hash);
    auto cached = modifier_cache_.find(key);
    if (cached != modifier_cache_.end()) return cached->second;

    const uint64_t prev =
        modifier_for_interval(interval_start - params_.modifier_interval, anchor);

    const Timestamp from =
        std::max(genesis_time_, interval_start - 2 * params_.selection_interval);
    std::vector<SourceBlockRef> chain;
    for (const Entry* e = anchor; e; e = e->parent) {
        if (e->block.timestamp < from) break;
        chain.push_back(SourceBlockRef{e->hash, e->block.hash_proof, e->block.timestamp});
        if (!e->parent) break;
    }
    std::reverse(chain.begin(), chain.end());

    ModifierSchedule sched = generate_modifier(chain, from, interval_start, params_, prev);
    modifier_cache_.emplace(key, sched.value);
    return sched.value;
}

uint64_t ChainState::modifier_for_stake(const Utxo& utxo, Timestamp now, const Entry* parent) const
{
    if (!parent) parent = tip_;
    if (params_.modifier_mode == ModifierMode::DYNAMIC) {
        return modifier_for_interval(interval_start_for(now, params_), parent);
    }
    // STATIC: permanently the modifier of the interval one selection
    // interval after the stake's first confirmation.
    const Timestamp seeded_at = utxo.block_time_from + params_.selection_interval;
    if (now < seeded_at)
        throw ModifierNotReadyError("modifier_for_stake: selection interval still open");
    return modifier_for_interval(interval_start_for(seeded_at, params_), parent);
}

RejectReason ChainState::validate_against_view(
    const Block& b, const Entry* parent,
    const std::unordered_map<UtxoId, Utxo, UtxoIdHasher>& view) const
{
    if (banned_.count(b.miner)) return RejectReason::BANNED_MINER;
    if (b.timestamp <= parent->block.timestamp) return RejectReason::BAD_PROOF;
    if (b.height != parent->height + 1) return RejectReason::BAD_PROOF;
    if (b.kernel.n_time_tx != b.timestamp) return RejectReason::BAD_PROOF;

    const Hash256 bh = block_hash(b);
    auto seen = seen_proofs_.find(b.hash_proof);
    if (seen != seen_proofs_.end() && seen->second != bh) return RejectReason::DUPLICATE_STAKE;

    auto it = view.find(b.staked_utxo);
    if (it == view.end()) return RejectReason::UNKNOWN_UTXO;
    const Utxo& stake = it->second;

    if (b.timestamp - stake.tx_time < params_.min_stake_age) return RejectReason::YOUNG_STAKE;

    // Kernel must describe the staked output exactly.
    if (b.kernel.n_time_block_from != stake.block_time_from ||
        b.kernel.n_tx_prev_offset != stake.tx_offset ||
        b.kernel.n_tx_prev_time != stake.tx_time ||
        b.kernel.n_prevout_num != stake.id.output_index)
        return RejectReason::BAD_PROOF;

    uint64_t expected_modifier;
    try {
        expected_modifier = modifier_for_stake(stake, b.timestamp, parent);
    } catch (const ModifierNotReadyError&) {
        return RejectReason::BAD_PROOF;
    }
    if (b.kernel.n_stake_modifier != expected_modifier) return RejectReason::BAD_PROOF;

    if (b.hash_proof != kernel_hash(b.kernel)) return RejectReason::BAD_PROOF;

    try {
        if (check_stake(b.kernel, parent->next_target, stake, params_) != StakeCheck::PASS)
            return RejectReason::BAD_PROOF;
    } catch (const IneligibleStakeError&) {
        return RejectReason::YOUNG_STAKE;
    }

    const double days_idle =
        static_cast<double>(b.timestamp - stake.tx_time) / SECONDS_PER_DAY;
    const double elapsed_years =
        static_cast<double>(b.timestamp - genesis_time_) / SECONDS_PER_YEAR;
    if (b.reward != coinstake_reward(stake.amount, days_idle, elapsed_years, params_))
        return RejectReason::BAD_REWARD;

    // Transfers: inputs must exist (and not be the stake), outputs must
    // follow the derived layout and conserve value.
    Amount in_total = 0, out_total = 0;
    for (size_t i = 0; i < b.spends.size(); ++i) {
        const Transfer& t = b.spends[i];
        if (t.from == b.staked_utxo) return RejectReason::UNKNOWN_UTXO;
        auto fit = view.find(t.from);
        if (fit == view.end()) return RejectReason::UNKNOWN_UTXO;
        for (size_t j = 0; j < i; ++j)
            if (b.spends[j].from == t.from) return RejectReason::UNKNOWN_UTXO;
        const Utxo& out = t.to;
        if (out.amount <= 0 || out.id.tx_hash != bh ||
            out.id.output_index != static_cast<uint32_t>(i + 1) ||
            out.tx_time != b.timestamp || out.block_time_from != b.timestamp ||
            out.tx_offset != output_offset(out.id.output_index))
            return RejectReason::BAD_PROOF;
        in_total += fit->second.amount;
        out_total += out.amount;
    }
    if (in_total != out_total) return RejectReason::BAD_PROOF;

    return RejectReason::NONE;
}

RejectReason ChainState::validate_block(const Block& b) const
{
    const Entry* parent = find(b.prev);
    if (!parent) throw std::invalid_argument("validate_block: unknown parent (orphan)");

    // Build the UTXO view at the parent by replaying the difference from
    // the active tip. Undo data exists for every connected block.
    auto view = utxo_;
    const Entry* anc = common_ancestor(tip_, parent);
    for (const Entry* e = tip_; e != anc; e = e->parent) {
        for (const UtxoId& id : e->created) view.erase(id);
        for (const Utxo& u : e->consumed) view.emplace(u.id, u);
    }
    std::vector<const Entry*> forward;
    for (const Entry* e = parent; e != anc; e = e->parent) forward.push_back(e);
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
        const Entry* e = *it;
        if (!e->have_undo)
            throw std::invalid_argument("validate_block: parent branch never connected");
        for (const Utxo& u : e->consumed) view.erase(u.id);
        const Hash256 bh = e->hash;
        auto stake = e->block.staked_utxo;
        (void)stake;
        for (const UtxoId& id : e->created) {
            // Recreate outputs exactly as apply_entry does.
            if (id.output_index == 0) {
                Amount staked_amount = 0;
                for (const Utxo& u : e->consumed)
                    if (u.id == e->block.staked_utxo) staked_amount = u.amount;
                view.emplace(id, coinstake_output(bh, e->block, staked_amount));
            } else {
                const Transfer& t = e->block.spends.at(id.output_index - 1);
                view.emplace(id, t.to);
            }
        }
    }
    return validate_against_view(b, parent, view);
}

void ChainState::apply_entry(Entry* e)
{
    if (!e->have_undo) {
        e->consumed.clear();
        e->created.clear();
        e->consumed.push_back(utxo_.at(e->block.staked_utxo));
        for (const Transfer& t : e->block.spends) e->consumed.push_back(utxo_.at(t.from));
        e->created.push_back(UtxoId{e->hash, 0});
        for (const Transfer& t : e->block.spends) e->created.push_back(t.to.id);
        e->have_undo = true;
    }
    Amount staked_amount = 0;
    for (const Utxo& u : e->consumed) {
        if (u.id == e->block.staked_utxo) staked_amount = u.amount;
        utxo_.erase(u.id);
    }
    utxo_.emplace(UtxoId{e->hash, 0}, coinstake_output(e->hash, e->block, staked_amount));
    for (const Transfer& t : e->block.spends) utxo_.emplace(t.to.id, t.to);
    e->active = true;
}

void ChainState::undo_entry(Entry* e)
{
    for (const UtxoId& id : e->created) utxo_.erase(id);
    for (const Utxo& u : e->consumed) utxo_.emplace(u.id, u);
    e->active = false;
}

bool ChainState::connect_entry(Entry* e)
{
    if (e->invalid || e->removed) return false;
    // A block that connected once on its (fixed) parent branch stays valid
    // there; re-applies during reorgs skip revalidation.
    if (!e->have_undo) {
        RejectReason r = validate_against_view(e->block, e->parent, utxo_);
        if (r != RejectReason::NONE) {
            e->invalid = true;
            e->fail_reason = r;
            return false;
        }
    }
    apply_entry(e);
    return true;
}

const ChainState::Entry* ChainState::common_ancestor(const Entry* a, const Entry* b) const
{
    while (a->height > b->height) a = a->parent;
    while (b->height > a->height) b = b->parent;
    while (a != b) {
        a = a->parent;
        b = b->parent;
    }
    return a;
}

bool ChainState::path_clean(const Entry* leaf) const
{
    // The active branch is clean by construction (damage unwinds it
    // immediately), so the walk stops at the first active ancestor.
    for (const Entry* e = leaf; e && !e->active; e = e->parent)
        if (e->removed || e->invalid) return false;
    return true;
}

void ChainState::activate_best_chain()
{
    // A ban may have landed on the active branch; unwind past it first.
    if (damaged_) {
        Entry* stop = damaged_->parent;
        while (tip_ != stop) {
            undo_entry(tip_);
            tip_ = tip_->parent;
        }
        leaves_.insert(tip_);
        damaged_ = nullptr;
    }

    for (;;) {
        // Best candidate: deepest clean leaf, earliest-arrived on ties.
        Entry* best = nullptr;
        std::vector<Entry*> dead;
        for (Entry* leaf : leaves_) {
            if (leaf != tip_ && !path_clean(leaf)) {
                dead.push_back(leaf);
                continue;
            }
            best = leaf;
            break;
        }
        for (Entry* d : dead) leaves_.erase(d);
        // First-seen tie-break: only a strictly taller branch displaces
        // the current tip.
        if (!best || best == tip_ || best->height <= tip_->height) return;

        const Entry* anc = common_ancestor(tip_, best);
        const uint64_t depth = tip_->height - anc->height;

        while (tip_ != anc) {
            undo_entry(tip_);
            tip_ = tip_->parent;
        }
        std::vector<Entry*> forward;
        for (Entry* e = best; e != anc; e = e->parent) forward.push_back(e);
        bool failed = false;
        for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
            if (!connect_entry(*it)) {
                failed = true;
                break;
            }
            tip_ = *it;
        }
        if (!failed) {
            if (depth > 0) {
                ++reorgs_;
                max_reorg_depth_ = std::max(max_reorg_depth_, depth);
                ++reorg_depth_hist_[std::min<uint64_t>(depth, 63)];
            }
            return;
        }
        leaves_.insert(tip_); // the partial branch becomes a candidate
    }
}

void ChainState::insert_entry(std::unique_ptr<Entry> e)
{
    Entry* raw = e.get();
    entries_.emplace(raw->hash, std::move(e));
    leaves_.erase(raw->parent);
    leaves_.insert(raw);
}

void ChainState::punish(NodeId miner)
{
    banned_.insert(miner);
    for (auto& [h, entry] : entries_) {
        if (!entry->parent || entry->block.miner != miner) continue;
        entry->removed = true;
        if (entry->active &&
            (!damaged_ || entry->height < damaged_->height))
            damaged_ = entry.get();
    }
}

ReceiveResult ChainState::on_block_received(const Block& b, Timestamp now)
{
    ReceiveResult res;
    const Hash256 h = block_hash(b);
    if (entries_.count(h)) {
        res.outcome = ReceiveOutcome::DUPLICATE_BLOCK;
        return res; // idempotent
    }

    auto pit = entries_.find(b.prev);
    if (pit == entries_.end()) {
        orphans_.emplace(b.prev, Orphan{b, now});
        res.outcome = ReceiveOutcome::ORPHANED;
        return res;
    }
    Entry* parent = pit->second.get();

    // Duplicate-stake detection: same proof in a different block.
    auto seen = seen_proofs_.find(b.hash_proof);
    if (seen != seen_proofs_.end() && seen->second != h) {
        res.outcome = ReceiveOutcome::REJECTED;
        res.reason = RejectReason::DUPLICATE_STAKE;
        if (params_.duplicate_stake_policy == DuplicateStakePolicy::PUNITIVE) {
            res.punished = true;
            const Entry* first = find(seen->second);
            const Entry* old_tip = tip_;
            punish(b.miner);
            if (first && first->block.miner != b.miner) punish(first->block.miner);
            activate_best_chain();
            res.reorged = tip_ != old_tip;
        }
        return res;
    }

    if (banned_.count(b.miner)) {
        res.outcome = ReceiveOutcome::REJECTED;
        res.reason = RejectReason::BANNED_MINER;
        return res;
    }

    auto entry = std::make_unique<Entry>();
    entry->block = b;
    entry->hash = h;
    entry->parent = parent;
    entry->height = parent->height + 1;
    entry->target = parent->next_target;
    entry->next_target =
        retarget(parent->next_target,
                 std::max<Seconds>(1, b.timestamp - parent->block.timestamp), params_);
    entry->arrival_seq = arrivals_++;
    Entry* raw = entry.get();
    insert_entry(std::move(entry));
    seen_proofs_.emplace(b.hash_proof, h);

    const Entry* old_tip = tip_;
    activate_best_chain();
    res.reorged = tip_ != old_tip && common_ancestor(old_tip, tip_) != old_tip;

    if (raw->invalid) {
        res.outcome = ReceiveOutcome::REJECTED;
        res.reason = raw->fail_reason;
        res.relay = false;
    } else {
        res.outcome = ReceiveOutcome::ACCEPTED;
        res.relay = true;
    }

    try_attach_orphans(h, now);
    return res;
}

void ChainState::try_attach_orphans(const Hash256& parent_hash, Timestamp now)
{
    auto range = orphans_.equal_range(parent_hash);
    if (range.first == range.second) return;
    std::vector<Block> ready;
    for (auto it = range.first; it != range.second; ++it) ready.push_back(it->second.block);
    orphans_.erase(range.first, range.second);
    for (const Block& b : ready) on_block_received(b, now);
}

void ChainState::expire_orphans(Timestamp now)
{
    const Seconds ttl = 2 * params_.selection_interval;
    for (auto it = orphans_.begin(); it != orphans_.end();) {
        if (now - it->second.received_at > ttl)
            it = orphans_.erase(it);
        else
            ++it;
    }
}

const ChainState::Entry* ChainState::fork_choice()
{
    activate_best_chain();
    return tip_;
}

std::vector<const ChainState::Entry*> ChainState::main_chain() const
{
    std::vector<const Entry*> chain;
    for (const Entry* e = tip_; e; e = e->parent) chain.push_back(e);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

std::vector<ModifierSchedule> ChainState::modifier_trace(Timestamp up_to) const
{
    std::vector<ModifierSchedule> out;
    const Timestamp first =
        interval_start_for(genesis_time_ + params_.selection_interval, params_) +
        params_.modifier_interval;
    for (Timestamp is = first; is <= up_to; is += params_.modifier_interval) {
        if (is < genesis_time_ + params_.selection_interval) continue;
        const Timestamp from =
            std::max(genesis_time_, is - 2 * params_.selection_interval);
        std::vector<SourceBlockRef> chain;
        for (const Entry* e = tip_; e; e = e->parent) {
            if (e->block.timestamp < from) break;
            if (e->block.timestamp >= is) continue;
            chain.push_back(SourceBlockRef{e->hash, e->block.hash_proof, e->block.timestamp});
        }
        std::reverse(chain.begin(), chain.end());
        const uint64_t prev = modifier_for_interval(is - params_.modifier_interval, tip_);
        out.push_back(generate_modifier(chain, from, is, params_, prev));
    }
    return out;
}

std::string ChainState::dump_jsonl() const
{
    std::string out;
    for (const Entry* e : main_chain()) {
        nlohmann::json j;
        j["v"] = 1;
        j["hash"] = e->hash.to_hex();
        j["height"] = e->height;
        j["time"] = e->block.timestamp;
        j["prev"] = e->parent ? e->parent->hash.to_hex() : "";
        j["miner"] = e->block.miner;
        j["proof"] = e->block.hash_proof.to_hex();
        j["modifier"] = e->block.kernel.n_stake_modifier;
        j["staked_tx"] = e->block.staked_utxo.tx_hash.to_hex();
        j["staked_n"] = e->block.staked_utxo.output_index;
        j["reward"] = e->block.reward;
        j["target"] = e->target.value.to_hex();
        out += j.dump();
        out += "\n";
    }
    return out;
}

Block make_block(const ChainState& chain, const ChainState::Entry* parent, const StakeHit& hit,
                 NodeId miner, std::vector<Transfer> spends, uint64_t nonce)
{
    Block b;
    b.height = parent->height + 1;
    b.timestamp = hit.kernel.n_time_tx;
    b.prev = parent->hash;
    b.kernel = hit.kernel;
    b.hash_proof = hit.proof;
    b.miner = miner;
    b.staked_utxo = hit.utxo.id;
    const double days_idle =
        static_cast<double>(b.timestamp - hit.utxo.tx_time) / SECONDS_PER_DAY;
    const double elapsed_years =
        static_cast<double>(b.timestamp - chain.genesis_time()) / SECONDS_PER_YEAR;
    b.reward = coinstake_reward(hit.utxo.amount, days_idle, elapsed_years, chain.params());
    b.nonce = nonce;
    b.spends = std::move(spends);
    // Transfer outputs carry ids derived from the final block hash; fill
    // them in after all other fields are fixed.
    if (!b.spends.empty()) {
        const Hash256 bh = block_hash(b);
        for (size_t i = 0; i < b.spends.size(); ++i) {
            Utxo& out = b.spends[i].to;
            out.id = UtxoId{bh, static_cast<uint32_t>(i + 1)};
            out.tx_time = b.timestamp;
            out.block_time_from = b.timestamp;
            out.tx_offset = output_offset(out.id.output_index);
        }
    }
    return b;
}

} // namespace stakesim
