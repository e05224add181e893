// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_LEDGER_HPP
#define STAKESIM_LEDGER_HPP

#include <stakesim/chainparams.hpp>
#include <stakesim/kernel.hpp>
#include <stakesim/modifier.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace stakesim {

struct Transfer {
    UtxoId from;
    Utxo to;
};

struct Block {
    uint64_t height = 0;
    Timestamp timestamp = 0;
    Hash256 prev;
    Kernel kernel;
    Hash256 hash_proof;   // kernel hash that won the stake check
    NodeId miner = 0;
    UtxoId staked_utxo;
    Amount reward = 0;
    std::vector<Transfer> spends;
    uint64_t nonce = 0;   // free field; grinding experiments increment it
};

Hash256 block_hash(const Block& b);

// Annual reward rate after `elapsed_years`: linear decline from the initial
// to the final rate over reward_decline_years, constant afterwards.
double reward_rate(double elapsed_years, const ChainParams& params);

// balance * days_idle/365 * rate, floored to integer units.
Amount coinstake_reward(Amount amount, double days_idle, double elapsed_years,
                        const ChainParams& params);

enum class RejectReason {
    NONE,
    BAD_PROOF,
    YOUNG_STAKE,
    UNKNOWN_UTXO,
    BAD_REWARD,
    BANNED_MINER,
    DUPLICATE_STAKE,
};

const char* reject_reason_name(RejectReason r);

enum class ReceiveOutcome {
    ACCEPTED,          // entered the tree (not necessarily the best chain)
    DUPLICATE_BLOCK,   // same hash seen before; no-op
    ORPHANED,          // parent unknown; pooled
    REJECTED,
};

struct ReceiveResult {
    ReceiveOutcome outcome = ReceiveOutcome::REJECTED;
    RejectReason reason = RejectReason::NONE;
    bool relay = false;
    bool reorged = false;
    bool punished = false; // a duplicate-proof ban fired
};

struct GenesisConfig {
    Timestamp genesis_time = 0;
    std::vector<Utxo> utxos;   // ids must be distinct, amounts positive
    Target target;             // initial difficulty target
};

// Per-node chain state: fork tree, longest-chain fork choice with
// first-seen tie-break, UTXO tracking with undo, duplicate-stake records
// and the punitive ban set.
class ChainState {
public:
    ChainState(const ChainParams& params, GenesisConfig genesis);

    // Not copyable (entries hold parent pointers); snapshot via dump.
    ChainState(const ChainState&) = delete;
    ChainState& operator=(const ChainState&) = delete;

    struct Entry {
        Block block;
        Hash256 hash;
        Entry* parent = nullptr;
        uint64_t height = 0;
        Target target;        // target this block had to satisfy
        Target next_target;   // target for its children
        uint64_t arrival_seq = 0;
        bool removed = false; // dropped by a punitive ban
        bool invalid = false; // failed connect-time validation
        bool active = false;  // currently on the tip branch
        RejectReason fail_reason = RejectReason::NONE;
        bool have_undo = false;
        std::vector<Utxo> consumed;   // undo data, filled at first connect
        std::vector<UtxoId> created;
    };

    const ChainParams& params() const { return params_; }
    Timestamp genesis_time() const { return genesis_time_; }
    const Entry* genesis() const { return genesis_; }
    const Entry* tip() const { return tip_; }
    const Entry* find(const Hash256& h) const;

    // Full validation of a block against its parent branch, without
    // mutating state. Returns NONE when the block would be accepted.
    RejectReason validate_block(const Block& b) const;

    // State transition + relay decision; runs duplicate-stake detection,
    // validation and fork choice.
    ReceiveResult on_block_received(const Block& b, Timestamp now = 0);

    // Re-runs fork choice; returns the tip entry.
    const Entry* fork_choice();

    const std::unordered_map<UtxoId, Utxo, UtxoIdHasher>& utxo_set() const { return utxo_; }
    std::optional<Utxo> find_utxo(const UtxoId& id) const;
    Amount total_supply() const;

    bool is_banned(NodeId miner) const { return banned_.count(miner) != 0; }
    const std::set<NodeId>& banned_miners() const { return banned_; }

    // Stake modifier governing a stake mined at `now` on top of `parent`
    // (defaults to the tip). STATIC mode throws ModifierNotReadyError until
    // one selection interval has passed since the stake's confirmation.
    uint64_t modifier_for_stake(const Utxo& utxo, Timestamp now,
                                const Entry* parent = nullptr) const;

    // Modifier sequence audit over the main chain.
    std::vector<ModifierSchedule> modifier_trace(Timestamp up_to) const;

    // Main chain, genesis first.
    std::vector<const Entry*> main_chain() const;

    // One JSON object per line, schema version 1.
    std::string dump_jsonl() const;

    // Drops orphans older than 2 * selection_interval.
    void expire_orphans(Timestamp now);

    uint64_t reorg_count() const { return reorgs_; }
    uint64_t max_reorg_depth() const { return max_reorg_depth_; }
    const std::array<uint64_t, 64>& reorg_depth_hist() const { return reorg_depth_hist_; }

private:
    struct LeafOrder {
        bool operator()(const Entry* a, const Entry* b) const
        {
            if (a->height != b->height) return a->height > b->height;
            if (a->arrival_seq != b->arrival_seq) return a->arrival_seq < b->arrival_seq;
            return a->hash < b->hash;
        }
    };

    RejectReason validate_against_view(
        const Block& b, const Entry* parent,
        const std::unordered_map<UtxoId, Utxo, UtxoIdHasher>& view) const;
    void apply_entry(Entry* e);
    void undo_entry(Entry* e);
    bool connect_entry(Entry* e); // validate (first time) + apply
    void activate_best_chain();
    const Entry* common_ancestor(const Entry* a, const Entry* b) const;
    bool path_clean(const Entry* leaf) const;
    void insert_entry(std::unique_ptr<Entry> e);
    void punish(NodeId miner);
    void try_attach_orphans(const Hash256& parent_hash, Timestamp now);
    uint64_t modifier_for_interval(Timestamp interval_start, const Entry* parent) const;

    ChainParams params_;
    Timestamp genesis_time_;
    std::unordered_map<Hash256, std::unique_ptr<Entry>, Uint256Hasher> entries_;
    Entry* genesis_ = nullptr;
    Entry* tip_ = nullptr;
    std::set<Entry*, LeafOrder> leaves_;
    std::unordered_map<UtxoId, Utxo, UtxoIdHasher> utxo_;
    std::unordered_map<Hash256, Hash256, Uint256Hasher> seen_proofs_; // proof -> first block
    std::set<NodeId> banned_;
    uint64_t arrivals_ = 0;
    uint64_t reorgs_ = 0;
    uint64_t max_reorg_depth_ = 0;
    std::array<uint64_t, 64> reorg_depth_hist_{};
    Entry* damaged_ = nullptr; // lowest active entry hit by a ban

    struct Orphan {
        Block block;
        Timestamp received_at;
    };
    std::multimap<Hash256, Orphan> orphans_; // keyed by missing parent
    mutable std::map<std::pair<Timestamp, Hash256>, uint64_t> modifier_cache_;
};

// Convenience for producers: assembles a block extending `parent` from a
// winning stake hit, with the correct reward and derived output layout.
Block make_block(const ChainState& chain, const ChainState::Entry* parent, const StakeHit& hit,
                 NodeId miner, std::vector<Transfer> spends = {}, uint64_t nonce = 0);

// Output layout constants: the coinstake output is (block_hash, 0) at byte
// offset 80; transfer outputs follow at 64-byte strides.
Utxo coinstake_output(const Hash256& block_hash_v, const Block& b, Amount staked_amount);
uint64_t output_offset(uint32_t output_index);

} // namespace stakesim

#endif // STAKESIM_LEDGER_HPP
