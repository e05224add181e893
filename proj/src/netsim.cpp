// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/netsim.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

namespace stakesim {

Seconds LatencyModel::sample(Rng& rng) const
{
    double d = 0.0;
    switch (kind) {
    case Kind::FIXED: d = a; break;
    case Kind::UNIFORM: d = a + rng.uniform01() * (b - a); break;
    case Kind::LOGNORMAL: d = rng.lognormal(a, b); break;
    }
    if (d <= 0.0) return 0;
    return static_cast<Seconds>(std::ceil(d));
}

LatencyModel default_latency()
{
    return LatencyModel{LatencyModel::Kind::LOGNORMAL, 6.5, 0.8};
}

void SimConfig::validate() const
{
    params.validate();
    if (nodes.empty()) throw std::invalid_argument("SimConfig: no nodes");
    for (const NodeSpec& n : nodes) {
        if (n.stake_units <= 0) throw std::invalid_argument("SimConfig: stake must be positive");
        if (n.splits < 1) throw std::invalid_argument("SimConfig: splits must be >= 1");
        if (n.stake_units < n.splits)
            throw std::invalid_argument("SimConfig: more splits than units");
    }
    if (duration <= warmup_seconds())
        throw std::invalid_argument("SimConfig: duration must exceed warmup");
    if (latency.kind == LatencyModel::Kind::UNIFORM && latency.b < latency.a)
        throw std::invalid_argument("SimConfig: bad uniform latency range");
}

namespace {

const char* latency_kind_name(LatencyModel::Kind k)
{
    switch (k) {
    case LatencyModel::Kind::FIXED: return "fixed";
    case LatencyModel::Kind::UNIFORM: return "uniform";
    case LatencyModel::Kind::LOGNORMAL: return "lognormal";
    }
    return "?";
}

} // namespace

std::string SimConfig::to_json() const
{
    nlohmann::json j;
    for (const NodeSpec& n : nodes)
        j["nodes"].push_back({{"stake_units", n.stake_units}, {"splits", n.splits}});
    j["latency"] = {{"model", latency_kind_name(latency.kind)}, {"a", latency.a}, {"b", latency.b}};
    j["duration_s"] = duration;
    j["seed"] = seed;
    j["warmup_blocks"] = warmup_blocks;
    j["params"] = nlohmann::json::parse(params.to_json());
    return j.dump(2);
}

SimConfig SimConfig::from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("SimConfig: JSON parse error: ") + e.what());
    }
    SimConfig cfg;
    if (j.contains("params")) cfg.params = ChainParams::from_json(j.at("params").dump());
    if (j.contains("nodes")) {
        for (const auto& n : j.at("nodes")) {
            NodeSpec spec;
            spec.stake_units = n.at("stake_units").get<int64_t>();
            if (n.contains("splits")) spec.splits = n.at("splits").get<int>();
            cfg.nodes.push_back(spec);
        }
    }
    if (j.contains("latency")) {
        const auto& l = j.at("latency");
        const std::string model = l.value("model", "lognormal");
        if (model == "fixed")
            cfg.latency.kind = LatencyModel::Kind::FIXED;
        else if (model == "uniform")
            cfg.latency.kind = LatencyModel::Kind::UNIFORM;
        else if (model == "lognormal")
            cfg.latency.kind = LatencyModel::Kind::LOGNORMAL;
        else
            throw std::invalid_argument("SimConfig: unknown latency model " + model);
        cfg.latency.a = l.value("a", cfg.latency.a);
        cfg.latency.b = l.value("b", cfg.latency.b);
    }
    if (j.contains("duration_s")) cfg.duration = j.at("duration_s").get<int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("warmup_blocks")) cfg.warmup_blocks = j.at("warmup_blocks").get<int>();
    cfg.validate();
    return cfg;
}

std::string SimResult::to_json() const
{
    nlohmann::json j;
    j["main_height"] = main_height;
    j["total_blocks"] = total_blocks;
    j["main_blocks"] = main_blocks;
    j["orphans"] = orphans;
    j["fork_rate"] = fork_rate;
    j["produced_per_node"] = produced_per_node;
    j["main_per_node"] = main_per_node;
    j["rewards_per_node"] = rewards_per_node;
    j["hashes_evaluated"] = hashes_evaluated;
    j["duplicate_proofs"] = duplicate_proofs;
    nlohmann::json hist = nlohmann::json::array();
    for (uint64_t h : reorg_depth_hist) hist.push_back(h);
    j["reorg_depth_hist"] = hist;
    if (!trace_path.empty()) j["trace_path"] = trace_path;
    return j.dump(2);
}

namespace {

// Genesis stake outputs, pre-aged so mining can start at once. Identities
// derive from (seed-independent) node and split indices, keeping per-node
// outputs stable under config reordering.
GenesisConfig make_genesis(const SimConfig& cfg)
{
    GenesisConfig g;
    g.genesis_time = 0;
    Amount total = 0;
    for (const NodeSpec& n : cfg.nodes) total += n.stake_units;
    g.target = initial_target(total, cfg.params);
    for (size_t node = 0; node < cfg.nodes.size(); ++node) {
        const NodeSpec& spec = cfg.nodes[node];
        const Amount base = spec.stake_units / spec.splits;
        Amount rest = spec.stake_units % spec.splits;
        for (int k = 0; k < spec.splits; ++k) {
            Utxo u;
            HashWriter w;
            w.u64(0x67656e2d75747830ULL); // tag: genesis outputs
            w.u32(static_cast<uint32_t>(node));
            w.u32(static_cast<uint32_t>(k));
            u.id = UtxoId{w.finalize(), 0};
            u.amount = base + (rest > 0 ? 1 : 0);
            if (rest > 0) --rest;
            u.tx_time = g.genesis_time - cfg.params.min_stake_age;
            u.block_time_from = u.tx_time;
            u.tx_offset = output_offset(0);
            u.owner = static_cast<NodeId>(node);
            g.utxos.push_back(u);
        }
    }
    return g;
}

struct Delivery {
    Timestamp arrival;
    Hash256 order_key; // unbiased within-tick ordering
    NodeId receiver;
    std::shared_ptr<const Block> block;
};

struct DeliveryLater {
    bool operator()(const Delivery& a, const Delivery& b) const
    {
        if (a.arrival != b.arrival) return a.arrival > b.arrival;
        if (!(a.order_key == b.order_key)) return b.order_key < a.order_key;
        return a.receiver > b.receiver;
    }
};

struct MiningStake {
    Utxo utxo;
    Uint256 threshold;
    uint64_t static_modifier = 0;
};

class SimNode {
public:
    SimNode(NodeId id, const ChainParams& params, const GenesisConfig& genesis)
        : id_(id), chain_(params, genesis)
    {
    }

    NodeId id() const { return id_; }
    ChainState& chain() { return chain_; }
    const ChainState& chain() const { return chain_; }

    void refresh_wallet(Timestamp now)
    {
        const ChainState::Entry* tip = chain_.tip();
        if (tip->hash == wallet_tip_ && !wallet_dirty_) return;
        wallet_tip_ = tip->hash;
        wallet_dirty_ = false;
        eligible_.clear();
        pending_.clear();
        const ChainParams& p = chain_.params();
        for (const auto& [uid, u] : chain_.utxo_set()) {
            if (u.owner != id_) continue;
            if (now - u.tx_time >= p.min_stake_age)
                eligible_.push_back(u);
            else
                pending_.push_back(u);
        }
        auto by_id = [](const Utxo& a, const Utxo& b) { return a.id < b.id; };
        std::sort(eligible_.begin(), eligible_.end(), by_id);
        std::sort(pending_.begin(), pending_.end(),
                  [](const Utxo& a, const Utxo& b) { return a.tx_time < b.tx_time; });
        rebuild_stakes(now);
    }

    void advance_eligibility(Timestamp now)
    {
        bool moved = false;
        while (!pending_.empty() && now - pending_.front().tx_time >= chain_.params().min_stake_age) {
            eligible_.push_back(pending_.front());
            pending_.erase(pending_.begin());
            moved = true;
        }
        if (moved) {
            std::sort(eligible_.begin(), eligible_.end(),
                      [](const Utxo& a, const Utxo& b) { return a.id < b.id; });
            rebuild_stakes(now);
        }
    }

    // Evaluates one hash per eligible stake; returns the first winning hit.
    std::optional<StakeHit> mine(Timestamp now, uint64_t& hashes)
    {
        const ChainParams& p = chain_.params();
        const bool weight_mode = p.coin_age_mode == CoinAgeMode::PEERCOIN_TIME_WEIGHT;
        uint64_t shared_modifier = 0;
        if (p.modifier_mode == ModifierMode::DYNAMIC) {
            const Timestamp is = interval_start_for(now, p);
            if (is != cached_interval_ || chain_.tip()->hash != cached_modifier_tip_) {
                cached_modifier_ = chain_.modifier_for_stake(Utxo{}, now);
                cached_interval_ = is;
                cached_modifier_tip_ = chain_.tip()->hash;
            }
            shared_modifier = cached_modifier_;
        }
        const Target target = chain_.tip()->next_target;
        std::optional<StakeHit> hit;
        for (const MiningStake& ms : stakes_) {
            const uint64_t modifier = p.modifier_mode == ModifierMode::DYNAMIC
                                          ? shared_modifier
                                          : ms.static_modifier;
            const Kernel k = make_kernel(ms.utxo, modifier, now);
            const Hash256 h = kernel_hash(k);
            ++hashes;
            const Uint256 threshold =
                weight_mode ? stake_threshold(target, ms.utxo, now, p) : ms.threshold;
            const bool pass = p.stake_inequality == StakeInequality::STRICT ? h < threshold
                                                                            : h <= threshold;
            if (pass && !hit) hit = StakeHit{ms.utxo, k, h};
        }
        return hit;
    }

    void mark_dirty() { wallet_dirty_ = true; }

private:
    void rebuild_stakes(Timestamp now)
    {
        const ChainParams& p = chain_.params();
        const Target target = chain_.tip()->next_target;
        stakes_.clear();
        stakes_.reserve(eligible_.size());
        for (const Utxo& u : eligible_) {
            MiningStake ms;
            ms.utxo = u;
            ms.threshold = stake_threshold(target, u, now, p);
            if (p.modifier_mode == ModifierMode::STATIC)
                ms.static_modifier = chain_.modifier_for_stake(u, now);
            stakes_.push_back(ms);
        }
    }

    NodeId id_;
    ChainState chain_;
    Hash256 wallet_tip_;
    bool wallet_dirty_ = true;
    std::vector<Utxo> eligible_;
    std::vector<Utxo> pending_;
    std::vector<MiningStake> stakes_;
    uint64_t cached_modifier_ = 0;
    Timestamp cached_interval_ = -1;
    Hash256 cached_modifier_tip_;
};

class TraceWriter {
public:
    explicit TraceWriter(const std::string& path)
    {
        if (!path.empty()) f_ = std::fopen(path.c_str(), "w");
    }
    ~TraceWriter()
    {
        if (f_) std::fclose(f_);
    }
    void event(Timestamp t, const char* kind, NodeId node, const Hash256& h, uint64_t height)
    {
        if (!f_) return;
        std::fprintf(f_, "{\"t\":%lld,\"ev\":\"%s\",\"node\":%u,\"hash\":\"%s\",\"height\":%llu}\n",
                     static_cast<long long>(t), kind, node, h.to_hex().substr(0, 16).c_str(),
                     static_cast<unsigned long long>(height));
    }
    bool active() const { return f_ != nullptr; }

private:
    std::FILE* f_ = nullptr;
};

} // namespace

namespace {

SimResult run_sim_impl(const SimConfig& cfg, const std::string& trace_path,
                       std::string* modifier_trace_out, std::string* chain_dump_out);

} // namespace

SimResult run_sim(const SimConfig& cfg, const std::string& trace_path)
{
    return run_sim_impl(cfg, trace_path, nullptr, nullptr);
}

std::string sim_modifier_trace(const SimConfig& cfg)
{
    std::string out;
    run_sim_impl(cfg, "", &out, nullptr);
    return out;
}

std::string sim_chain_dump(const SimConfig& cfg)
{
    std::string out;
    run_sim_impl(cfg, "", nullptr, &out);
    return out;
}

namespace {

SimResult run_sim_impl(const SimConfig& cfg, const std::string& trace_path,
                       std::string* modifier_trace_out, std::string* chain_dump_out)
{
    cfg.validate();
    const GenesisConfig genesis = make_genesis(cfg);
    const size_t n_nodes = cfg.nodes.size();

    std::vector<std::unique_ptr<SimNode>> nodes;
    nodes.reserve(n_nodes);
    for (size_t i = 0; i < n_nodes; ++i)
        nodes.push_back(std::make_unique<SimNode>(static_cast<NodeId>(i), cfg.params, genesis));

    Rng root(cfg.seed, 0);
    TraceWriter trace(trace_path);

    std::priority_queue<Delivery, std::vector<Delivery>, DeliveryLater> queue;
    SimResult res;
    res.produced_per_node.assign(n_nodes, 0);
    res.main_per_node.assign(n_nodes, 0);
    res.rewards_per_node.assign(n_nodes, 0);
    if (trace.active()) res.trace_path = trace_path;

    const Timestamp warmup = cfg.warmup_seconds();
    uint64_t hashes = 0;

    auto deliver_due = [&](Timestamp t, bool all) {
        while (!queue.empty() && (all || queue.top().arrival <= t)) {
            const Delivery d = queue.top();
            queue.pop();
            ReceiveResult r =
                nodes[d.receiver]->chain().on_block_received(*d.block, d.arrival);
            if (r.punished) ++res.duplicate_proofs;
            nodes[d.receiver]->mark_dirty();
            if (trace.active() && r.outcome == ReceiveOutcome::ACCEPTED)
                trace.event(t, "deliver", d.receiver, block_hash(*d.block), d.block->height);
        }
    };

    for (Timestamp t = 1; t <= cfg.duration; ++t) {
        deliver_due(t, false);
        for (size_t i = 0; i < n_nodes; ++i) {
            SimNode& node = *nodes[i];
            node.refresh_wallet(t);
            node.advance_eligibility(t);
            std::optional<StakeHit> hit = node.mine(t, hashes);
            if (!hit) continue;
            const Block b = make_block(node.chain(), node.chain().tip(), *hit,
                                       static_cast<NodeId>(i));
            ReceiveResult self = node.chain().on_block_received(b, t);
            if (self.outcome != ReceiveOutcome::ACCEPTED) continue;
            node.mark_dirty();
            if (t > warmup) ++res.produced_per_node[i];
            if (trace.active()) trace.event(t, "block", node.id(), block_hash(b), b.height);
            auto shared = std::make_shared<const Block>(b);
            const Hash256 bh = block_hash(b);
            for (size_t r = 0; r < n_nodes; ++r) {
                if (r == i) continue;
                Rng link = root.child(bh.limbs[0] ^ (0x6c696e6bULL + r));
                const Seconds delay = cfg.latency.sample(link);
                HashWriter ow;
                ow.hash(bh);
                ow.u32(static_cast<uint32_t>(r));
                queue.push(Delivery{t + delay, ow.finalize(), static_cast<NodeId>(r), shared});
            }
        }
        if (t % (cfg.params.block_time_target * 16) == 0)
            for (auto& n : nodes) n->chain().expire_orphans(t);
    }
    // Drain the network so every node converges before measurement.
    deliver_due(cfg.duration, true);

    res.hashes_evaluated = hashes;
    ChainState& main = nodes[0]->chain();
    main.fork_choice();
    res.main_height = main.tip()->height;
    res.reorg_depth_hist = main.reorg_depth_hist();

    uint64_t produced_total = 0;
    for (uint64_t c : res.produced_per_node) produced_total += c;
    res.total_blocks = produced_total;

    for (const ChainState::Entry* e : main.main_chain()) {
        if (e->height == 0 || e->block.timestamp <= warmup) continue;
        ++res.main_blocks;
        ++res.main_per_node[e->block.miner];
        res.rewards_per_node[e->block.miner] += e->block.reward;
    }
    res.orphans = produced_total >= res.main_blocks ? produced_total - res.main_blocks : 0;
    res.fork_rate =
        produced_total > 0 ? static_cast<double>(res.orphans) / static_cast<double>(produced_total)
                           : 0.0;
    if (modifier_trace_out)
        *modifier_trace_out = modifier_trace_csv(main.modifier_trace(cfg.duration));
    if (chain_dump_out) *chain_dump_out = main.dump_jsonl();
    return res;
}

} // namespace

std::vector<ForkRatePoint> fork_rate_curve(const std::vector<Seconds>& block_times,
                                           const LatencyModel& latency, const SimConfig& base,
                                           uint64_t blocks_per_point)
{
    std::vector<ForkRatePoint> out;
    for (size_t i = 0; i < block_times.size(); ++i) {
        SimConfig cfg = base;
        cfg.params.block_time_target = block_times[i];
        cfg.latency = latency;
        cfg.seed = Rng(base.seed, 0x666f726bULL + i).next_u64();
        cfg.duration =
            cfg.warmup_seconds() + static_cast<Seconds>(blocks_per_point) * block_times[i];
        const SimResult r = run_sim(cfg);
        out.push_back(ForkRatePoint{block_times[i], r.fork_rate, r.main_blocks + r.orphans});
    }
    return out;
}

} // namespace stakesim
