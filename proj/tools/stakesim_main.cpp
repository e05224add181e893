// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/analytics.hpp>
#include <stakesim/attacks.hpp>
#include <stakesim/chainparams.hpp>
#include <stakesim/manifest.hpp>
#include <stakesim/netsim.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace stakesim;

namespace {

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_CONFIG = 2;
constexpr int EXIT_INTERNAL = 3;

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

struct CommonArgs {
    std::string config;
    uint64_t seed = 0;
    std::string out = ".";
    int jobs = 1;
    std::string preset;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required)
{
    auto* c = cmd->add_option("--config", args.config, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--seed", args.seed, "deterministic run seed")->required();
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--jobs", args.jobs, "trial-level parallelism (default 1)");
    cmd->add_option("--preset", args.preset, "parameter preset: neucoin|peercoin");
}

RunManifest start_manifest(const std::string& command, const CommonArgs& args)
{
    RunManifest m;
    m.command = command;
    m.config_path = args.config;
    if (!args.config.empty()) m.config_digest = sha256_hex_of_file(args.config);
    m.seed = args.seed;
    m.out_dir = args.out;
    if (args.jobs != 1) m.overrides["jobs"] = std::to_string(args.jobs);
    if (!args.preset.empty()) m.overrides["preset"] = args.preset;
    fs::create_directories(args.out);
    return m;
}

ChainParams params_for(const CommonArgs& args)
{
    ChainParams p = preset_params(args.preset.empty() ? "neucoin" : args.preset);
    if (!args.config.empty()) {
        nlohmann::json j = nlohmann::json::parse(slurp(args.config));
        if (j.contains("params")) p = ChainParams::from_json(j.at("params").dump());
    }
    return p;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"proof-of-stake consensus simulator and attack analyzer"};
    app.require_subcommand(1);

    // --- analytic ---
    auto* analytic = app.add_subcommand("analytic", "closed-form tables and curves");
    std::string what;
    analytic->add_option("what", what, "table1|catchup|grind-curve|grind-threshold")->required();
    CommonArgs an_args;
    add_common(analytic, an_args, false);
    double an_p = -1.0;
    double an_tmod_min = 200.0;
    double an_hash_rate = 391367666e9; // network-scale reference rate
    double an_nstakes = 1e6;
    double an_tau = 60.0;
    double an_target = 0.5;
    int64_t an_nmax = 300;
    bool an_owned = false;
    analytic->add_option("--p", an_p, "restrict table to one attacker fraction");
    analytic->add_option("--tmod", an_tmod_min, "modifier interval, minutes");
    analytic->add_option("--hash-rate", an_hash_rate, "grinder hash rate, H/s");
    analytic->add_option("--n-stakes", an_nstakes, "attacker stake count");
    analytic->add_option("--tau", an_tau, "block time, seconds");
    analytic->add_option("--success-target", an_target, "threshold success probability");
    analytic->add_option("--n-max", an_nmax, "catch-up curve depth");
    analytic->add_flag("--owned", an_owned, "attacker still owns the coins");

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "run the network simulation");
    CommonArgs sim_args;
    add_common(simulate, sim_args, true);
    bool sim_trace = false;
    simulate->add_flag("--trace", sim_trace, "write a full event trace");

    // --- attack ---
    auto* attack = app.add_subcommand("attack", "run an attack scenario");
    CommonArgs atk_args;
    add_common(attack, atk_args, true);

    // --- modifier-trace ---
    auto* mtrace = app.add_subcommand("modifier-trace", "audit the modifier schedule of a run");
    CommonArgs mt_args;
    add_common(mtrace, mt_args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    try {
        if (analytic->parsed()) {
            RunManifest m = start_manifest("analytic " + what, an_args);
            if (an_p >= 0.0) m.overrides["p"] = std::to_string(an_p);
            const fs::path dir(an_args.out);
            if (what == "table1") {
                std::vector<double> rows{0.01, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50};
                if (an_p >= 0.0) rows = {an_p};
                const std::vector<int64_t> cols{1, 10, 60, 120};
                spill((dir / "table1.csv").string(), table1_csv(rows, cols));
            } else if (what == "catchup") {
                std::vector<double> ps{0.10, 0.25, 0.45, 0.55, 0.75};
                if (an_p >= 0.0) ps = {an_p};
                spill((dir / "catchup.csv").string(),
                      catchup_series_csv(ps, an_nmax, std::max<int64_t>(1, an_nmax / 60),
                                         an_owned, an_tau));
            } else if (what == "grind-curve") {
                const std::vector<double> rates{1e13, an_hash_rate, 100.0 * an_hash_rate};
                spill((dir / "grind_curve.csv").string(),
                      grinding_curve_csv(rates, an_tmod_min * 60.0, an_tau, an_nstakes, 0.01));
            } else if (what == "grind-threshold") {
                m.overrides["tmod"] = std::to_string(an_tmod_min);
                const std::vector<double> tmods{an_tmod_min * 60.0};
                const std::string csv = grinding_threshold_csv(tmods, an_hash_rate, an_tau,
                                                               an_nstakes, an_target);
                spill((dir / "grind_threshold.csv").string(), csv);
                std::cout << csv;
            } else {
                std::cerr << "unknown analytic output: " << what << "\n";
                return EXIT_USAGE;
            }
            m.write((dir / "manifest.json").string());
        } else if (simulate->parsed()) {
            RunManifest m = start_manifest("simulate", sim_args);
            SimConfig cfg;
            try {
                cfg = SimConfig::from_json(slurp(sim_args.config));
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return EXIT_CONFIG;
            }
            cfg.seed = sim_args.seed;
            const fs::path dir(sim_args.out);
            const std::string trace =
                sim_trace ? (dir / "events.jsonl").string() : std::string{};
            const SimResult res = run_sim(cfg, trace);
            spill((dir / "result.json").string(), res.to_json() + "\n");
            m.write((dir / "manifest.json").string());
        } else if (attack->parsed()) {
            RunManifest m = start_manifest("attack", atk_args);
            AttackSpec spec;
            try {
                spec = AttackSpec::from_json(slurp(atk_args.config));
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return EXIT_CONFIG;
            }
            spec.seed = atk_args.seed;
            spec.jobs = atk_args.jobs;
            const ChainParams params = params_for(atk_args);
            try {
                spec.validate(params);
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return EXIT_CONFIG;
            }
            const AttackOutcome out = run_attack(spec, params);
            const fs::path dir(atk_args.out);
            spill((dir / "outcome.json").string(), out.to_json() + "\n");
            m.write((dir / "manifest.json").string());
            std::cout << out.to_json() << "\n";
        } else if (mtrace->parsed()) {
            RunManifest m = start_manifest("modifier-trace", mt_args);
            SimConfig cfg;
            try {
                cfg = SimConfig::from_json(slurp(mt_args.config));
            } catch (const std::invalid_argument& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return EXIT_CONFIG;
            }
            cfg.seed = mt_args.seed;
            const fs::path dir(mt_args.out);
            spill((dir / "modifier_trace.csv").string(), sim_modifier_trace(cfg));
            spill((dir / "chain.jsonl").string(), sim_chain_dump(cfg));
            m.write((dir / "manifest.json").string());
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return EXIT_INTERNAL;
    }
    return 0;
}
