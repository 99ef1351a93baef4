// SPDX-License-Identifier: Apache-2.0
//
// predtwin: predictive multi-fidelity network twin for vehicular RRM
// Copyright (C) 2026 The predtwin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// predtwin command-line front end.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/orchestrator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace predtwin;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
    if (const char* env = std::getenv("PREDTWIN_OUT_DIR"); env && *env) return env;
    return ".";
}

/// Writes outputs and remembers their digests for the manifest.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    fs::path write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        io::write_file(p, content);
        files_.push_back({{"path", name}, {"sha256", io::sha256_hex(content)}});
        return p;
    }

    void manifest(const std::string& command, const json& params, std::uint64_t seed, const std::vector<std::string>& inputs,
                  const std::string& name = "manifest.json") {
        json in = json::array();
        for (const auto& f : inputs) in.push_back({{"path", f}, {"sha256", io::sha256_hex(io::read_file(f))}});
        const json m{{"tool", "predtwin"}, {"version", PREDTWIN_VERSION}, {"command", command}, {"seed", seed},
                     {"config", params},   {"inputs", in},                {"outputs", files_}};
        const fs::path p = dir_ / name;
        fs::create_directories(dir_);
        io::write_file(p, m.dump(2) + "\n");
    }

private:
    fs::path dir_;
    json files_ = json::array();
};

EpisodeConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
    if (path.empty()) {
        json doc = json::object();
        for (const auto& o : overrides) apply_override(doc, o);
        return parse_episode_config(doc);
    }
    return load_episode_config(path, overrides);
}

std::vector<std::string> config_inputs(const std::string& path, const EpisodeConfig& cfg) {
    std::vector<std::string> in;
    if (!path.empty()) in.push_back(path);
    if (!cfg.scenario.map_path.empty()) in.push_back(cfg.scenario.map_path);
    if (!cfg.scenario.trace_path.empty()) in.push_back(cfg.scenario.trace_path);
    return in;
}

// ---------------------------------------------------------------- commands

struct TrafficArgs {
    int rows = 3, cols = 3;
    double block = 100.0;
    int vehicles = 25;
    double duration = 60.0, dt = 0.1, speed_limit = kDefaultSpeedLimit;
    double car = 0.8, bus = 0.1, truck = 0.1;
    std::uint64_t seed = 1;
    std::string out = "trace.csv";
};

int cmd_generate_traffic(const TrafficArgs& a, const fs::path& out_dir) {
    if (a.vehicles < 0) throw UsageError("--vehicles must be >= 0");
    if (a.rows < 1 || a.cols < 1 || !(a.block > 0.0)) throw UsageError("--rows, --cols and --block must be positive");
    if (!(a.duration >= 0.0) || !(a.dt > 0.0)) throw UsageError("--duration must be >= 0 and --dt > 0");
    const RoadNetwork net = generate_network(a.rows, a.cols, a.block, a.speed_limit);
    const Trace tr = generate_traffic(net, a.vehicles, {a.car, a.bus, a.truck}, a.seed, a.duration, a.dt);
    OutputSet out(out_dir);
    const fs::path p = out.write(a.out, trace_to_csv(tr));
    const json params{{"rows", a.rows},         {"cols", a.cols}, {"block", a.block},  {"vehicles", a.vehicles},
                      {"duration", a.duration}, {"dt", a.dt},     {"speed_limit", a.speed_limit},
                      {"mix", {{"car", a.car}, {"bus", a.bus}, {"box_truck", a.truck}}}};
    out.manifest("generate-traffic", params, a.seed, {}, a.out + ".manifest.json");
    std::cout << p.string() << "\n";
    return kOk;
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides, const std::string& mode, const fs::path& out_dir) {
    EpisodeConfig cfg = resolve_config(config, overrides);
    if (!mode.empty()) cfg = with_mode(cfg, mode);
    const EpisodeMetrics m = run_episode(cfg);
    OutputSet out(out_dir);
    out.write("tti.csv", records_to_csv(m.records));
    out.write("aggregate.json", aggregates_to_json(m).dump(2) + "\n");
    std::vector<std::pair<double, FidelityDecision>> log;
    for (const auto& d : m.decisions) log.emplace_back(d.t, d.decision);
    out.write("decisions.csv", decision_log_csv(log));
    out.manifest("run", episode_config_to_json(cfg), cfg.seed, config_inputs(config, cfg));
    const auto& a = m.aggregates;
    fmt::print("{} TTIs  mean sum rate {:.4g} bit/s  outage {:.4f}  rmse {:.3f} dB  fde {:.3f} m  deadline misses {:.3f}\n", m.records.size(), a.mean_sum_rate,
               a.mean_outage, a.mean_rmse_db, a.mean_fde_m, a.deadline_violation_rate);
    return kOk;
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& overrides, double t, bool include_gt, const fs::path& out_dir) {
    const EpisodeConfig cfg = resolve_config(config, overrides);
    std::vector<FidelityConfig> cands = cfg.candidates.expand(cfg.presets);
    if (include_gt && std::find(cands.begin(), cands.end(), cfg.ground_truth) == cands.end()) cands.push_back(cfg.ground_truth);
    if (cands.empty()) throw UsageError("candidate grid is empty");
    const Scenario sc = load_scenario(cfg.scenario, t);
    const Scene snap = update_poses(sc.base, sc.trace.vehicles.empty() ? std::map<int, Pose>{} : sample_poses(sc.trace, t),
                                    cfg.ground_truth.vehicle_fidelity, sc.trace.kinds());
    SelectionOptions opt;
    opt.evaluate_infeasible = true;
    bool found = false;
    const FidelityDecision d =
        select_fidelity_logged(cands, cfg.ground_truth, snap, cfg.budget, cfg.latency, cfg.radio, cfg.rrm, cfg.seed, opt, found);
    OutputSet out(out_dir);
    out.write("sweep.csv", decision_log_csv({{t, d}}));
    json params = episode_config_to_json(cfg);
    params["sweep_time_s"] = t;
    params["include_ground_truth"] = include_gt;
    out.manifest("sweep-fidelity", params, cfg.seed, config_inputs(config, cfg));
    if (found)
        fmt::print("{} candidates, budget {:.1f} ms, chosen {} (rmse {:.3f} dB, {:.1f} ms)\n", cands.size(), d.budget_ms, d.chosen.label(), d.rmse_db,
                   d.est_latency_ms);
    else
        fmt::print("{} candidates, budget {:.1f} ms, none feasible\n", cands.size(), d.budget_ms);
    return kOk;
}

struct BenchArgs {
    std::vector<int> rsus{1, 2, 3};
    int beams = 4, users = 8;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    bool timing = false;
};

int cmd_bench_rrm(const BenchArgs& a, const fs::path& out_dir) {
    if (a.beams < 1 || a.users < 1) throw UsageError("--beams and --users must be >= 1");
    for (int b : a.rsus)
        if (b < 1) throw UsageError("--rsus entries must be >= 1");
    const RrmParams params;
    const LinkBudget link;
    std::string csv = "rsus,beams,users,seed,icd_pf,icd_worst_sinr_db,exh_pf,exh_worst_sinr_db,rel_gap,icd_evals,exh_evals,eval_bound,status";
    csv += a.timing ? ",icd_ms\n" : "\n";
    for (int B : a.rsus)
        for (std::uint64_t seed : a.seeds) {
            const GainTensor g = random_instance(B, a.beams, a.users, seed);
            RrmParams p = params;
            p.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            const RrmResult icd = icd_solve(g, link, p);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::string exh_pf, exh_ws, gap, exh_n, status = "ok";
            try {
                const RrmResult ex = exhaustive_solve(g, link, p);
                exh_pf = io::fmt_double(ex.eval.score.pf_score);
                exh_ws = io::fmt_double(ex.eval.score.worst_sinr_db);
                const double denom = std::abs(ex.eval.score.pf_score);
                gap = io::fmt_double(denom > 0.0 ? (ex.eval.score.pf_score - icd.eval.score.pf_score) / denom : 0.0);
                exh_n = std::to_string(ex.eval_count);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SearchSpaceTooLarge) throw;
                status = "search_space_too_large";
            }
            csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", B, a.beams, a.users, seed, io::fmt_double(icd.eval.score.pf_score),
                               io::fmt_double(icd.eval.score.worst_sinr_db), exh_pf, exh_ws, gap, icd.eval_count, exh_n, icd_eval_bound(p, B, a.beams),
                               status);
            csv += a.timing ? "," + io::fmt_double(ms) + "\n" : "\n";
        }
    OutputSet out(out_dir);
    out.write("bench_rrm.csv", csv);
    out.manifest("bench-rrm", {{"rsus", a.rsus}, {"beams", a.beams}, {"users", a.users}, {"seeds", a.seeds}, {"timing", a.timing}},
                 a.seeds.empty() ? 0 : a.seeds.front(), {}, "bench_rrm.manifest.json");
    std::cout << (out_dir / "bench_rrm.csv").string() << "\n";
    return kOk;
}

int cmd_report(const std::string& config, const std::vector<std::string>& overrides, const std::vector<std::string>& modes,
               const std::vector<std::uint64_t>& seeds, const fs::path& out_dir) {
    if (modes.size() < 2) throw UsageError("--modes needs at least two entries");
    if (seeds.empty()) throw UsageError("--seeds needs at least one entry");
    const EpisodeConfig cfg = resolve_config(config, overrides);
    const ComparisonReport rep = compare_modes(cfg, modes, seeds);
    json runs = json::array();
    for (const auto& r : rep.runs)
        runs.push_back({{"mode", r.mode},
                        {"seed", r.seed},
                        {"mean_sum_rate", r.aggregates.mean_sum_rate},
                        {"mean_outage", r.aggregates.mean_outage},
                        {"mean_rmse_db", r.aggregates.mean_rmse_db},
                        {"mean_fde_m", r.aggregates.mean_fde_m},
                        {"deadline_violation_rate", r.aggregates.deadline_violation_rate}});
    OutputSet out(out_dir);
    out.write("comparison.csv", rep.to_csv());
    out.write("comparison.json", json{{"modes", modes}, {"seeds", seeds}, {"runs", runs}}.dump(2) + "\n");
    json params = episode_config_to_json(cfg);
    params["modes"] = modes;
    params["seeds"] = seeds;
    out.manifest("report", params, seeds.front(), config_inputs(config, cfg));
    std::cout << rep.to_csv();
    return kOk;
}

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::ConfigError:
        case ErrorKind::MalformedMap:
        case ErrorKind::MalformedTrace:
        case ErrorKind::UnknownVehicleKind:
        case ErrorKind::OvercrowdedNetwork:
        case ErrorKind::NegativeBudget: return kConfig;
        default: return kRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predictive network digital twin: traffic, ray tracing, fidelity selection and beam/association RRM"};
    app.set_version_flag("--version", PREDTWIN_VERSION);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::NonNegativeNumber);
    std::string out_dir_arg;
    app.add_option("--out-dir", out_dir_arg, "Output directory (default: $PREDTWIN_OUT_DIR or .)");

    TrafficArgs traffic;
    auto* gen = app.add_subcommand("generate-traffic", "Generate a synthetic Manhattan-grid vehicle trace");
    gen->add_option("--rows", traffic.rows);
    gen->add_option("--cols", traffic.cols);
    gen->add_option("--block", traffic.block, "Block pitch, m");
    gen->add_option("--vehicles", traffic.vehicles);
    gen->add_option("--duration", traffic.duration, "s");
    gen->add_option("--dt", traffic.dt, "s");
    gen->add_option("--speed-limit", traffic.speed_limit, "m/s");
    gen->add_option("--car", traffic.car);
    gen->add_option("--bus", traffic.bus);
    gen->add_option("--truck", traffic.truck);
    gen->add_option("--seed", traffic.seed);
    gen->add_option("--out", traffic.out, "File name inside the output directory");

    std::string config;
    std::vector<std::string> overrides;
    std::string mode;
    auto* run = app.add_subcommand("run", "Run one episode");
    run->add_option("--config", config, "Episode config (JSON)");
    run->add_option("--override", overrides, "key.path=value, repeatable")->take_all();
    run->add_option("--mode", mode, "predictive | reactive | oracle | stochastic_baseline, optionally @preset");

    double sweep_t = 3.0;
    bool include_gt = false;
    auto* sweep = app.add_subcommand("sweep-fidelity", "Score every candidate config against ground truth on one snapshot");
    sweep->add_option("--config", config);
    sweep->add_option("--override", overrides)->take_all();
    sweep->add_option("--time", sweep_t, "Snapshot time, s");
    sweep->add_flag("--include-ground-truth", include_gt, "Append the ground-truth config to the grid");

    BenchArgs bench;
    auto* br = app.add_subcommand("bench-rrm", "ICD against exhaustive search on random instances");
    br->add_option("--rsus", bench.rsus)->delimiter(',');
    br->add_option("--beams", bench.beams);
    br->add_option("--users", bench.users);
    br->add_option("--seeds", bench.seeds)->delimiter(',');
    br->add_flag("--timing", bench.timing, "Add a wall-clock column (breaks byte-for-byte reproducibility)");

    std::vector<std::string> modes;
    std::vector<std::uint64_t> seeds;
    auto* rep = app.add_subcommand("report", "Paired comparison of modes over seeds");
    rep->add_option("--config", config);
    rep->add_option("--override", overrides)->take_all();
    rep->add_option("--modes", modes)->delimiter(',')->required();
    rep->add_option("--seeds", seeds)->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);
    const fs::path out_dir = out_dir_arg.empty() ? default_out_dir() : fs::path(out_dir_arg);

    try {
        if (*gen) return cmd_generate_traffic(traffic, out_dir);
        if (*run) return cmd_run(config, overrides, mode, out_dir);
        if (*sweep) return cmd_sweep(config, overrides, sweep_t, include_gt, out_dir);
        if (*br) return cmd_bench_rrm(bench, out_dir);
        if (*rep) return cmd_report(config, overrides, modes, seeds, out_dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
