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

// Acceptance suite: one PASS/FAIL line per criterion. `predtwin_acceptance N`
// runs criterion N, no argument runs all of them. Exit status is the number
// of failed criteria (capped at 255).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "predtwin/channel.hpp"
#include "predtwin/errors.hpp"
#include "predtwin/fidelity.hpp"
#include "predtwin/io.hpp"
#include "predtwin/mobility.hpp"
#include "predtwin/oracles.hpp"
#include "predtwin/orchestrator.hpp"
#include "predtwin/predictor.hpp"
#include "predtwin/raytrace.hpp"
#include "predtwin/rng.hpp"
#include "predtwin/rrm.hpp"

using namespace predtwin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

FidelityConfig knobs(int depth, long long rays, int fv, bool dr = false, bool df = false) {
    FidelityConfig c;
    c.max_depth = depth;
    c.n_rays = rays;
    c.n_paths = 10 * rays;
    c.diffuse = dr;
    c.diffraction = df;
    c.vehicle_fidelity = fv;
    return c;
}

// 3x3 blocks, one block split in two (10 buildings), four RSUs around the
// centre block.
ScenarioSpec city(int vehicles, std::uint64_t traffic_seed) {
    ScenarioSpec s;
    s.grid.rows = 3;
    s.grid.cols = 3;
    s.grid.extra_buildings = 1;
    s.grid.rsu_nodes = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    s.vehicles = vehicles;
    s.traffic_seed = traffic_seed;
    return s;
}

// Desk-scale episode: ground truth at 1e4 rays, candidates up to 1e4.
EpisodeConfig episode(int vehicles, std::uint64_t seed) {
    EpisodeConfig c;
    c.seed = seed;
    c.scenario = city(vehicles, seed);
    c.ground_truth = knobs(10, 10000, 3, true, true);
    c.candidates.n_rays = {100, 1000, 10000};
    c.presets = {{"low", knobs(3, 1000, 1)}, {"medium", knobs(6, 10000, 2)}, {"high", knobs(10, 10000, 3)}};
    c.n_tti = 60;
    c.t_update_s = 10.0;
    return c;
}

// ------------------------------------------------------------------ 1

Outcome rrm_oracle_equivalence() {
    const auto t0 = Clock::now();
    const LinkBudget lb;
    RrmParams p;
    p.n_restarts = 5;
    p.max_iters = 20;
    int n = 0, dominated = 0, equal = 0, oracle_agree = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int B = 2 + i % 2, W = (i / 2) % 2 ? 4 : 2, U = 4 + (i / 4) % 7;
        const GainTensor g = random_instance(B, W, U, 1000 + static_cast<std::uint64_t>(i));
        p.seed = static_cast<std::uint64_t>(i);
        const RrmResult icd = icd_solve(g, lb, p);
        const RrmResult exh = exhaustive_solve(g, lb, p);
        const RrmResult ref = brute_force_rrm(g, lb, p);
        ++n;
        oracle_agree += exh.eval.score == ref.eval.score && exh.beams == ref.beams;
        dominated += !icd.eval.score.better_than(exh.eval.score);
        equal += icd.eval.score == exh.eval.score;
        const double gap = (exh.eval.score.pf_score - icd.eval.score.pf_score) / std::max(1e-12, std::abs(exh.eval.score.pf_score));
        worst_gap = std::max(worst_gap, gap);
    }
    const double t = seconds_since(t0);
    const bool ok = dominated == n && equal >= 0.95 * n && worst_gap <= 0.05 && oracle_agree == n && t < 120.0;
    return {ok, fmt::format("{} instances: exhaustive>=ICD {}/{}, equal {}/{}, worst gap {:.4f}, exhaustive==brute-force {}/{}, {:.1f}s", n, dominated, n,
                            equal, n, worst_gap, oracle_agree, n, t)};
}

// ------------------------------------------------------------------ 2

Outcome rrm_scaling() {
    const auto t0 = Clock::now();
    const LinkBudget lb;
    RrmParams p;
    p.parallel = false;  // clean single-thread timings
    const int W = 16, U = 20, reps = 6;
    bool bound_ok = true;
    std::vector<double> xs, ys;
    for (int B = 2; B <= 8; ++B) {
        std::vector<double> times;
        for (int r = 0; r < reps; ++r) {
            const GainTensor g = random_instance(B, W, U, 77 + static_cast<std::uint64_t>(r));
            p.seed = static_cast<std::uint64_t>(r);
            const auto s = Clock::now();
            const RrmResult res = icd_solve(g, lb, p);
            times.push_back(seconds_since(s));
            bound_ok &= res.eval_count <= icd_eval_bound(p, B, W);
        }
        std::sort(times.begin(), times.end());
        xs.push_back(B);
        ys.push_back(0.5 * (times[reps / 2 - 1] + times[reps / 2]));
    }
    // least squares y = a + b x
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 0.0;

    // exhaustive search: fine up to 16^4, refused from 16^5 > 1e6 on
    bool cap_ok = true;
    for (int B = 2; B <= 6; ++B) {
        const GainTensor g = random_instance(B, W, 8, 5);
        bool refused = false;
        try {
            exhaustive_solve(g, lb, p);
        } catch (const Error& e) {
            refused = e.kind() == ErrorKind::SearchSpaceTooLarge;
        }
        cap_ok &= refused == (std::pow(W, B) > p.exhaustive_cap);
    }
    const double t = seconds_since(t0);
    const bool ok = bound_ok && r2 >= 0.9 && cap_ok && t < 180.0;
    return {ok, fmt::format("eval bound held: {}, ICD time vs B (2..8, W=16) R^2 = {:.3f}, exhaustive cap at 16^5: {}, {:.1f}s", bound_ok ? "yes" : "no", r2,
                            cap_ok ? "yes" : "no", t)};
}

// ------------------------------------------------------------------ 3

Outcome tracer_oracle_equivalence() {
    const auto t0 = Clock::now();
    Engine eng(2024);
    auto uni = [&](double a, double b) { return a + (b - a) * uniform01(eng); };
    int scenes = 0, expected = 0, found = 0, spurious = 0;
    double worst_len = 0.0;
    while (scenes < 20) {
        MapSpec m;
        const int n_walls = 1 + static_cast<int>(uniform_index(eng, 2));
        for (int w = 0; w < n_walls; ++w) {
            const Vec2 c{uni(-60, 60), uni(-60, 60)};
            const double ang = uni(-kPi, kPi), half = uni(10, 60);
            m.walls.push_back({c - unit_from_angle(ang) * half, c + unit_from_angle(ang) * half, 20.0, material::kConcrete});
        }
        const Scene s = build_scene(m);
        const Vec3 tx{uni(-80, 80), uni(-80, 80), uni(5, 12)};
        const Vec3 rx{uni(-80, 80), uni(-80, 80), uni(1, 3)};
        if (norm(tx.xy() - rx.xy()) < 5.0) continue;
        ++scenes;
        const auto oracle = image_method_paths(s, tx, rx, 2);
        FidelityConfig c = knobs(2, 1000000, 0);
        const PathList traced = trace_paths(s, tx, rx, c, static_cast<std::uint64_t>(scenes));
        std::vector<bool> used(traced.size(), false);
        for (const ImagePath& ip : oracle) {
            ++expected;
            for (std::size_t k = 0; k < traced.size(); ++k) {
                if (used[k] || traced[k].surfaces != ip.surfaces) continue;
                used[k] = true;
                ++found;
                worst_len = std::max(worst_len, std::abs(traced[k].length - ip.length));
                break;
            }
        }
        for (std::size_t k = 0; k < traced.size(); ++k) spurious += !used[k];
    }
    // free space against Friis
    double worst_friis = 0.0;
    for (double d : {50.0, 100.0, 200.0}) {
        const PathList p = trace_paths(Scene{}, {0, 0, 10}, {d, 0, 10}, knobs(1, 1000000, 0), 1);
        const double g = path_gain_db(channel_vector(p, UlaSpec{}));
        worst_friis = std::max(worst_friis, std::abs(g - friis_gain_db(d, kDefaultCarrierHz)));
    }
    const double t = seconds_since(t0);
    const bool ok = found == expected && spurious == 0 && worst_len < 0.1 && worst_friis <= 0.5 && t < 120.0;
    return {ok, fmt::format("20 scenes: {}/{} image paths recovered, {} unmatched traced, worst length error {:.2e} m, worst Friis error {:.3f} dB, {:.1f}s",
                            found, expected, spurious, worst_len, worst_friis, t)};
}

// ------------------------------------------------------------------ 4

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n, my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

Outcome fidelity_monotonicity() {
    const auto t0 = Clock::now();
    const ScenarioSpec spec = city(20, 4);
    const Scenario sc = load_scenario(spec, 12.0);
    const Scene snap = update_poses(sc.base, sample_poses(sc.trace, 10.0), 3, sc.trace.kinds());
    const FidelityConfig gt = knobs(10, 1000000, 3, true, true);
    std::vector<FidelityConfig> cands;
    // only the ray count moves; every other knob matches the reference
    for (long long r : {100LL, 1000LL, 10000LL, 100000LL}) cands.push_back(knobs(10, r, 3, true, true));
    BudgetSpec unlimited;
    unlimited.t_horizon = 1e12;
    bool found = false;
    SelectionOptions opt;
    opt.evaluate_infeasible = true;
    const FidelityDecision d = select_fidelity_logged(cands, gt, snap, unlimited, {}, {}, {}, 7, opt, found);

    // second route: trace each config on its own and score it directly
    const LinkGains truth = compute_channels(snap, gt, {}, 7).gains();
    std::vector<double> rays, rmse;
    bool routes_agree = true;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const double direct = rmse_path_gain(compute_channels(snap, cands[i], {}, 7).gains(), truth);
        routes_agree &= d.log[i].rmse_db && std::abs(*d.log[i].rmse_db - direct) < 1e-9;
        rays.push_back(static_cast<double>(cands[i].n_rays));
        rmse.push_back(direct);
    }
    double worst_step = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rmse.size(); ++i) worst_step = std::max(worst_step, rmse[i] - rmse[i - 1]);
    const double rho = spearman(rays, rmse);
    const double t = seconds_since(t0);
    const bool ok = routes_agree && rho <= 0.0 && worst_step <= 0.2 && t < 300.0;
    return {ok, fmt::format("{} buildings, {} vehicles: RMSE at 1e2..1e5 rays = {:.3f}/{:.3f}/{:.3f}/{:.3f} dB, rho = {:.2f}, worst step {:+.3f} dB, "
                            "selector==direct: {}, {:.1f}s",
                            snap.buildings.size(), snap.vehicles.size(), rmse[0], rmse[1], rmse[2], rmse[3], rho, worst_step,
                            routes_agree ? "yes" : "no", t)};
}

// ------------------------------------------------------------------ 5

Outcome budget_compliance() {
    const auto t0 = Clock::now();
    EpisodeConfig c = episode(25, 1);
    const EpisodeMetrics m = run_episode(c);
    int violations = 0, fallbacks = 0;
    for (const auto& d : m.decisions) {
        violations += !(d.decision.est_latency_ms <= d.decision.budget_ms);
        fallbacks += d.fallback;
    }
    // One bootstrap calibration at the first TTI, then one per cadence point.
    int on_cadence = 0;
    for (const auto& d : m.decisions) on_cadence += std::abs(std::remainder(d.t, c.t_update_s)) < 1e-9;
    const bool normal_ok = on_cadence == 6 && m.decisions.size() == 7 && violations == 0 && fallbacks == 0;

    EpisodeConfig tiny = c;
    tiny.n_tti = 12;
    tiny.budget.t_horizon = 181.0;  // a millisecond or less after the fixed terms
    const EpisodeMetrics f = run_episode(tiny);
    bool flags_ok = !f.decisions.empty();
    for (const auto& d : f.decisions) {
        flags_ok &= d.fallback && std::isnan(d.decision.rmse_db);
        for (const auto& e : d.decision.log) flags_ok &= !e.feasible && e.est_latency_ms >= d.decision.est_latency_ms;
    }
    for (const auto& r : f.records) flags_ok &= r.budget_violation;
    const double t = seconds_since(t0);
    const bool ok = normal_ok && flags_ok && t < 300.0;
    return {ok, fmt::format("60 TTIs: {} calibrations ({} on cadence), {} over budget, {} fallbacks; tiny-budget episode: {} calibrations all flagged: {}, {:.1f}s",
                            m.decisions.size(), on_cadence, violations, fallbacks, f.decisions.size(), flags_ok ? "yes" : "no", t)};
}

// ------------------------------------------------------------------ 6

Outcome predictive_beats_reactive() {
    const auto t0 = Clock::now();
    int wins = 0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        EpisodeConfig c = episode(25, seed);
        c.staleness_s = 1.0;
        const Scenario sc = load_scenario(c.scenario, c.t_start_s + c.n_tti * c.tti_s + c.horizon_s + 1.0);
        TruthCache cache;
        const auto pred = run_episode(c, sc, &cache).aggregates;
        const auto reac = run_episode(with_mode(c, "reactive"), sc, &cache).aggregates;
        const bool win = pred.mean_sum_rate > reac.mean_sum_rate && pred.mean_outage < reac.mean_outage;
        wins += win;
        per_seed += fmt::format(" {}{}", seed, win ? "+" : "-");
    }
    const double t = seconds_since(t0);
    const bool ok = wins >= 9 && t < 600.0;
    return {ok, fmt::format("predictive ahead on rate and outage in {}/10 seeds [{} ], {:.1f}s", wins, per_seed, t)};
}

// ------------------------------------------------------------------ 7

Outcome adaptive_vs_fixed() {
    const auto t0 = Clock::now();
    bool rmse_ok = true, rate_ok = true, high_misses = false, adaptive_clean = true;
    std::string detail;
    for (int vehicles : {25, 50}) {
        EpisodeConfig c = episode(vehicles, 3);
        c.n_tti = 12;
        c.t_update_s = 10.0;
        c.ground_truth = knobs(10, 100000, 3, true, true);
        c.candidates.n_rays = {100, 1000, 10000, 100000};
        c.presets = {{"low", knobs(3, 1000, 1)}, {"medium", knobs(6, 10000, 2)}, {"high", knobs(10, 100000, 3)}};
        const Scenario sc = load_scenario(c.scenario, c.t_start_s + c.n_tti * c.tti_s + c.horizon_s + 1.0);
        TruthCache cache;
        const EpisodeMetrics adaptive = run_episode(c, sc, &cache);

        // argmin construction: every feasible preset scored in the same calibration
        for (const auto& d : adaptive.decisions) {
            adaptive_clean &= !d.fallback;
            for (const auto& p : c.presets)
                for (const auto& e : d.decision.log)
                    if (e.cfg == p.cfg && e.feasible) rmse_ok &= e.rmse_db && d.decision.rmse_db <= *e.rmse_db;
        }
        double best_fixed = 0.0;
        std::string fixed_txt;
        for (const auto& p : c.presets) {
            const EpisodeMetrics f = run_episode(with_mode(c, "predictive@" + p.name), sc, &cache);
            best_fixed = std::max(best_fixed, f.aggregates.mean_sum_rate);
            if (p.name == "high" && vehicles == 50) high_misses = f.aggregates.deadline_violation_rate > 0.0;
            fixed_txt += fmt::format(" {} {:.3g}/{:.2f}", p.name, f.aggregates.mean_sum_rate, f.aggregates.deadline_violation_rate);
        }
        adaptive_clean &= adaptive.aggregates.deadline_violation_rate == 0.0;
        rate_ok &= adaptive.aggregates.mean_sum_rate >= 0.98 * best_fixed;
        detail += fmt::format("[{} veh: adaptive {:.3g}/{:.2f};{}] ", vehicles, adaptive.aggregates.mean_sum_rate,
                              adaptive.aggregates.deadline_violation_rate, fixed_txt);
    }
    const double t = seconds_since(t0);
    const bool ok = rmse_ok && rate_ok && high_misses && adaptive_clean && t < 600.0;
    return {ok, fmt::format("rmse<=feasible presets: {}, rate within 2%: {}, fixed-high misses at high density: {}, adaptive on time: {}; rate/miss-rate "
                            "{}{:.1f}s",
                            rmse_ok ? "yes" : "no", rate_ok ? "yes" : "no", high_misses ? "yes" : "no", adaptive_clean ? "yes" : "no", detail, t)};
}

// ------------------------------------------------------------------ 8

Outcome blockage_effect() {
    const auto t0 = Clock::now();
    const Vec3 tx{0, 0, 3.0}, rx{60, 0, 1.5};
    const FidelityConfig base = knobs(1, 1000, 0);
    auto gain = [&](const Scene& s, int fv) {
        FidelityConfig c = base;
        c.vehicle_fidelity = fv;
        return path_gain_db(channel_vector(trace_paths(s, tx, rx, c, 1), UlaSpec{}));
    };
    const bool clear_ok = gain(Scene{}, 0) > kGainFloorDb;
    bool floor_ok = true;
    for (int fv = 0; fv < kVehicleFidelityLevels; ++fv) {
        const Scene s = update_poses(Scene{}, {{1, make_pose({30, 0}, 0.0, 0.0)}}, fv, {{1, VehicleKind::Bus}});
        floor_ok &= gain(s, fv) == kGainFloorDb;
    }
    Engine eng(88);
    int agree = 0, blocked0 = 0;
    for (int i = 0; i < 100; ++i) {
        const Pose p = make_pose({5 + 50 * uniform01(eng), -4 + 8 * uniform01(eng)}, 2 * kPi * uniform01(eng), 0);
        const Scene s0 = update_poses(Scene{}, {{1, p}}, 0, {{1, VehicleKind::Bus}});
        const Scene s3 = update_poses(Scene{}, {{1, p}}, 3, {{1, VehicleKind::Bus}});
        const bool b0 = gain(s0, 0) == kGainFloorDb, b3 = gain(s3, 3) == kGainFloorDb;
        agree += b0 == b3;
        blocked0 += b0;
    }
    const double t = seconds_since(t0);
    const bool ok = clear_ok && floor_ok && agree >= 90 && t < 120.0;
    return {ok, fmt::format("bus on LOS floors the gain at every F_V: {}; F_V 0 vs 3 agree on {}/100 placements ({} blocked at F_V 0), {:.1f}s",
                            floor_ok && clear_ok ? "yes" : "no", agree, blocked0, t)};
}

// ------------------------------------------------------------------ 9

Outcome predictor_sanity() {
    const auto t0 = Clock::now();
    Engine eng(9);
    double worst_kf = 0.0, worst_ego = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 v = unit_from_angle(2 * kPi * uniform01(eng)) * (15 * uniform01(eng));
        const Vec2 p0{uniform01(eng) * 400 - 200, uniform01(eng) * 400 - 200};
        HistoryWindow h;
        for (int k = 0; k < 30; ++k) h.states.push_back(make_pose(p0 + v * (0.1 * k), angle_of(v), norm(v)));
        const Vec2 truth = h.current().position + v * 1.0;
        worst_kf = std::max(worst_kf, fde({kf_predict(h, 1.0)}, {make_pose(truth, 0, 0)}));
        const auto back = inverse_ego_positions(ego_transform(h));
        for (std::size_t k = 0; k < back.size(); ++k) worst_ego = std::max(worst_ego, norm(back[k] - h.states[k].position));
    }
    const double f345 = fde({{{3, 4}, 0, 1}}, {make_pose({0, 0}, 0, 0)});
    const double t = seconds_since(t0);
    const bool ok = worst_kf < 0.1 && f345 == 5.0 && worst_ego < 1e-9 && t < 60.0;
    return {ok, fmt::format("KF worst FDE {:.2e} m over 50 CV tracks, 3-4-5 FDE = {}, ego round-trip {:.1e} m, {:.1f}s", worst_kf, f345, worst_ego, t)};
}

// ------------------------------------------------------------------ 10

std::string file_digest_listing(const fs::path& dir) {
    std::vector<std::string> lines;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) lines.push_back(fs::relative(e.path(), dir).string() + " " + io::sha256_hex(io::read_file(e.path())));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

Outcome determinism() {
    const auto t0 = Clock::now();
    const std::string cli = PREDTWIN_CLI;
    const std::string config = std::string(PREDTWIN_SOURCE_DIR) + "/data/configs/minimal.json";
    const fs::path root = fs::temp_directory_path() / "predtwin_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::string> commands{
        "generate-traffic --vehicles 12 --duration 20 --seed 5 --out trace.csv",
        "run --config " + config + " --override seed=3",
        "sweep-fidelity --config " + config + " --include-ground-truth",
        "bench-rrm --rsus 1,2,3 --beams 4 --users 6 --seeds 1,2",
        "report --config " + config + " --modes predictive,reactive,oracle,stochastic_baseline --seeds 1,2",
    };
    std::vector<std::string> listings;
    bool all_ran = true;
    for (int threads : {1, 8})
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = root / fmt::format("t{}_r{}", threads, rep);
            fs::create_directories(out);
            for (std::size_t i = 0; i < commands.size(); ++i) {
                const fs::path sub = out / std::to_string(i);
                fs::create_directories(sub);
                const std::string cmd = fmt::format("cd '{}' && '{}' --threads {} --out-dir . {} > /dev/null 2>&1", sub.string(), cli, threads, commands[i]);
                all_ran &= std::system(cmd.c_str()) == 0;
            }
            listings.push_back(file_digest_listing(out));
        }
    const bool same = std::all_of(listings.begin(), listings.end(), [&](const std::string& l) { return l == listings.front(); });
    std::size_t files = 0;
    for (char ch : listings.front()) files += ch == '\n';
    fs::remove_all(root);
    const double t = seconds_since(t0);
    const bool ok = all_ran && same && files > 0 && t < 300.0;
    return {ok, fmt::format("{} commands x threads {{1, 8}} x 2 repeats: all exited 0: {}, {} output files byte-identical: {}, {:.1f}s", commands.size(),
                            all_ran ? "yes" : "no", files, same ? "yes" : "no", t)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "RRM oracle equivalence", rrm_oracle_equivalence},
        {2, "RRM scaling", rrm_scaling},
        {3, "ray-tracer oracle equivalence", tracer_oracle_equivalence},
        {4, "fidelity monotonicity", fidelity_monotonicity},
        {5, "budget compliance", budget_compliance},
        {6, "predictive beats reactive", predictive_beats_reactive},
        {7, "adaptive vs fixed fidelity", adaptive_vs_fixed},
        {8, "blockage effect", blockage_effect},
        {9, "predictor sanity", predictor_sanity},
        {10, "determinism", determinism},
    };
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s  criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return std::min(failed, 255);
}
