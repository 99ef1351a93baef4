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

#include "predtwin/fidelity.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

void BudgetSpec::validate() const {
    if (t_horizon < 0 || t_position < 0 || t_trajpred < 0 || t_rrm_cloud < 0 || t_overhead < 0 || t_guard < 0)
        fail(ErrorKind::ConfigError, "budget terms must be non-negative");
    if (!(kappa > 0.0)) fail(ErrorKind::ConfigError, "kappa must be positive");
}

double compute_budget(const BudgetSpec& s) {
    s.validate();
    const double b = s.t_horizon - s.t_position - s.t_trajpred - s.kappa * (s.t_rrm_cloud + s.t_overhead) - s.t_guard;
    if (b <= 0.0) fail(ErrorKind::NegativeBudget, fmt::format("ray-tracing budget is {} ms", io::fmt_double(b)));
    return b;
}

std::size_t SceneStats::vehicle_primitives(int fidelity) const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < kAllVehicleKinds.size(); ++k)
        n += vehicles_by_kind[k] * vehicle_geometry(kAllVehicleKinds[k], fidelity).primitives.size();
    return n;
}

SceneStats scene_stats(const Scene& scene) {
    SceneStats s;
    s.wall_faces = scene.wall_face_count();
    for (const auto& [id, v] : scene.vehicles) ++s.vehicles_by_kind[static_cast<std::size_t>(v.body.kind)];
    s.receivers = scene.vehicles.size();
    s.sources = scene.rsus.size();
    return s;
}

void LatencyModel::validate() const {
    if (!(c_launch > 0 && c_bounce > 0 && c_isect > 0 && c_capture > 0 && c_path > 0 && c_diffuse > 0 && diffraction_surcharge > 0 && ms_per_unit > 0 &&
          rrm_ms_per_unit > 0))
        fail(ErrorKind::ConfigError, "latency model coefficients must be positive");
}

double estimate_latency(const FidelityConfig& cfg, const SceneStats& stats, const LatencyModel& m, double kappa) {
    const double n = static_cast<double>(cfg.n_rays);
    const double d = static_cast<double>(cfg.max_depth);
    const double faces = static_cast<double>(stats.wall_faces);
    const double prims = static_cast<double>(stats.vehicle_primitives(cfg.vehicle_fidelity));
    const double users = static_cast<double>(stats.receivers);
    double per_source = n * (m.c_launch + d * (m.c_bounce + m.c_isect * (faces + prims) + m.c_capture * users));
    per_source += m.c_path * std::min(static_cast<double>(cfg.n_paths), n * d);
    if (cfg.diffuse) per_source += m.c_diffuse * n * d * (faces + users);
    double units = per_source * static_cast<double>(std::max<std::size_t>(stats.sources, 1));
    if (cfg.diffraction) units *= m.diffraction_surcharge;
    return kappa * units * m.ms_per_unit;
}

double rrm_latency_ms(long long eval_count, std::size_t users, std::size_t rsus, const LatencyModel& m, double kappa) {
    return kappa * static_cast<double>(eval_count) * static_cast<double>(users) * static_cast<double>(rsus) * m.rrm_ms_per_unit;
}

double rmse_path_gain(const std::vector<double>& test, const std::vector<double>& gt) {
    if (test.size() != gt.size()) fail(ErrorKind::LinkSetMismatch, fmt::format("{} test links vs {} ground-truth links", test.size(), gt.size()));
    if (test.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) acc += (test[i] - gt[i]) * (test[i] - gt[i]);
    return std::sqrt(acc / static_cast<double>(test.size()));
}

double rmse_path_gain(const LinkGains& test, const LinkGains& gt) {
    if (test.links != gt.links) fail(ErrorKind::LinkSetMismatch, "test and ground-truth cover different links");
    return rmse_path_gain(test.gain_db, gt.gain_db);
}

LinkGains ChannelSnapshot::gains() const {
    LinkGains g;
    for (std::size_t u = 0; u < h.size(); ++u)
        for (std::size_t b = 0; b < h[u].size(); ++b) {
            g.links.emplace_back(vehicle_ids[u], static_cast<int>(b));
            g.gain_db.push_back(path_gain_db(h[u][b]));
        }
    return g;
}

Vec3 receiver_position(const PlacedVehicle& v) {
    return {v.pose.position.x, v.pose.position.y, dimensions_of(v.body.kind).height + 0.05};
}

namespace {

std::vector<Receiver> receivers_of(const Scene& scene, std::vector<int>& ids) {
    std::vector<Receiver> rx;
    ids.clear();
    for (const auto& [id, v] : scene.vehicles) {
        ids.push_back(id);
        rx.push_back({receiver_position(v), id});
    }
    return rx;
}

}  // namespace

std::vector<std::vector<PathList>> trace_raw(const Scene& scene, const FidelityConfig& cfg, const RadioSetup& radio, std::uint64_t seed, bool parallel) {
    std::vector<int> ids;
    const auto rx = receivers_of(scene, ids);
    std::vector<std::vector<PathList>> out;
    TraceOptions opt;
    opt.parallel = parallel;
    opt.carrier_hz = radio.carrier_hz;
    for (std::size_t b = 0; b < scene.rsus.size(); ++b)
        out.push_back(trace_source_raw(scene, scene.rsus[b].position, rx, cfg, derive_seed(seed, 0x727375ULL, b), opt));
    return out;
}

ChannelSnapshot snapshot_from_raw(const Scene& scene, const std::vector<std::vector<PathList>>& raw, const FidelityConfig& cfg, const RadioSetup& radio) {
    ChannelSnapshot snap;
    for (const auto& [id, v] : scene.vehicles) snap.vehicle_ids.push_back(id);
    const std::size_t U = snap.vehicle_ids.size(), B = scene.rsus.size();
    snap.h.assign(U, std::vector<ChannelVector>(B));
    snap.paths.assign(B, std::vector<PathList>(U));
    for (std::size_t b = 0; b < B; ++b) {
        UlaSpec ula;
        ula.n_elements = radio.n_tx;
        ula.spacing = radio.element_spacing;
        ula.orientation = scene.rsus[b].orientation;
        ula.downtilt = scene.rsus[b].downtilt;
        for (std::size_t u = 0; u < U; ++u) {
            snap.paths[b][u] = select_paths(raw[b][u], cfg);
            snap.h[u][b] = channel_vector(snap.paths[b][u], ula, radio.carrier_hz);
        }
    }
    return snap;
}

ChannelSnapshot compute_channels(const Scene& scene, const FidelityConfig& cfg, const RadioSetup& radio, std::uint64_t seed, bool parallel) {
    return snapshot_from_raw(scene, trace_raw(scene, cfg, radio, seed, parallel), cfg, radio);
}

namespace {

bool dominates(const FidelityConfig& gt, const FidelityConfig& c) {
    return gt.max_depth >= c.max_depth && gt.n_rays >= c.n_rays && gt.n_paths >= c.n_paths && (gt.diffuse || !c.diffuse) &&
           (gt.diffraction || !c.diffraction) && gt.vehicle_fidelity >= c.vehicle_fidelity;
}

}  // namespace

FidelityDecision select_fidelity_logged(const std::vector<FidelityConfig>& candidates, const FidelityConfig& gt_cfg, const Scene& snapshot, BudgetSpec budget,
                                        const LatencyModel& model, const RadioSetup& radio, const RrmParams& rrm, std::uint64_t seed,
                                        const SelectionOptions& opt, bool& feasible_found) {
    if (candidates.empty()) fail(ErrorKind::InvalidArgument, "candidate set is empty");
    gt_cfg.validate();
    model.validate();
    for (const auto& c : candidates) {
        c.validate();
        if (!dominates(gt_cfg, c)) fail(ErrorKind::InvalidArgument, "ground truth " + gt_cfg.label() + " does not dominate candidate " + c.label());
    }

    // 1. ground truth and the RRM cost it implies
    FidelityDecision dec;
    const ChannelSnapshot gt = compute_channels(snapshot, gt_cfg, radio, seed, opt.parallel);
    const LinkGains gt_gains = gt.gains();
    if (gt.users() > 0 && !snapshot.rsus.empty()) {
        const Codebook cb = dft_codebook(radio.n_tx, radio.codebook_size);
        const GainTensor g = build_gain_tensor(gt.h, cb, opt.parallel);
        RrmParams p = rrm;
        p.parallel = opt.parallel;
        const RrmResult r = icd_solve(g, radio.link, p);
        dec.t_rrm_cloud_ms = rrm_latency_ms(r.eval_count, gt.users(), snapshot.rsus.size(), model, 1.0);
    }
    budget.t_rrm_cloud = dec.t_rrm_cloud_ms;
    budget.validate();
    // a non-positive budget leaves the feasible set empty rather than aborting
    dec.budget_ms = budget.t_horizon - budget.t_position - budget.t_trajpred - budget.kappa * (budget.t_rrm_cloud + budget.t_overhead) - budget.t_guard;

    // 2. feasibility and accuracy; configs sharing (n_rays, F_V) share one fan
    const SceneStats stats = scene_stats(snapshot);
    std::map<std::pair<long long, int>, FidelityConfig> groups;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const double lat = estimate_latency(c, stats, model, budget.kappa);
        const bool feasible = dec.budget_ms > 0.0 && lat <= dec.budget_ms;
        dec.log.push_back({i, c, lat, feasible, std::nullopt, false});
        if (!feasible && !opt.evaluate_infeasible) continue;
        auto [it, inserted] = groups.try_emplace({c.n_rays, c.vehicle_fidelity}, c);
        FidelityConfig& g = it->second;
        g.max_depth = std::max(g.max_depth, c.max_depth);
        g.n_paths = std::max(g.n_paths, c.n_paths);
        g.diffuse = g.diffuse || c.diffuse;
        g.diffraction = g.diffraction || c.diffraction;
    }
    for (const auto& [key, group_cfg] : groups) {
        const auto raw = trace_raw(snapshot, group_cfg, radio, seed, opt.parallel);
        for (auto& entry : dec.log) {
            if (entry.cfg.n_rays != key.first || entry.cfg.vehicle_fidelity != key.second) continue;
            if (!entry.feasible && !opt.evaluate_infeasible) continue;
            entry.rmse_db = rmse_path_gain(snapshot_from_raw(snapshot, raw, entry.cfg, radio).gains(), gt_gains);
        }
    }

    const CandidateEval* best = nullptr;
    for (const auto& e : dec.log) {
        if (!e.feasible) continue;
        if (!best || *e.rmse_db < *best->rmse_db || (*e.rmse_db == *best->rmse_db && e.est_latency_ms < best->est_latency_ms)) best = &e;
    }
    feasible_found = best != nullptr;
    if (best) {
        dec.chosen = best->cfg;
        dec.chosen_index = best->index;
        dec.rmse_db = *best->rmse_db;
        dec.est_latency_ms = best->est_latency_ms;
        dec.log[best->index].chosen = true;
    }
    return dec;
}

FidelityDecision select_fidelity(const std::vector<FidelityConfig>& candidates, const FidelityConfig& gt_cfg, const Scene& snapshot, BudgetSpec budget,
                                 const LatencyModel& model, const RadioSetup& radio, const RrmParams& rrm, std::uint64_t seed, const SelectionOptions& opt) {
    bool found = false;
    FidelityDecision d = select_fidelity_logged(candidates, gt_cfg, snapshot, budget, model, radio, rrm, seed, opt, found);
    if (!found)
        fail(ErrorKind::NoFeasibleConfig, fmt::format("none of {} candidates fits the {} ms budget", candidates.size(), io::fmt_double(d.budget_ms)));
    return d;
}

std::vector<FidelityConfig> default_candidates() {
    std::vector<FidelityConfig> out;
    for (long long rays : {100LL, 1000LL, 10000LL, 100000LL, 1000000LL})
        for (int depth : {2, 4, 6, 10})
            for (bool dr : {false, true})
                for (int fv = 0; fv < kVehicleFidelityLevels; ++fv) out.push_back({depth, rays, 10 * rays, dr, false, fv});
    return out;
}

FidelityConfig default_ground_truth() { return {10, 1000000, 10000000, true, true, 3}; }

std::vector<FidelityPreset> default_presets() {
    return {{"low", {3, 1000, 10000, false, false, 1}}, {"medium", {6, 10000, 100000, false, false, 2}}, {"high", {10, 1000000, 10000000, false, false, 3}}};
}

std::string decision_log_csv(const std::vector<std::pair<double, FidelityDecision>>& decisions) {
    std::string out = "timestamp,candidate_id,max_depth,n_rays,n_paths,diffuse,diffraction,vehicle_fidelity,est_latency_ms,rmse_db,feasible,chosen\n";
    for (const auto& [t, d] : decisions)
        for (const auto& e : d.log)
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", io::fmt_double(t), e.index, e.cfg.max_depth, e.cfg.n_rays, e.cfg.n_paths, e.cfg.diffuse ? 1 : 0,
                               e.cfg.diffraction ? 1 : 0, e.cfg.vehicle_fidelity, io::fmt_double(e.est_latency_ms), e.rmse_db ? io::fmt_double(*e.rmse_db) : "",
                               e.feasible ? 1 : 0, e.chosen ? 1 : 0);
    return out;
}

}  // namespace predtwin
