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

#include "predtwin/orchestrator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

using nlohmann::json;

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Predictive: return "predictive";
        case Mode::Reactive: return "reactive";
        case Mode::Oracle: return "oracle";
        case Mode::StochasticBaseline: return "stochastic_baseline";
    }
    return "?";
}

Mode mode_from_string(std::string_view s) {
    if (s == "predictive") return Mode::Predictive;
    if (s == "reactive") return Mode::Reactive;
    if (s == "oracle") return Mode::Oracle;
    if (s == "stochastic_baseline") return Mode::StochasticBaseline;
    fail(ErrorKind::ConfigError, "unknown mode '" + std::string(s) + "'");
}

std::vector<FidelityConfig> CandidateGrid::expand(const std::vector<FidelityPreset>& presets) const {
    std::vector<FidelityConfig> out;
    for (long long rays : n_rays)
        for (int depth : max_depth)
            for (bool dr : diffuse)
                for (int fv : vehicle_fidelity) out.push_back({depth, rays, paths_per_ray * rays, dr, false, fv});
    if (include_presets)
        for (const auto& p : presets)
            if (std::find(out.begin(), out.end(), p.cfg) == out.end()) out.push_back(p.cfg);
    return out;
}

void EpisodeConfig::validate() const {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) fail(ErrorKind::ConfigError, what);
    };
    check(tti_s > 0.0, "tti_s must be positive");
    check(horizon_s >= tti_s, "horizon_s must be >= tti_s");
    check(t_update_s >= tti_s, "t_update_s must be >= tti_s");
    check(staleness_s >= 0.0, "staleness_s must be >= 0");
    check(t_start_s >= 0.0, "t_start_s must be >= 0");
    check(n_tti >= 0, "n_tti must be >= 0");
    check(position_sigma >= 0.0, "position_sigma must be >= 0");
    check(scenario.vehicles >= 0, "scenario.vehicles must be >= 0");
    check(scenario.trace_dt > 0.0, "scenario.trace_dt must be positive");
    check(radio.n_tx >= 1 && radio.codebook_size >= 1, "radio.n_tx and radio.codebook_size must be >= 1");
    check(radio.carrier_hz > 0.0, "radio.carrier_hz must be positive");
    check(predictor.history_length >= 2, "predictor.history_length must be >= 2");
    budget.validate();
    latency.validate();
    radio.link.validate();
    rrm.validate();
    try {
        ground_truth.validate();
        if (fixed_fidelity) fixed_fidelity->validate();
        for (const auto& p : presets) p.cfg.validate();
    } catch (const Error& e) {
        fail(ErrorKind::ConfigError, e.what());
    }
}

FidelityConfig EpisodeConfig::reactive_fidelity() const {
    if (fixed_fidelity) return *fixed_fidelity;
    for (const auto& p : presets)
        if (p.name == "medium") return p.cfg;
    if (!presets.empty()) return presets.front().cfg;
    return ground_truth;
}

// ---------------------------------------------------------------- config IO

namespace {

/// Reads keys off one JSON object and rejects the ones nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) fail(ErrorKind::ConfigError, (where_.empty() ? "config" : where_) + " must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            fail(ErrorKind::ConfigError, fmt::format("{} has the wrong type", path(key)));
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(ErrorKind::ConfigError, "unknown config key " + path(k));
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

FidelityConfig parse_fidelity(const json& j, const std::string& where, const std::vector<FidelityPreset>& presets) {
    if (j.is_string()) {
        for (const auto& p : presets)
            if (p.name == j.get<std::string>()) return p.cfg;
        fail(ErrorKind::ConfigError, fmt::format("{}: unknown preset '{}'", where, j.get<std::string>()));
    }
    ObjectReader r(j, where);
    FidelityConfig c;
    c.n_paths = -1;
    r.get("max_depth", c.max_depth);
    r.get("n_rays", c.n_rays);
    r.get("n_paths", c.n_paths);
    r.get("diffuse", c.diffuse);
    r.get("diffraction", c.diffraction);
    r.get("vehicle_fidelity", c.vehicle_fidelity);
    r.finish();
    if (c.n_paths < 0) c.n_paths = 10 * c.n_rays;
    try {
        c.validate();
    } catch (const Error& e) {
        fail(ErrorKind::ConfigError, where + ": " + e.what());
    }
    return c;
}

json fidelity_to_json(const FidelityConfig& c) {
    return {{"max_depth", c.max_depth}, {"n_rays", c.n_rays},   {"n_paths", c.n_paths},
            {"diffuse", c.diffuse},     {"diffraction", c.diffraction}, {"vehicle_fidelity", c.vehicle_fidelity}};
}

}  // namespace

EpisodeConfig parse_episode_config(const json& doc) {
    EpisodeConfig cfg;
    ObjectReader r(doc, "");

    std::string mode = to_string(cfg.mode);
    r.get("mode", mode);
    r.get("tti_s", cfg.tti_s);
    r.get("horizon_s", cfg.horizon_s);
    r.get("t_update_s", cfg.t_update_s);
    r.get("staleness_s", cfg.staleness_s);
    r.get("t_start_s", cfg.t_start_s);
    r.get("n_tti", cfg.n_tti);
    r.get("position_sigma", cfg.position_sigma);
    r.get("seed", cfg.seed);
    std::string overrun = "linear";
    r.get("overrun", overrun);
    if (overrun == "linear")
        cfg.overrun = OverrunPolicy::Linear;
    else if (overrun == "hard_drop")
        cfg.overrun = OverrunPolicy::HardDrop;
    else
        fail(ErrorKind::ConfigError, "overrun must be 'linear' or 'hard_drop'");

    if (const json* p = r.child("presets")) {
        if (!p->is_object()) fail(ErrorKind::ConfigError, "presets must be an object");
        cfg.presets.clear();
        for (const auto& [name, v] : p->items()) cfg.presets.push_back({name, parse_fidelity(v, "presets." + name, {})});
    }
    if (const json* g = r.child("ground_truth")) cfg.ground_truth = parse_fidelity(*g, "ground_truth", cfg.presets);
    if (const json* f = r.child("fixed_fidelity")) {
        cfg.fixed_fidelity = parse_fidelity(*f, "fixed_fidelity", cfg.presets);
        if (f->is_string()) cfg.fixed_label = f->get<std::string>();
    }
    // "predictive@medium" is shorthand for a fixed preset
    if (auto at = mode.find('@'); at != std::string::npos) {
        cfg.fixed_fidelity = parse_fidelity(json(mode.substr(at + 1)), "mode", cfg.presets);
        cfg.fixed_label = mode.substr(at + 1);
        mode = mode.substr(0, at);
    }
    cfg.mode = mode_from_string(mode);

    if (const json* c = r.child("candidates")) {
        ObjectReader cr(*c, "candidates");
        cr.get("n_rays", cfg.candidates.n_rays);
        cr.get("max_depth", cfg.candidates.max_depth);
        cr.get("diffuse", cfg.candidates.diffuse);
        cr.get("vehicle_fidelity", cfg.candidates.vehicle_fidelity);
        cr.get("paths_per_ray", cfg.candidates.paths_per_ray);
        cr.get("include_presets", cfg.candidates.include_presets);
        cr.finish();
    }

    if (const json* s = r.child("scenario")) {
        ObjectReader sr(*s, "scenario");
        auto& sc = cfg.scenario;
        sr.get("map", sc.map_path);
        sr.get("trace", sc.trace_path);
        sr.get("vehicles", sc.vehicles);
        sr.get("trace_dt", sc.trace_dt);
        sr.get("speed_limit", sc.speed_limit);
        sr.get("traffic_seed", sc.traffic_seed);
        if (const json* m = sr.child("mix")) {
            ObjectReader mr(*m, "scenario.mix");
            mr.get("car", sc.mix.car);
            mr.get("bus", sc.mix.bus);
            mr.get("box_truck", sc.mix.box_truck);
            mr.finish();
        }
        if (const json* g = sr.child("grid")) {
            ObjectReader gr(*g, "scenario.grid");
            auto& gs = sc.grid;
            gr.get("rows", gs.rows);
            gr.get("cols", gs.cols);
            gr.get("block", gs.block);
            gr.get("road_width", gs.road_width);
            gr.get("setback", gs.setback);
            gr.get("min_height", gs.min_height);
            gr.get("max_height", gs.max_height);
            gr.get("extra_buildings", gs.extra_buildings);
            gr.get("rsu_nodes", gs.rsu_nodes);
            gr.get("rsu_height", gs.rsu_height);
            gr.get("rsu_downtilt_deg", gs.rsu_downtilt_deg);
            gr.get("rsu_orientation_deg", gs.rsu_orientation_deg);
            gr.get("seed", gs.seed);
            gr.finish();
        }
        sr.finish();
    }
    if (cfg.scenario.grid.rsu_nodes.empty()) cfg.scenario.grid.rsu_nodes = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};

    if (const json* b = r.child("budget")) {
        ObjectReader br(*b, "budget");
        br.get("t_horizon_ms", cfg.budget.t_horizon);
        br.get("t_position_ms", cfg.budget.t_position);
        br.get("t_trajpred_ms", cfg.budget.t_trajpred);
        br.get("t_overhead_ms", cfg.budget.t_overhead);
        br.get("t_guard_ms", cfg.budget.t_guard);
        br.get("kappa", cfg.budget.kappa);
        br.finish();
    }
    if (const json* l = r.child("latency_model")) {
        ObjectReader lr(*l, "latency_model");
        auto& m = cfg.latency;
        lr.get("c_launch", m.c_launch);
        lr.get("c_bounce", m.c_bounce);
        lr.get("c_isect", m.c_isect);
        lr.get("c_capture", m.c_capture);
        lr.get("c_path", m.c_path);
        lr.get("c_diffuse", m.c_diffuse);
        lr.get("diffraction_surcharge", m.diffraction_surcharge);
        lr.get("ms_per_unit", m.ms_per_unit);
        lr.get("rrm_ms_per_unit", m.rrm_ms_per_unit);
        lr.finish();
    }
    if (const json* rd = r.child("radio")) {
        ObjectReader rr(*rd, "radio");
        auto& ra = cfg.radio;
        rr.get("n_tx", ra.n_tx);
        rr.get("element_spacing", ra.element_spacing);
        rr.get("carrier_hz", ra.carrier_hz);
        rr.get("codebook_size", ra.codebook_size);
        rr.get("p_tx_dbm", ra.link.p_tx_dbm);
        rr.get("bandwidth_hz", ra.link.bandwidth_hz);
        rr.get("noise_figure_db", ra.link.noise_figure_db);
        rr.get("gamma_min_db", ra.link.gamma_min_db);
        rr.finish();
    }
    cfg.rrm.gamma_min_db = cfg.radio.link.gamma_min_db;
    if (const json* q = r.child("rrm")) {
        ObjectReader qr(*q, "rrm");
        qr.get("load_limit", cfg.rrm.load_limit);
        qr.get("outage_penalty", cfg.rrm.outage_penalty);
        qr.get("n_restarts", cfg.rrm.n_restarts);
        qr.get("max_iters", cfg.rrm.max_iters);
        qr.get("exhaustive_cap", cfg.rrm.exhaustive_cap);
        qr.finish();
    }
    if (const json* p = r.child("predictor")) {
        ObjectReader pr(*p, "predictor");
        pr.get("kind", cfg.predictor.kind);
        pr.get("history_length", cfg.predictor.history_length);
        pr.get("q_var", cfg.predictor.kf.q_var);
        pr.get("r", cfg.predictor.kf.r);
        pr.get("p0_v", cfg.predictor.kf.p0_v);
        pr.get("p0_p", cfg.predictor.kf.p0_p);
        pr.finish();
        if (cfg.predictor.kind != "kf" && cfg.predictor.kind != "cv") fail(ErrorKind::ConfigError, "predictor.kind must be 'kf' or 'cv'");
    }
    r.finish();
    cfg.validate();
    return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::ConfigError, "override must look like key.path=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &doc;
    const auto parts = io::split(key, '.');
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) fail(ErrorKind::ConfigError, "override path " + key + " crosses a non-object value");
        node = &(*node)[parts[i]];
        if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) fail(ErrorKind::ConfigError, "override path " + key + " crosses a non-object value");
    (*node)[parts.back()] = std::move(value);
}

EpisodeConfig load_episode_config(const std::string& path, const std::vector<std::string>& overrides) {
    if (!std::filesystem::exists(path)) fail(ErrorKind::ConfigError, "config file not found: " + path);
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ConfigError, fmt::format("{} is not valid JSON: {}", path, e.what()));
    }
    // file-relative scenario paths; paths given as overrides stay CWD-relative
    if (doc.is_object() && doc.contains("scenario") && doc["scenario"].is_object()) {
        const auto dir = std::filesystem::path(path).parent_path();
        for (const char* key : {"map", "trace"}) {
            if (!doc["scenario"].contains(key)) continue;
            auto& v = doc["scenario"][key];
            if (v.is_string() && !v.get<std::string>().empty() && std::filesystem::path(v.get<std::string>()).is_relative())
                v = (dir / v.get<std::string>()).lexically_normal().string();
        }
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_episode_config(doc);
}

json episode_config_to_json(const EpisodeConfig& c) {
    json presets = json::object();
    for (const auto& p : c.presets) presets[p.name] = fidelity_to_json(p.cfg);
    json mode = c.fixed_label.empty() ? std::string(to_string(c.mode)) : std::string(to_string(c.mode)) + "@" + c.fixed_label;
    const auto& s = c.scenario;
    return {
        {"mode", mode},
        {"fixed_fidelity", c.fixed_fidelity ? fidelity_to_json(*c.fixed_fidelity) : json(nullptr)},
        {"tti_s", c.tti_s},
        {"horizon_s", c.horizon_s},
        {"t_update_s", c.t_update_s},
        {"staleness_s", c.staleness_s},
        {"t_start_s", c.t_start_s},
        {"n_tti", c.n_tti},
        {"position_sigma", c.position_sigma},
        {"overrun", c.overrun == OverrunPolicy::Linear ? "linear" : "hard_drop"},
        {"seed", c.seed},
        {"scenario",
         {{"map", s.map_path},
          {"trace", s.trace_path},
          {"vehicles", s.vehicles},
          {"trace_dt", s.trace_dt},
          {"speed_limit", s.speed_limit},
          {"traffic_seed", s.traffic_seed},
          {"mix", {{"car", s.mix.car}, {"bus", s.mix.bus}, {"box_truck", s.mix.box_truck}}},
          {"grid",
           {{"rows", s.grid.rows},
            {"cols", s.grid.cols},
            {"block", s.grid.block},
            {"road_width", s.grid.road_width},
            {"setback", s.grid.setback},
            {"min_height", s.grid.min_height},
            {"max_height", s.grid.max_height},
            {"extra_buildings", s.grid.extra_buildings},
            {"rsu_nodes", s.grid.rsu_nodes},
            {"rsu_height", s.grid.rsu_height},
            {"rsu_downtilt_deg", s.grid.rsu_downtilt_deg},
            {"rsu_orientation_deg", s.grid.rsu_orientation_deg},
            {"seed", s.grid.seed}}}}},
        {"ground_truth", fidelity_to_json(c.ground_truth)},
        {"candidates",
         {{"n_rays", c.candidates.n_rays},
          {"max_depth", c.candidates.max_depth},
          {"diffuse", c.candidates.diffuse},
          {"vehicle_fidelity", c.candidates.vehicle_fidelity},
          {"paths_per_ray", c.candidates.paths_per_ray},
          {"include_presets", c.candidates.include_presets}}},
        {"presets", presets},
        {"budget",
         {{"t_horizon_ms", c.budget.t_horizon},
          {"t_position_ms", c.budget.t_position},
          {"t_trajpred_ms", c.budget.t_trajpred},
          {"t_overhead_ms", c.budget.t_overhead},
          {"t_guard_ms", c.budget.t_guard},
          {"kappa", c.budget.kappa}}},
        {"latency_model",
         {{"c_launch", c.latency.c_launch},
          {"c_bounce", c.latency.c_bounce},
          {"c_isect", c.latency.c_isect},
          {"c_capture", c.latency.c_capture},
          {"c_path", c.latency.c_path},
          {"c_diffuse", c.latency.c_diffuse},
          {"diffraction_surcharge", c.latency.diffraction_surcharge},
          {"ms_per_unit", c.latency.ms_per_unit},
          {"rrm_ms_per_unit", c.latency.rrm_ms_per_unit}}},
        {"radio",
         {{"n_tx", c.radio.n_tx},
          {"element_spacing", c.radio.element_spacing},
          {"carrier_hz", c.radio.carrier_hz},
          {"codebook_size", c.radio.codebook_size},
          {"p_tx_dbm", c.radio.link.p_tx_dbm},
          {"bandwidth_hz", c.radio.link.bandwidth_hz},
          {"noise_figure_db", c.radio.link.noise_figure_db},
          {"gamma_min_db", c.radio.link.gamma_min_db}}},
        {"rrm",
         {{"load_limit", c.rrm.load_limit},
          {"outage_penalty", c.rrm.outage_penalty},
          {"n_restarts", c.rrm.n_restarts},
          {"max_iters", c.rrm.max_iters},
          {"exhaustive_cap", c.rrm.exhaustive_cap}}},
        {"predictor",
         {{"kind", c.predictor.kind},
          {"history_length", c.predictor.history_length},
          {"q_var", c.predictor.kf.q_var},
          {"r", c.predictor.kf.r},
          {"p0_v", c.predictor.kf.p0_v},
          {"p0_p", c.predictor.kf.p0_p}}},
    };
}

EpisodeConfig with_mode(const EpisodeConfig& base, const std::string& mode_spec) {
    EpisodeConfig cfg = base;
    cfg.fixed_fidelity.reset();
    cfg.fixed_label.clear();
    const auto at = mode_spec.find('@');
    cfg.mode = mode_from_string(mode_spec.substr(0, at));
    if (at != std::string::npos) {
        const std::string name = mode_spec.substr(at + 1);
        auto it = std::find_if(cfg.presets.begin(), cfg.presets.end(), [&](const FidelityPreset& p) { return p.name == name; });
        if (it == cfg.presets.end()) fail(ErrorKind::ConfigError, "unknown preset '" + name + "'");
        cfg.fixed_fidelity = it->cfg;
        cfg.fixed_label = name;
    }
    return cfg;
}

// ---------------------------------------------------------------- scenario

namespace {

double required_duration(const EpisodeConfig& cfg) { return cfg.t_start_s + std::max(0, cfg.n_tti - 1) * cfg.tti_s + cfg.horizon_s; }

}  // namespace

Scenario load_scenario(const ScenarioSpec& spec, double required) {
    Scenario sc;
    MapSpec map;
    if (spec.map_path.empty()) {
        map = make_grid_city(spec.grid);
    } else {
        map = load_map_file(spec.map_path);
        sc.input_files.push_back(spec.map_path);
    }
    sc.base = build_scene(map);
    if (spec.trace_path.empty()) {
        const RoadNetwork net = generate_network(spec.grid.rows, spec.grid.cols, spec.grid.block, spec.speed_limit);
        // one extra step of slack so the last slot never rounds past the end
        sc.trace = generate_traffic(net, spec.vehicles, spec.mix, spec.traffic_seed, required + spec.trace_dt, spec.trace_dt);
    } else {
        if (!std::filesystem::exists(spec.trace_path)) fail(ErrorKind::ConfigError, "trace file not found: " + spec.trace_path);
        sc.trace = ingest_trace(spec.trace_path, spec.speed_limit);
        sc.input_files.push_back(spec.trace_path);
        if (!sc.trace.vehicles.empty() && sc.trace.t0 + sc.trace.duration() + 1e-9 < required)
            fail(ErrorKind::ConfigError, fmt::format("trace {} ends at {} s but the episode needs {} s", spec.trace_path,
                                                     io::fmt_double(sc.trace.t0 + sc.trace.duration()), io::fmt_double(required)));
    }
    return sc;
}

// ---------------------------------------------------------------- shared state

void DecisionBoard::publish(PublishedDecision d) {
    auto p = std::make_shared<const PublishedDecision>(std::move(d));
    std::lock_guard lock(mu_);
    latest_ = std::move(p);
}

std::shared_ptr<const PublishedDecision> DecisionBoard::latest() const {
    std::lock_guard lock(mu_);
    return latest_;
}

std::shared_ptr<const TruthSnapshot> TruthCache::get(long long step, const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = map_.find({step, key});
    return it == map_.end() ? nullptr : it->second;
}

void TruthCache::put(long long step, const std::string& key, std::shared_ptr<const TruthSnapshot> s) {
    std::lock_guard lock(mu_);
    map_[{step, key}] = std::move(s);
}

// ---------------------------------------------------------------- phases

PublishedDecision phase1_calibrate(const Scene& context, const std::vector<FidelityConfig>& candidates, const EpisodeConfig& cfg, double t,
                                   std::uint64_t seed) {
    PublishedDecision out;
    out.t = t;
    bool found = false;
    out.decision = select_fidelity_logged(candidates, cfg.ground_truth, context, cfg.budget, cfg.latency, cfg.radio, cfg.rrm, seed, {}, found);
    if (!found) {
        // graceful degradation: cheapest candidate, first in list order on ties
        auto& d = out.decision;
        std::size_t best = 0;
        for (std::size_t i = 1; i < d.log.size(); ++i)
            if (d.log[i].est_latency_ms < d.log[best].est_latency_ms) best = i;
        d.chosen = d.log[best].cfg;
        d.chosen_index = best;
        d.est_latency_ms = d.log[best].est_latency_ms;
        d.rmse_db = std::numeric_limits<double>::quiet_NaN();
        d.log[best].chosen = true;
        out.fallback = true;
    }
    return out;
}

double effective_tx_fraction(double total_ms, double tti_ms, OverrunPolicy policy) {
    if (total_ms <= tti_ms) return 1.0;
    if (policy == OverrunPolicy::HardDrop) return 0.0;
    const double overrun = total_ms - tti_ms;
    return std::clamp((tti_ms - overrun) / tti_ms, 0.0, 1.0);
}

NetworkMetrics score_realized(const Assignment& plan, const BeamState& beams, const GainTensor& truth, const LinkBudget& link, double tx_fraction) {
    const int U = truth.users();
    if (U == 0) return {};
    if (static_cast<int>(plan.serving.size()) != U) fail(ErrorKind::DimensionMismatch, "plan and truth disagree on the user count");
    if (static_cast<int>(beams.size()) != truth.rsus()) fail(ErrorKind::DimensionMismatch, "beam state length differs from RSU count");
    std::vector<double> s(static_cast<std::size_t>(U), 0.0);
    for (int u = 0; u < U; ++u) {
        const int b = plan.serving[static_cast<std::size_t>(u)];
        if (b >= 0) s[static_cast<std::size_t>(u)] = sinr(truth, beams, u, b, link);
    }
    NetworkMetrics m = network_metrics(plan, s, link);
    if (tx_fraction <= 0.0) {
        m.sum_rate = 0.0;
        m.outage_prob = 1.0;  // nothing was transmitted in this slot
    } else {
        m.sum_rate *= tx_fraction;
    }
    return m;
}

EpisodeAggregates aggregate(const std::vector<TtiRecord>& records) {
    EpisodeAggregates a;
    if (records.empty()) return a;
    for (const auto& r : records) {
        a.mean_sum_rate += r.sum_rate;
        a.mean_outage += r.outage_prob;
        a.mean_rmse_db += r.rmse_db;
        a.mean_fde_m += r.fde_m;
        a.deadline_violation_rate += r.deadline_met ? 0.0 : 1.0;
    }
    const double n = static_cast<double>(records.size());
    a.mean_sum_rate /= n;
    a.mean_outage /= n;
    a.mean_rmse_db /= n;
    a.mean_fde_m /= n;
    a.deadline_violation_rate /= n;
    return a;
}

namespace {

constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kPlanStream = 0x706c616eULL;
constexpr std::uint64_t kObserveStream = 0x6f6273ULL;
constexpr std::uint64_t kCalibrationStream = 0x63616cULL;
constexpr std::uint64_t kRrmStream = 0x72726dULL;
constexpr std::uint64_t kLosStream = 0x6c6f73ULL;
constexpr std::uint64_t kShadowStream = 0x73746fULL;

double step_time(const Trace& tr, std::size_t k) { return tr.t0 + static_cast<double>(k) * tr.dt; }

/// Noisy observed poses at trace step k.
std::map<int, Pose> observed_poses(const Trace& tr, std::size_t k, double sigma, std::uint64_t seed) {
    std::map<int, Pose> out;
    const std::uint64_t obs_seed = derive_seed(seed, kObserveStream);
    for (std::size_t i = 0; i < tr.vehicles.size(); ++i)
        out[tr.vehicles[i].id] = observe_pose(tr.steps[k][i], sigma, obs_seed, tr.vehicles[i].id, static_cast<long long>(k));
    return out;
}

std::map<int, Pose> true_poses(const Trace& tr, std::size_t k) {
    std::map<int, Pose> out;
    for (std::size_t i = 0; i < tr.vehicles.size(); ++i) out[tr.vehicles[i].id] = tr.steps[k][i];
    return out;
}

/// Predicted poses at `target` from noisy history ending at step k.
std::map<int, Pose> predicted_poses(const Trace& tr, std::size_t k, double target, const Predictor& predictor, int history, double sigma,
                                    std::uint64_t seed) {
    if (k < 1) fail(ErrorKind::ConfigError, "t_start_s leaves fewer than two history samples; raise it");
    const std::size_t first = k + 1 >= static_cast<std::size_t>(history) ? k + 1 - static_cast<std::size_t>(history) : 0;
    const std::uint64_t obs_seed = derive_seed(seed, kObserveStream);
    std::map<int, Pose> out;
    for (std::size_t i = 0; i < tr.vehicles.size(); ++i) {
        const int id = tr.vehicles[i].id;
        HistoryWindow h;
        h.dt = tr.dt;
        for (std::size_t j = first; j <= k; ++j) h.states.push_back(observe_pose(tr.steps[j][i], sigma, obs_seed, id, static_cast<long long>(j)));
        const PredictedPose p = predictor.predict(h, target - step_time(tr, k));
        out[id] = make_pose(p.position, p.heading, h.current().speed);
    }
    return out;
}

double mean_position_error(const std::map<int, Pose>& planned, const std::map<int, Pose>& truth) {
    if (planned.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& [id, p] : planned) acc += norm(p.position - truth.at(id).position);
    return acc / static_cast<double>(planned.size());
}

ChannelSnapshot stochastic_channels(const Scene& scene, const RadioSetup& radio, std::uint64_t seed, long long tti) {
    ChannelSnapshot snap;
    for (const auto& [id, v] : scene.vehicles) snap.vehicle_ids.push_back(id);
    snap.h.assign(snap.vehicle_ids.size(), std::vector<ChannelVector>(scene.rsus.size()));
    snap.paths.assign(scene.rsus.size(), std::vector<PathList>(snap.vehicle_ids.size()));
    std::size_t u = 0;
    for (const auto& [id, v] : scene.vehicles) {
        const Vec3 rx = receiver_position(v);
        for (std::size_t b = 0; b < scene.rsus.size(); ++b) {
            const Vec3 tx = scene.rsus[b].position;
            const double d2 = norm(rx.xy() - tx.xy());
            const double d3 = distance(rx, tx);
            const bool los = hash_uniform(derive_seed(seed, kLosStream, tti, id, b)) < umi_los_probability(d2);
            snap.h[u][b] = stochastic_baseline_channel(d3, los, derive_seed(seed, kShadowStream, tti, id, b), radio.n_tx, radio.carrier_hz);
        }
        ++u;
    }
    return snap;
}

}  // namespace

EpisodeMetrics run_episode(const EpisodeConfig& cfg, const Scenario& sc, TruthCache* cache) {
    cfg.validate();
    const Trace& tr = sc.trace;
    const auto kinds = tr.kinds();
    TruthCache local_cache;
    if (!cache) cache = &local_cache;

    const double tp_s = cfg.budget.t_position / 1000.0;
    const double tti_ms = cfg.tti_s * 1000.0;
    const double kappa = cfg.budget.kappa;
    const Codebook cb = dft_codebook(cfg.radio.n_tx, cfg.radio.codebook_size);
    const auto predictor = make_predictor(cfg.predictor);
    const bool adaptive = cfg.mode == Mode::Predictive && !cfg.fixed_fidelity;
    const std::vector<FidelityConfig> candidates = adaptive ? cfg.candidates.expand(cfg.presets) : std::vector<FidelityConfig>{};
    const std::string truth_key = fmt::format("{}/{}/{}", cfg.ground_truth.label(), cfg.seed, cfg.radio.n_tx);

    auto truth_at = [&](std::size_t step) {
        if (auto hit = cache->get(static_cast<long long>(step), truth_key)) return hit;
        const Scene scene = update_poses(sc.base, true_poses(tr, step), cfg.ground_truth.vehicle_fidelity, kinds);
        auto snap = std::make_shared<TruthSnapshot>();
        snap->channels = compute_channels(scene, cfg.ground_truth, cfg.radio, derive_seed(cfg.seed, kTruthStream, step));
        snap->gains = build_gain_tensor(snap->channels.h, cb);
        cache->put(static_cast<long long>(step), truth_key, snap);
        return std::shared_ptr<const TruthSnapshot>(snap);
    };

    DecisionBoard board;
    EpisodeMetrics out;
    for (long long n = 0; n < cfg.n_tti; ++n) {
        const double t = cfg.t_start_s + static_cast<double>(n) * cfg.tti_s;
        const double target = t + cfg.horizon_s;
        const std::size_t target_step = tr.vehicles.empty() ? 0 : tr.step_index(target);

        TtiRecord rec;
        rec.t = t;
        rec.target_t = target;

        // Phase 1 on wall-clock multiples of t_update; Phase 2 below reads
        // whatever is published. An episode starting off-cadence calibrates
        // once up front so there is something to read.
        const bool on_cadence = std::abs(std::remainder(t, cfg.t_update_s)) <= 1e-9 * std::max(1.0, t);
        if (adaptive && (on_cadence || !board.latest())) {
            const std::size_t k = tr.vehicles.empty() ? 0 : tr.step_index(t - tp_s);
            const Scene context = update_poses(sc.base, tr.vehicles.empty() ? std::map<int, Pose>{} : observed_poses(tr, k, cfg.position_sigma, cfg.seed),
                                               cfg.ground_truth.vehicle_fidelity, kinds);
            board.publish(phase1_calibrate(context, candidates, cfg, t, derive_seed(cfg.seed, kCalibrationStream, n)));
            out.decisions.push_back(*board.latest());
        }

        // planning poses
        std::map<int, Pose> planned;
        if (!tr.vehicles.empty()) {
            switch (cfg.mode) {
                case Mode::Predictive:
                case Mode::StochasticBaseline: {
                    const std::size_t k = tr.step_index(t - tp_s);
                    planned = predicted_poses(tr, k, target, *predictor, cfg.predictor.history_length, cfg.position_sigma, cfg.seed);
                    rec.latest_observation_s = step_time(tr, k);
                    break;
                }
                case Mode::Reactive: {
                    const std::size_t k = tr.step_index(target - cfg.staleness_s);
                    planned = observed_poses(tr, k, cfg.position_sigma, cfg.seed);
                    rec.latest_observation_s = step_time(tr, k);
                    break;
                }
                case Mode::Oracle:
                    planned = true_poses(tr, target_step);
                    rec.latest_observation_s = step_time(tr, target_step);
                    break;
            }
        }
        const auto truth = truth_at(target_step);
        if (!tr.vehicles.empty()) rec.fde_m = mean_position_error(planned, true_poses(tr, target_step));

        // planning channels
        std::optional<FidelityConfig> fid;
        switch (cfg.mode) {
            case Mode::Predictive:
                if (cfg.fixed_fidelity) {
                    fid = cfg.fixed_fidelity;
                } else {
                    const auto pub = board.latest();
                    fid = pub->decision.chosen;
                    rec.budget_violation = pub->fallback;
                }
                break;
            case Mode::Reactive: fid = cfg.reactive_fidelity(); break;
            case Mode::Oracle: fid = cfg.ground_truth; break;
            case Mode::StochasticBaseline: break;
        }
        rec.config = fid ? fid->label() : "stochastic";

        std::shared_ptr<const TruthSnapshot> plan;
        if (cfg.mode == Mode::Oracle) {
            plan = truth;
        } else {
            const Scene scene = update_poses(sc.base, planned, fid ? fid->vehicle_fidelity : cfg.ground_truth.vehicle_fidelity, kinds);
            auto p = std::make_shared<TruthSnapshot>();
            if (fid) {
                p->channels = compute_channels(scene, *fid, cfg.radio, derive_seed(cfg.seed, kPlanStream, n));
                rec.latency.trace_ms = estimate_latency(*fid, scene_stats(scene), cfg.latency, kappa);
            } else {
                p->channels = stochastic_channels(scene, cfg.radio, cfg.seed, n);
            }
            p->gains = build_gain_tensor(p->channels.h, cb);
            plan = p;
            rec.latency.position_ms = cfg.budget.t_position;
            rec.latency.predict_ms = cfg.mode == Mode::Reactive ? 0.0 : cfg.budget.t_trajpred;
            rec.latency.scene_ms = kappa * cfg.budget.t_overhead;
        }
        rec.rmse_db = rmse_path_gain(plan->channels.gains(), truth->channels.gains());

        // RRM and realization
        const int U = plan->gains.users(), B = plan->gains.rsus();
        rec.users = U;
        if (U > 0 && B > 0) {
            RrmParams rp = cfg.rrm;
            rp.seed = derive_seed(cfg.seed, kRrmStream, n);
            const RrmResult res = icd_solve(plan->gains, cfg.radio.link, rp);
            rec.beams = res.beams;
            if (cfg.mode != Mode::Oracle) rec.latency.rrm_ms = rrm_latency_ms(res.eval_count, static_cast<std::size_t>(U), static_cast<std::size_t>(B), cfg.latency, kappa);
            rec.deadline_met = rec.latency.total() <= tti_ms;
            rec.effective_tx_fraction = effective_tx_fraction(rec.latency.total(), tti_ms, cfg.overrun);
            for (int b : res.eval.assignment.serving) rec.served += b >= 0 ? 1 : 0;
            const NetworkMetrics m = score_realized(res.eval.assignment, res.beams, truth->gains, cfg.radio.link, rec.effective_tx_fraction);
            rec.sum_rate = m.sum_rate;
            rec.outage_prob = m.outage_prob;
        } else {
            rec.deadline_met = rec.latency.total() <= tti_ms;
            rec.effective_tx_fraction = effective_tx_fraction(rec.latency.total(), tti_ms, cfg.overrun);
        }
        out.records.push_back(std::move(rec));
    }
    out.aggregates = aggregate(out.records);
    return out;
}

EpisodeMetrics run_episode(const EpisodeConfig& cfg) {
    cfg.validate();
    const Scenario sc = load_scenario(cfg.scenario, required_duration(cfg));
    return run_episode(cfg, sc);
}

ComparisonReport compare_modes(const EpisodeConfig& base, const std::vector<std::string>& modes, const std::vector<std::uint64_t>& seeds) {
    if (modes.size() < 2) fail(ErrorKind::ConfigError, "comparison needs at least two modes");
    ComparisonReport rep;
    rep.modes = modes;
    rep.seeds = seeds;
    for (std::uint64_t seed : seeds) {
        EpisodeConfig cfg = base;
        cfg.seed = seed;
        if (cfg.scenario.trace_path.empty()) cfg.scenario.traffic_seed = seed;
        cfg.validate();
        const Scenario sc = load_scenario(cfg.scenario, required_duration(cfg));
        TruthCache cache;
        for (const auto& m : modes) rep.runs.push_back({m, seed, run_episode(with_mode(cfg, m), sc, &cache).aggregates});
    }
    return rep;
}

std::string ComparisonReport::to_csv() const {
    std::string out = "seed,mode,mean_sum_rate,mean_outage,mean_rmse_db,mean_fde_m,deadline_violation_rate,delta_sum_rate,delta_outage\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const auto& ref = runs[i - i % modes.size()].aggregates;
        const auto& a = r.aggregates;
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.seed, r.mode, io::fmt_double(a.mean_sum_rate), io::fmt_double(a.mean_outage),
                           io::fmt_double(a.mean_rmse_db), io::fmt_double(a.mean_fde_m), io::fmt_double(a.deadline_violation_rate),
                           io::fmt_double(a.mean_sum_rate - ref.mean_sum_rate), io::fmt_double(a.mean_outage - ref.mean_outage));
    }
    return out;
}

std::string records_to_csv(const std::vector<TtiRecord>& records) {
    std::string out =
        "t,target_t,config,position_ms,predict_ms,scene_ms,trace_ms,rrm_ms,total_ms,deadline_met,budget_violation,effective_tx_fraction,beams,users,"
        "served,sum_rate,outage_prob,rmse_db,fde_m,latest_observation_s\n";
    for (const auto& r : records) {
        std::string beams;
        for (std::size_t i = 0; i < r.beams.size(); ++i) beams += (i ? ";" : "") + std::to_string(r.beams[i]);
        const auto& l = r.latency;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", io::fmt_double(r.t), io::fmt_double(r.target_t), r.config,
                           io::fmt_double(l.position_ms), io::fmt_double(l.predict_ms), io::fmt_double(l.scene_ms), io::fmt_double(l.trace_ms),
                           io::fmt_double(l.rrm_ms), io::fmt_double(l.total()), r.deadline_met ? 1 : 0, r.budget_violation ? 1 : 0,
                           io::fmt_double(r.effective_tx_fraction), beams, r.users, r.served, io::fmt_double(r.sum_rate), io::fmt_double(r.outage_prob),
                           io::fmt_double(r.rmse_db), io::fmt_double(r.fde_m), io::fmt_double(r.latest_observation_s));
    }
    return out;
}

json aggregates_to_json(const EpisodeMetrics& m) {
    std::size_t fallbacks = 0;
    json decisions = json::array();
    for (const auto& d : m.decisions) {
        fallbacks += d.fallback ? 1 : 0;
        decisions.push_back({{"t", d.t},
                             {"config", d.decision.chosen.label()},
                             {"est_latency_ms", d.decision.est_latency_ms},
                             {"budget_ms", d.decision.budget_ms},
                             {"rmse_db", std::isnan(d.decision.rmse_db) ? json(nullptr) : json(d.decision.rmse_db)},
                             {"fallback", d.fallback}});
    }
    const auto& a = m.aggregates;
    return {{"n_tti", m.records.size()},
            {"mean_sum_rate", a.mean_sum_rate},
            {"mean_outage", a.mean_outage},
            {"mean_rmse_db", a.mean_rmse_db},
            {"mean_fde_m", a.mean_fde_m},
            {"deadline_violation_rate", a.deadline_violation_rate},
            {"calibrations", m.decisions.size()},
            {"fallbacks", fallbacks},
            {"decisions", decisions}};
}

}  // namespace predtwin
