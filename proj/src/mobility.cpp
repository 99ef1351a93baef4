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

#include "predtwin/mobility.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

Aabb2 RoadNetwork::bounds() const {
    Aabb2 box;
    for (const Vec2& n : nodes) box.expand(n);
    return box;
}

RoadNetwork generate_network(int rows, int cols, double block_size, double speed_limit) {
    if (rows < 1 || cols < 1) fail(ErrorKind::InvalidArgument, "network needs rows, cols >= 1");
    if (!(block_size > 0.0)) fail(ErrorKind::InvalidArgument, "block size must be positive");
    RoadNetwork net;
    net.rows = rows;
    net.cols = cols;
    net.block = block_size;
    for (int r = 0; r <= rows; ++r)
        for (int c = 0; c <= cols; ++c) net.nodes.push_back({c * block_size, r * block_size});
    for (int r = 0; r <= rows; ++r)
        for (int c = 0; c < cols; ++c) net.segments.push_back({net.node_index(r, c), net.node_index(r, c + 1), speed_limit});
    for (int c = 0; c <= cols; ++c)
        for (int r = 0; r < rows; ++r) net.segments.push_back({net.node_index(r, c), net.node_index(r + 1, c), speed_limit});
    net.incident.resize(net.nodes.size());
    for (std::size_t s = 0; s < net.segments.size(); ++s) {
        net.incident[static_cast<std::size_t>(net.segments[s].a)].push_back(static_cast<int>(s));
        net.incident[static_cast<std::size_t>(net.segments[s].b)].push_back(static_cast<int>(s));
    }
    return net;
}

namespace {

struct Leg {
    Vec2 a, b;
    double length() const { return norm(b - a); }
    Vec2 at(double s) const {
        const double len = length();
        return len > 0.0 ? a + (b - a) * (s / len) : a;
    }
    double heading() const { return angle_of(b - a); }
};

struct Agent {
    int id = 0;
    VehicleKind kind = VehicleKind::Car;
    double length = 0.0;
    int seg = 0;
    int from = 0;
    int to = 0;
    bool on_connector = false;
    int next_seg = -1;
    int next_to = -1;
    Leg leg;
    double s = 0.0;
    double v = 0.0;
    double v_des = 0.0;
    double heading = 0.0;
    Engine eng;
};

class Dynamics {
public:
    Dynamics(const RoadNetwork& net, const CarFollowing& cf) : net_(net), cf_(cf) {}

    double inset() const { return net_.lane_width; }

    Leg lane_leg(int from, int to) const {
        const Vec2 pa = net_.nodes[static_cast<std::size_t>(from)], pb = net_.nodes[static_cast<std::size_t>(to)];
        const Vec2 dir = normalized(pb - pa);
        const Vec2 right{dir.y, -dir.x};
        const Vec2 off = right * (0.5 * net_.lane_width);
        return {pa + dir * inset() + off, pb - dir * inset() + off};
    }

    void enter_lane(Agent& ag, int seg, int from, int to) const {
        ag.seg = seg;
        ag.from = from;
        ag.to = to;
        ag.on_connector = false;
        ag.leg = lane_leg(from, to);
        ag.heading = ag.leg.heading();
    }

    // Uniform turn choice at the end node, U-turns excluded.
    void enter_connector(Agent& ag) const {
        const int node = ag.to;
        std::vector<int> options;
        for (int s : net_.incident[static_cast<std::size_t>(node)])
            if (s != ag.seg) options.push_back(s);
        const int next = options[uniform_index(ag.eng, options.size())];
        ag.next_seg = next;
        ag.next_to = net_.other_end(next, node);
        const Leg out = lane_leg(node, ag.next_to);
        ag.leg = {ag.leg.b, out.a};
        ag.on_connector = true;
        if (ag.leg.length() > 1e-9) ag.heading = ag.leg.heading();
    }

    void advance(Agent& ag, double dist) const {
        ag.s += dist;
        // a vehicle can cross several short legs in one step only at absurd speeds;
        // the loop still handles it
        while (ag.s >= ag.leg.length()) {
            ag.s -= ag.leg.length();
            if (ag.on_connector) {
                enter_lane(ag, ag.next_seg, ag.to, ag.next_to);
            } else {
                enter_connector(ag);
            }
        }
        if (ag.leg.length() > 1e-9) ag.heading = ag.leg.heading();
    }

    Vec2 position(const Agent& ag) const { return ag.leg.at(ag.s); }

    // Bounded-acceleration car following against the nearest aligned vehicle ahead.
    double next_speed(const std::vector<Agent>& agents, std::size_t i, double dt) const {
        const Agent& me = agents[i];
        const Vec2 p = position(me);
        const Vec2 dir = unit_from_angle(me.heading);
        double best_gap = 1e300;
        double leader_v = 0.0;
        for (std::size_t j = 0; j < agents.size(); ++j) {
            if (j == i) continue;
            const Agent& other = agents[j];
            const Vec2 d = position(other) - p;
            const double lon = dot(d, dir);
            if (lon <= 0.0) continue;
            if (std::abs(cross(dir, d)) >= 0.5 * net_.lane_width) continue;
            if (std::abs(wrap_angle(other.heading - me.heading)) >= kPi / 4) continue;
            const double gap = lon - 0.5 * (me.length + other.length);
            if (gap < best_gap) {
                best_gap = gap;
                leader_v = other.v;
            }
        }
        double v = std::min(me.v + cf_.max_accel * dt, me.v_des);
        if (best_gap < 1e299) {
            const double v_safe = std::sqrt(std::max(0.0, leader_v * leader_v + 2.0 * cf_.max_decel * (best_gap - cf_.min_gap - me.v * dt)));
            v = std::min(v, v_safe);
        }
        return std::max(0.0, v);
    }

private:
    const RoadNetwork& net_;
    CarFollowing cf_;
};

VehicleKind draw_kind(Engine& eng, const KindMix& mix) {
    const double u = uniform01(eng);
    if (u < mix.car) return VehicleKind::Car;
    if (u < mix.car + mix.bus) return VehicleKind::Bus;
    return VehicleKind::BoxTruck;
}

}  // namespace

Trace generate_traffic(const RoadNetwork& net, int n_vehicles, const KindMix& mix, std::uint64_t seed, double duration, double dt,
                       const CarFollowing& cf) {
    if (n_vehicles < 0) fail(ErrorKind::InvalidArgument, "vehicle count must be >= 0");
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
    if (!(duration >= 0.0)) fail(ErrorKind::InvalidArgument, "duration must be >= 0");
    if (mix.car < 0 || mix.bus < 0 || mix.box_truck < 0 || std::abs(mix.car + mix.bus + mix.box_truck - 1.0) > 1e-6)
        fail(ErrorKind::InvalidArgument, "kind mix must be non-negative and sum to 1");

    const Dynamics dyn(net, cf);
    Engine place_eng(derive_seed(seed, 0x706c616365ULL));
    std::vector<Agent> agents;
    agents.reserve(static_cast<std::size_t>(n_vehicles));

    const double lane_len = net.block - 2.0 * dyn.inset();
    double demand = 0.0;
    for (int id = 0; id < n_vehicles; ++id) {
        Agent ag;
        ag.id = id;
        ag.kind = draw_kind(place_eng, mix);
        ag.length = dimensions_of(ag.kind).length;
        ag.eng.seed(derive_seed(seed, 0x766568ULL, static_cast<std::uint64_t>(id)));
        demand += ag.length + cf.min_gap;
        agents.push_back(std::move(ag));
    }
    if (demand > 2.0 * static_cast<double>(net.segments.size()) * lane_len)
        fail(ErrorKind::OvercrowdedNetwork, "vehicles need more lane length than the network has");

    const double v_lim = net.segments.empty() ? kDefaultSpeedLimit : net.segments.front().speed_limit;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        Agent& ag = agents[i];
        bool placed = false;
        for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
            const int seg = static_cast<int>(uniform_index(place_eng, net.segments.size()));
            const bool forward = uniform_index(place_eng, 2) == 0;
            const auto& sg = net.segments[static_cast<std::size_t>(seg)];
            const int from = forward ? sg.a : sg.b, to = forward ? sg.b : sg.a;
            if (lane_len < ag.length) break;
            const double s = 0.5 * ag.length + (lane_len - ag.length) * uniform01(place_eng);
            bool clear = true;
            for (std::size_t j = 0; j < i && clear; ++j) {
                const Agent& o = agents[j];
                if (o.seg == seg && o.from == from && std::abs(o.s - s) < 0.5 * (o.length + ag.length) + cf.min_gap) clear = false;
            }
            if (!clear) continue;
            dyn.enter_lane(ag, seg, from, to);
            ag.s = s;
            placed = true;
        }
        if (!placed) fail(ErrorKind::OvercrowdedNetwork, "could not place vehicle " + std::to_string(ag.id) + " without overlap");
        ag.v_des = v_lim * (0.8 + 0.2 * uniform01(ag.eng));
        ag.v = ag.v_des * (0.5 + 0.5 * uniform01(ag.eng));
    }

    Trace trace;
    trace.dt = dt;
    for (const Agent& ag : agents) trace.vehicles.push_back({ag.id, ag.kind});
    const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
    trace.steps.reserve(n_steps);

    auto snapshot = [&] {
        std::vector<Pose> poses;
        poses.reserve(agents.size());
        for (const Agent& ag : agents) poses.push_back(make_pose(dyn.position(ag), ag.heading, ag.v));
        return poses;
    };
    trace.steps.push_back(snapshot());
    std::vector<double> v_next(agents.size());
    for (std::size_t k = 1; k < n_steps; ++k) {
        for (std::size_t i = 0; i < agents.size(); ++i) v_next[i] = dyn.next_speed(agents, i, dt);
        for (std::size_t i = 0; i < agents.size(); ++i) {
            agents[i].v = v_next[i];
            dyn.advance(agents[i], v_next[i] * dt);
        }
        trace.steps.push_back(snapshot());
    }
    return trace;
}

std::size_t Trace::step_index(double t) const {
    if (steps.empty()) fail(ErrorKind::OutOfRange, "trace has no steps");
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    if (!(t >= t0 - tol && t <= t0 + duration() + tol)) fail(ErrorKind::OutOfRange, "t = " + io::fmt_double(t) + " outside trace [" + io::fmt_double(t0) + ", " + io::fmt_double(t0 + duration()) + "]");
    if (steps.size() == 1 || dt <= 0.0) return 0;
    const long long k = std::llround((t - t0) / dt);
    return static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(steps.size()) - 1));
}

std::map<int, VehicleKind> Trace::kinds() const {
    std::map<int, VehicleKind> out;
    for (const auto& v : vehicles) out.emplace(v.id, v.kind);
    return out;
}

std::map<int, Pose> sample_poses(const Trace& trace, double t) {
    const auto& step = trace.steps[trace.step_index(t)];
    std::map<int, Pose> out;
    for (std::size_t i = 0; i < trace.vehicles.size(); ++i) out.emplace(trace.vehicles[i].id, step[i]);
    return out;
}

void validate_trace(const Trace& trace, double speed_limit) {
    auto bad = [](const std::string& w) { fail(ErrorKind::MalformedTrace, w); };
    if (trace.steps.size() > 1 && !(trace.dt > 0.0)) bad("dt must be positive");
    std::set<int> ids;
    for (const auto& v : trace.vehicles)
        if (!ids.insert(v.id).second) bad("duplicate vehicle id " + std::to_string(v.id));
    const double max_step = (speed_limit + 5.0) * trace.dt + 1e-6;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        if (trace.steps[k].size() != trace.vehicles.size()) bad("step " + std::to_string(k) + " has a different vehicle set");
        for (std::size_t i = 0; i < trace.vehicles.size(); ++i) {
            const Pose& p = trace.steps[k][i];
            if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y) || !std::isfinite(p.heading) || !std::isfinite(p.speed) || p.speed < 0.0)
                bad("vehicle " + std::to_string(trace.vehicles[i].id) + " has an invalid pose at step " + std::to_string(k));
            if (k == 0) continue;
            const double jump = norm(p.position - trace.steps[k - 1][i].position);
            if (jump > max_step)
                bad("vehicle " + std::to_string(trace.vehicles[i].id) + " moved " + io::fmt_double(jump) + " m in one step at t = " +
                    io::fmt_double(trace.t0 + static_cast<double>(k) * trace.dt));
        }
    }
}

namespace {
constexpr std::string_view kTraceHeader = "t,vehicle_id,kind,x,y,heading_rad,speed";
}

std::string trace_to_csv(const Trace& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const std::string t = io::fmt_double(trace.t0 + static_cast<double>(k) * trace.dt);
        for (std::size_t i = 0; i < trace.vehicles.size(); ++i) {
            const Pose& p = trace.steps[k][i];
            out += t;
            out += ',' + std::to_string(trace.vehicles[i].id) + ',' + to_string(trace.vehicles[i].kind) + ',' + io::fmt_double(p.position.x) + ',' +
                   io::fmt_double(p.position.y) + ',' + io::fmt_double(p.heading) + ',' + io::fmt_double(p.speed) + '\n';
        }
    }
    return out;
}

Trace parse_trace_csv(std::string_view text, double speed_limit) {
    auto bad = [](const std::string& w) { fail(ErrorKind::MalformedTrace, w); };
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) bad("empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader) bad("unexpected header '" + line + "'");

    struct Row {
        int id;
        VehicleKind kind;
        Pose pose;
    };
    std::vector<double> times;
    std::vector<std::vector<Row>> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = io::split(line, ',');
        if (f.size() != 7) bad("line " + std::to_string(line_no) + ": expected 7 fields");
        Row row{};
        double t = 0.0;
        try {
            t = io::parse_double(f[0]);
            row.id = static_cast<int>(io::parse_int(f[1]));
            row.kind = vehicle_kind_from_string(f[2]);
            row.pose = make_pose({io::parse_double(f[3]), io::parse_double(f[4])}, io::parse_double(f[5]), io::parse_double(f[6]));
        } catch (const Error& e) {
            bad("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (times.empty() || t != times.back()) {
            if (!times.empty() && t < times.back()) bad("line " + std::to_string(line_no) + ": time goes backwards");
            times.push_back(t);
            groups.emplace_back();
        }
        groups.back().push_back(row);
    }

    Trace trace;
    if (times.empty()) return trace;
    trace.t0 = times.front();
    trace.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expect = trace.t0 + static_cast<double>(k) * trace.dt;
        if (std::abs(times[k] - expect) > 1e-6 * std::max(1.0, std::abs(expect)))
            bad("non-constant time step at t = " + io::fmt_double(times[k]));
    }
    for (auto& g : groups) std::sort(g.begin(), g.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
    for (const Row& r : groups.front()) trace.vehicles.push_back({r.id, r.kind});
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& g = groups[k];
        if (g.size() != trace.vehicles.size()) bad("vehicle set changes at t = " + io::fmt_double(times[k]));
        std::vector<Pose> poses;
        poses.reserve(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i].id != trace.vehicles[i].id) bad("vehicle set changes at t = " + io::fmt_double(times[k]));
            if (g[i].kind != trace.vehicles[i].kind) bad("vehicle " + std::to_string(g[i].id) + " changes kind");
            poses.push_back(g[i].pose);
        }
        trace.steps.push_back(std::move(poses));
    }
    validate_trace(trace, speed_limit);
    return trace;
}

Trace ingest_trace(const std::filesystem::path& path, double speed_limit) {
    if (!std::filesystem::exists(path)) fail(ErrorKind::ConfigError, "trace file not found: " + path.string());
    return parse_trace_csv(io::read_file(path), speed_limit);
}

}  // namespace predtwin
