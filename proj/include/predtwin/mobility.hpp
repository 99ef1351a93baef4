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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "predtwin/geometry.hpp"
#include "predtwin/scene.hpp"

namespace predtwin {

struct RoadSegment {
    int a;  ///< node index
    int b;
    double speed_limit;
};

/// Manhattan grid of two-lane roads. Nodes are intersections on a regular
/// lattice with origin at the south-west corner; traffic keeps right.
struct RoadNetwork {
    int rows = 0;
    int cols = 0;
    double block = 0.0;
    double lane_width = 3.5;
    std::vector<Vec2> nodes;
    std::vector<RoadSegment> segments;
    std::vector<std::vector<int>> incident;  ///< node -> segment indices

    int node_index(int r, int c) const { return r * (cols + 1) + c; }
    int other_end(int seg, int node) const { return segments[static_cast<std::size_t>(seg)].a == node ? segments[static_cast<std::size_t>(seg)].b : segments[static_cast<std::size_t>(seg)].a; }
    Aabb2 bounds() const;
};

inline constexpr double kDefaultSpeedLimit = 13.89;  // 50 km/h

RoadNetwork generate_network(int rows, int cols, double block_size, double speed_limit = kDefaultSpeedLimit);

struct KindMix {
    double car = 0.8;
    double bus = 0.1;
    double box_truck = 0.1;
};

struct CarFollowing {
    double max_accel = 2.5;
    double max_decel = 4.5;
    double min_gap = 2.0;
};

struct TraceVehicle {
    int id;
    VehicleKind kind;
    bool operator==(const TraceVehicle&) const = default;
};

/// Constant-step pose history. steps[k][i] is the pose of vehicles[i] at
/// time t0 + k*dt.
struct Trace {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<TraceVehicle> vehicles;
    std::vector<std::vector<Pose>> steps;

    double duration() const { return steps.empty() ? 0.0 : static_cast<double>(steps.size() - 1) * dt; }
    std::size_t step_index(double t) const;  ///< nearest step; throws OutOfRange
    std::map<int, VehicleKind> kinds() const;
    bool operator==(const Trace&) const = default;
};

Trace generate_traffic(const RoadNetwork& net, int n_vehicles, const KindMix& mix, std::uint64_t seed, double duration, double dt,
                       const CarFollowing& cf = {});

/// Poses at the step nearest to t (ties round away from zero).
std::map<int, Pose> sample_poses(const Trace& trace, double t);

/// Checks constant dt, constant vehicle set and the displacement bound
/// |p(t+dt) - p(t)| <= (v_limit + 5) dt. Throws MalformedTrace.
void validate_trace(const Trace& trace, double speed_limit = kDefaultSpeedLimit);

std::string trace_to_csv(const Trace& trace);
Trace parse_trace_csv(std::string_view text, double speed_limit = kDefaultSpeedLimit);
Trace ingest_trace(const std::filesystem::path& path, double speed_limit = kDefaultSpeedLimit);

}  // namespace predtwin
