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

#include <cstdint>
#include <string>
#include <vector>

#include "predtwin/scene.hpp"

namespace predtwin {

/// Six knobs trading propagation accuracy for compute.
struct FidelityConfig {
    int max_depth = 6;             ///< D_max, 1..10
    long long n_rays = 10000;      ///< rays per source, 1e2..1e6
    long long n_paths = 100000;    ///< strongest paths kept per link
    bool diffuse = false;          ///< DR
    bool diffraction = false;      ///< D
    int vehicle_fidelity = 2;      ///< F_V, 0..3

    void validate() const;  ///< throws InvalidArgument
    std::string label() const;
    bool operator==(const FidelityConfig&) const = default;
};

inline constexpr int kMaxDepthLimit = 10;
inline constexpr long long kMinRays = 100;
inline constexpr long long kMaxRays = 1000000;

enum class PathKind : std::uint8_t { LineOfSight, Specular, Diffuse, Diffraction };
const char* to_string(PathKind k);

struct PathComponent {
    double amplitude = 0.0;  ///< linear field amplitude
    double phase = 0.0;      ///< rad
    double delay = 0.0;      ///< s
    double azimuth = 0.0;    ///< departure azimuth at tx, rad
    double elevation = 0.0;  ///< departure elevation at tx, rad
    int interactions = 0;
    PathKind kind = PathKind::LineOfSight;
    double length = 0.0;        ///< 3D unfolded length, m
    std::vector<int> surfaces;  ///< reflecting surface ids in order
    bool operator==(const PathComponent&) const = default;
};

using PathList = std::vector<PathComponent>;

struct Receiver {
    Vec3 position;
    int vehicle_id = -1;  ///< own body, ignored by the blockage test
};

struct TraceOptions {
    bool parallel = true;  ///< OpenMP over ray chunks; the serial path is the reference
    double carrier_hz = 5.875e9;
};

/// Surface ids: building b, edge e (vertex e -> e+1) come first in scene
/// order, then thin walls.
int surface_id_of_wall(const Scene& scene, std::size_t wall_index);
int surface_id_of_building_edge(const Scene& scene, std::size_t building, std::size_t edge);

/// Shoots one azimuth fan from `tx` and returns the paths of every receiver,
/// strongest first, truncated to cfg.n_paths.
std::vector<PathList> trace_source(const Scene& scene, const Vec3& tx, const std::vector<Receiver>& receivers, const FidelityConfig& cfg,
                                   std::uint64_t seed, const TraceOptions& opt = {});

/// Same fan, but nothing filtered or truncated. Tracing once at the deepest
/// depth with diffuse on and then calling select_paths gives exactly what
/// trace_source returns for any shallower config with the same n_rays,
/// vehicle fidelity and seed.
std::vector<PathList> trace_source_raw(const Scene& scene, const Vec3& tx, const std::vector<Receiver>& receivers, const FidelityConfig& cfg,
                                       std::uint64_t seed, const TraceOptions& opt = {});
PathList select_paths(const PathList& raw, const FidelityConfig& cfg);

/// Single-link convenience wrapper.
PathList trace_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, const FidelityConfig& cfg, std::uint64_t seed, const TraceOptions& opt = {});

/// Knife-edge loss in dB for Fresnel parameter nu, clamped to >= 6 dB.
double knife_edge_loss_db(double nu);

/// True if any building or vehicle primitive (at the scene's own body
/// fidelity) blocks the straight segment a -> b. Vehicle `skip_vehicle` is
/// ignored.
bool segment_blocked(const Scene& scene, const Vec3& a, const Vec3& b, int skip_vehicle = -1);

/// Debug dump: link,kind,amplitude,phase,delay_s,azimuth,elevation,interactions,length_m.
std::string paths_to_csv(const std::vector<std::pair<std::string, PathList>>& links);

}  // namespace predtwin
