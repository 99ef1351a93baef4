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

namespace predtwin {

/// Amplitude reflectivity per material class.
namespace material {
inline constexpr double kConcrete = 0.6;
inline constexpr double kMetal = 0.9;
inline constexpr double kGround = 0.4;
}  // namespace material

double reflectivity_of(std::string_view material_name);

struct Pose {
    Vec2 position;
    double heading = 0.0;  ///< radians, [-pi, pi)
    double speed = 0.0;    ///< m/s, >= 0

    Vec2 velocity() const { return unit_from_angle(heading) * speed; }
    bool operator==(const Pose&) const = default;
};

/// Normalizes heading and clamps negative speed to zero.
Pose make_pose(Vec2 position, double heading, double speed);

struct Building {
    std::vector<Vec2> footprint;  ///< CCW, simple
    double height = 0.0;
    double reflectivity = material::kConcrete;

    double area() const { return polygon_signed_area(footprint); }
};

/// Thin double-sided planar reflector (e.g. a sound wall or fence).
struct Wall {
    Vec2 a, b;
    double height = 0.0;
    double reflectivity = material::kConcrete;
};

struct Road {
    std::vector<Vec2> centerline;
    double width = 7.0;
};

struct RsuSite {
    Vec3 position;
    double downtilt = 0.0;     ///< radians
    double orientation = 0.0;  ///< boresight azimuth, radians
};

enum class VehicleKind : std::uint8_t { Car, Bus, BoxTruck };
inline constexpr std::array<VehicleKind, 3> kAllVehicleKinds{VehicleKind::Car, VehicleKind::Bus, VehicleKind::BoxTruck};
inline constexpr int kVehicleFidelityLevels = 4;

const char* to_string(VehicleKind k);
VehicleKind vehicle_kind_from_string(std::string_view s);

struct VehicleDims {
    double length, width, height;
};
VehicleDims dimensions_of(VehicleKind k);

/// Box in the vehicle body frame: x forward, y left, z up from the ground.
struct OrientedBox {
    Vec3 center;
    Vec3 half;
    bool operator==(const OrientedBox&) const = default;
};

struct VehicleBody {
    VehicleKind kind = VehicleKind::Car;
    int fidelity = 0;
    std::vector<OrientedBox> primitives;
    double reflectivity = material::kMetal;
    bool operator==(const VehicleBody&) const = default;
};

struct PlacedVehicle {
    VehicleBody body;
    Pose pose;
    bool operator==(const PlacedVehicle&) const = default;
};

/// World-frame horizontal corners (CCW) of a primitive placed at `pose`.
std::array<Vec2, 4> world_corners(const OrientedBox& box, const Pose& pose);

struct Scene {
    std::vector<Building> buildings;
    std::vector<Wall> walls;
    std::vector<Road> roads;
    std::vector<RsuSite> rsus;
    std::map<int, PlacedVehicle> vehicles;
    double ground_z = 0.0;
    double ground_reflectivity = material::kGround;

    std::size_t vehicle_primitive_count() const;
    std::size_t wall_face_count() const;
};

/// Parsed map file before validation; angles still in degrees.
struct MapSpec {
    struct BuildingSpec {
        std::vector<Vec2> polygon;
        double height = 0.0;
        double reflectivity = material::kConcrete;
    };
    struct WallSpec {
        Vec2 a, b;
        double height = 0.0;
        double reflectivity = material::kConcrete;
    };
    struct RsuSpec {
        double x = 0, y = 0, z = 0;
        double downtilt_deg = 0;
        double orientation_deg = 0;
    };
    std::vector<BuildingSpec> buildings;
    std::vector<WallSpec> walls;
    std::vector<Road> roads;
    std::vector<RsuSpec> rsus;
};

MapSpec parse_map(std::string_view json_text);
MapSpec load_map_file(const std::filesystem::path& path);
std::string map_to_json(const MapSpec& spec);

/// Validates a map and builds the static scene. Throws MalformedMap.
Scene build_scene(const MapSpec& spec);

/// Deterministic low-poly body for (kind, fidelity). Level 0 is the bounding
/// box; levels 1..3 carry 2, 4 and 7 boxes.
VehicleBody vehicle_geometry(VehicleKind kind, int fidelity);

/// Moves known vehicles to new poses and registers new ids (which must appear
/// in `new_kinds`). Bodies are rebuilt only when the fidelity differs. Static
/// geometry is never touched.
Scene update_poses(const Scene& scene, const std::map<int, Pose>& poses, int fidelity,
                   const std::map<int, VehicleKind>& new_kinds = {});

/// Regular city used by the examples and acceptance runs: one building per
/// block (plus optional extras), RSUs at the requested intersections.
struct GridCitySpec {
    int rows = 3;
    int cols = 3;
    double block = 100.0;
    double road_width = 14.0;
    double setback = 4.0;
    double min_height = 15.0;
    double max_height = 30.0;
    int extra_buildings = 0;  ///< split this many blocks into two buildings
    std::vector<std::pair<int, int>> rsu_nodes;  ///< (row, col) intersection indices
    double rsu_height = 10.0;
    double rsu_downtilt_deg = -11.0;
    double rsu_orientation_deg = 45.0;
    std::uint64_t seed = 1;
};
MapSpec make_grid_city(const GridCitySpec& spec);

}  // namespace predtwin
