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

#include "predtwin/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

[[noreturn]] void bad_map(const std::string& what) { fail(ErrorKind::MalformedMap, what); }

double json_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) bad_map(where + ": missing '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) bad_map(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

Vec2 json_point(const json& p, const std::string& where) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) bad_map(where + ": point must be [x, y]");
    return {p[0].get<double>(), p[1].get<double>()};
}

double surface_reflectivity(const json& j, const std::string& where) {
    if (j.contains("reflectivity")) {
        const double r = json_number(j, "reflectivity", where);
        if (!(r > 0.0 && r <= 1.0)) bad_map(where + ": reflectivity must be in (0, 1]");
        return r;
    }
    if (j.contains("material")) {
        if (!j["material"].is_string()) bad_map(where + ": material must be a string");
        try {
            return reflectivity_of(j["material"].get<std::string>());
        } catch (const Error& e) {
            bad_map(where + ": " + e.what());
        }
    }
    return material::kConcrete;
}

OrientedBox box_from_extents(double x0, double x1, double y0, double y1, double z0, double z1) {
    return {{0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (z0 + z1)}, {0.5 * (x1 - x0), 0.5 * (y1 - y0), 0.5 * (z1 - z0)}};
}

}  // namespace

double reflectivity_of(std::string_view name) {
    if (name == "concrete") return material::kConcrete;
    if (name == "metal") return material::kMetal;
    if (name == "ground") return material::kGround;
    fail(ErrorKind::MalformedMap, "unknown material '" + std::string(name) + "'");
}

Pose make_pose(Vec2 position, double heading, double speed) {
    return {position, wrap_angle(heading), speed > 0.0 ? speed : 0.0};
}

const char* to_string(VehicleKind k) {
    switch (k) {
        case VehicleKind::Car: return "car";
        case VehicleKind::Bus: return "bus";
        case VehicleKind::BoxTruck: return "box_truck";
    }
    return "car";
}

VehicleKind vehicle_kind_from_string(std::string_view s) {
    if (s == "car") return VehicleKind::Car;
    if (s == "bus") return VehicleKind::Bus;
    if (s == "box_truck") return VehicleKind::BoxTruck;
    fail(ErrorKind::UnknownVehicleKind, "unknown vehicle kind '" + std::string(s) + "'");
}

VehicleDims dimensions_of(VehicleKind k) {
    switch (k) {
        case VehicleKind::Car: return {4.5, 1.8, 1.5};
        case VehicleKind::Bus: return {12.0, 2.5, 3.2};
        case VehicleKind::BoxTruck: return {8.0, 2.5, 3.5};
    }
    return {4.5, 1.8, 1.5};
}

std::array<Vec2, 4> world_corners(const OrientedBox& box, const Pose& pose) {
    const double c = std::cos(pose.heading), s = std::sin(pose.heading);
    auto place = [&](double bx, double by) {
        return Vec2{pose.position.x + c * bx - s * by, pose.position.y + s * bx + c * by};
    };
    const double x0 = box.center.x - box.half.x, x1 = box.center.x + box.half.x;
    const double y0 = box.center.y - box.half.y, y1 = box.center.y + box.half.y;
    return {place(x1, y0), place(x1, y1), place(x0, y1), place(x0, y0)};
}

std::size_t Scene::vehicle_primitive_count() const {
    std::size_t n = 0;
    for (const auto& [id, v] : vehicles) n += v.body.primitives.size();
    return n;
}

std::size_t Scene::wall_face_count() const {
    std::size_t n = walls.size();
    for (const auto& b : buildings) n += b.footprint.size();
    return n;
}

MapSpec parse_map(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        bad_map(std::string("map is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) bad_map("map root must be an object");

    MapSpec spec;
    if (root.contains("buildings")) {
        if (!root["buildings"].is_array()) bad_map("'buildings' must be an array");
        for (std::size_t i = 0; i < root["buildings"].size(); ++i) {
            const json& b = root["buildings"][i];
            const std::string where = "buildings[" + std::to_string(i) + "]";
            if (!b.is_object() || !b.contains("polygon") || !b["polygon"].is_array()) bad_map(where + ": needs 'polygon' array");
            MapSpec::BuildingSpec bs;
            for (const json& p : b["polygon"]) bs.polygon.push_back(json_point(p, where));
            bs.height = json_number(b, "height", where);
            bs.reflectivity = surface_reflectivity(b, where);
            spec.buildings.push_back(std::move(bs));
        }
    }
    if (root.contains("walls")) {
        if (!root["walls"].is_array()) bad_map("'walls' must be an array");
        for (std::size_t i = 0; i < root["walls"].size(); ++i) {
            const json& w = root["walls"][i];
            const std::string where = "walls[" + std::to_string(i) + "]";
            if (!w.is_object() || !w.contains("a") || !w.contains("b")) bad_map(where + ": needs 'a' and 'b'");
            MapSpec::WallSpec ws;
            ws.a = json_point(w["a"], where);
            ws.b = json_point(w["b"], where);
            ws.height = json_number(w, "height", where);
            ws.reflectivity = surface_reflectivity(w, where);
            spec.walls.push_back(ws);
        }
    }
    if (root.contains("roads")) {
        if (!root["roads"].is_array()) bad_map("'roads' must be an array");
        for (std::size_t i = 0; i < root["roads"].size(); ++i) {
            const json& r = root["roads"][i];
            const std::string where = "roads[" + std::to_string(i) + "]";
            if (!r.is_object() || !r.contains("centerline") || !r["centerline"].is_array()) bad_map(where + ": needs 'centerline' array");
            Road road;
            for (const json& p : r["centerline"]) road.centerline.push_back(json_point(p, where));
            if (r.contains("width")) road.width = json_number(r, "width", where);
            spec.roads.push_back(std::move(road));
        }
    }
    if (root.contains("rsus")) {
        if (!root["rsus"].is_array()) bad_map("'rsus' must be an array");
        for (std::size_t i = 0; i < root["rsus"].size(); ++i) {
            const json& r = root["rsus"][i];
            const std::string where = "rsus[" + std::to_string(i) + "]";
            if (!r.is_object()) bad_map(where + ": must be an object");
            MapSpec::RsuSpec rs;
            rs.x = json_number(r, "x", where);
            rs.y = json_number(r, "y", where);
            rs.z = json_number(r, "z", where);
            if (r.contains("downtilt_deg")) rs.downtilt_deg = json_number(r, "downtilt_deg", where);
            if (r.contains("orientation_deg")) rs.orientation_deg = json_number(r, "orientation_deg", where);
            spec.rsus.push_back(rs);
        }
    }
    return spec;
}

MapSpec load_map_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail(ErrorKind::ConfigError, "map file not found: " + path.string());
    try {
        return parse_map(io::read_file(path));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MalformedMap) throw;
        bad_map(path.string() + ": " + e.what());
    }
}

std::string map_to_json(const MapSpec& spec) {
    json root = json::object();
    root["buildings"] = json::array();
    for (const auto& b : spec.buildings) {
        json poly = json::array();
        for (const Vec2& p : b.polygon) poly.push_back({p.x, p.y});
        root["buildings"].push_back({{"polygon", poly}, {"height", b.height}, {"reflectivity", b.reflectivity}});
    }
    if (!spec.walls.empty()) {
        root["walls"] = json::array();
        for (const auto& w : spec.walls)
            root["walls"].push_back({{"a", {w.a.x, w.a.y}}, {"b", {w.b.x, w.b.y}}, {"height", w.height}, {"reflectivity", w.reflectivity}});
    }
    root["roads"] = json::array();
    for (const auto& r : spec.roads) {
        json line = json::array();
        for (const Vec2& p : r.centerline) line.push_back({p.x, p.y});
        root["roads"].push_back({{"centerline", line}, {"width", r.width}});
    }
    root["rsus"] = json::array();
    for (const auto& r : spec.rsus)
        root["rsus"].push_back({{"x", r.x}, {"y", r.y}, {"z", r.z}, {"downtilt_deg", r.downtilt_deg}, {"orientation_deg", r.orientation_deg}});
    return root.dump(2) + "\n";
}

Scene build_scene(const MapSpec& spec) {
    Scene scene;
    for (std::size_t i = 0; i < spec.buildings.size(); ++i) {
        const auto& bs = spec.buildings[i];
        const std::string where = "building " + std::to_string(i);
        std::vector<Vec2> poly = bs.polygon;
        // tolerate an explicitly closed ring
        if (poly.size() > 3 && poly.front() == poly.back()) poly.pop_back();
        if (poly.size() < 3) bad_map(where + ": polygon needs at least 3 vertices");
        for (const Vec2& p : poly)
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) bad_map(where + ": non-finite vertex");
        if (!polygon_is_simple(poly)) bad_map(where + ": polygon is self-intersecting or degenerate");
        if (!(bs.height > 0.0)) bad_map(where + ": height must be positive");
        if (!(bs.reflectivity > 0.0 && bs.reflectivity <= 1.0)) bad_map(where + ": reflectivity must be in (0, 1]");
        if (polygon_signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
        scene.buildings.push_back({std::move(poly), bs.height, bs.reflectivity});
    }
    for (std::size_t i = 0; i < spec.walls.size(); ++i) {
        const auto& ws = spec.walls[i];
        const std::string where = "wall " + std::to_string(i);
        if (norm(ws.b - ws.a) < 1e-9) bad_map(where + ": zero length");
        if (!(ws.height > 0.0)) bad_map(where + ": height must be positive");
        if (!(ws.reflectivity > 0.0 && ws.reflectivity <= 1.0)) bad_map(where + ": reflectivity must be in (0, 1]");
        scene.walls.push_back({ws.a, ws.b, ws.height, ws.reflectivity});
    }
    for (const Road& r : spec.roads) {
        if (r.centerline.size() < 2) bad_map("road centerline needs at least 2 points");
        if (!(r.width > 0.0)) bad_map("road width must be positive");
        scene.roads.push_back(r);
    }
    for (std::size_t i = 0; i < spec.rsus.size(); ++i) {
        const auto& rs = spec.rsus[i];
        if (!(rs.z > 0.0)) bad_map("rsu " + std::to_string(i) + ": height must be positive");
        scene.rsus.push_back({{rs.x, rs.y, rs.z}, rs.downtilt_deg * kDeg, wrap_angle(rs.orientation_deg * kDeg)});
    }
    return scene;
}

VehicleBody vehicle_geometry(VehicleKind kind, int fidelity) {
    if (fidelity < 0 || fidelity >= kVehicleFidelityLevels)
        fail(ErrorKind::InvalidArgument, "vehicle fidelity must be in 0..3, got " + std::to_string(fidelity));
    const auto [L, W, H] = dimensions_of(kind);
    const double hl = L / 2, hw = W / 2;
    VehicleBody body;
    body.kind = kind;
    body.fidelity = fidelity;
    auto add = [&](double x0, double x1, double y0, double y1, double z0, double z1) {
        body.primitives.push_back(box_from_extents(x0, x1, y0, y1, z0, z1));
    };

    if (fidelity == 0) {
        add(-hl, hl, -hw, hw, 0.0, H);
        return body;
    }

    // Fractions of length/height; every box stays inside the bounding box.
    switch (kind) {
        case VehicleKind::Car: {
            const double trim = fidelity >= 2 ? 0.45 * L : hl;
            add(-trim, trim, -hw, hw, 0.1 * H, 0.55 * H);         // lower body
            add(-0.3 * L, 0.2 * L, -0.45 * W, 0.45 * W, 0.55 * H, H);  // cabin
            if (fidelity >= 2) {
                add(0.45 * L, hl, -0.45 * W, 0.45 * W, 0.12 * H, 0.45 * H);  // front bumper
                add(-hl, -0.45 * L, -0.45 * W, 0.45 * W, 0.12 * H, 0.45 * H);
            }
            if (fidelity >= 3) {
                add(0.22 * L, 0.38 * L, -hw, hw, 0.0, 0.1 * H);    // front wheels
                add(-0.38 * L, -0.22 * L, -hw, hw, 0.0, 0.1 * H);  // rear wheels
                add(0.2 * L, 0.3 * L, -0.42 * W, 0.42 * W, 0.55 * H, 0.8 * H);  // windshield rake
            }
            break;
        }
        case VehicleKind::Bus: {
            const double trim = fidelity >= 2 ? 0.48 * L : hl;
            add(-trim, trim, -hw, hw, 0.1 * H, 0.92 * H);
            add(-0.2 * L, 0.2 * L, -0.35 * W, 0.35 * W, 0.92 * H, H);  // roof unit
            if (fidelity >= 2) {
                add(0.48 * L, hl, -0.46 * W, 0.46 * W, 0.1 * H, 0.85 * H);
                add(-hl, -0.48 * L, -0.46 * W, 0.46 * W, 0.1 * H, 0.85 * H);
            }
            if (fidelity >= 3) {
                add(0.3 * L, 0.4 * L, -hw, hw, 0.0, 0.1 * H);
                add(-0.4 * L, -0.25 * L, -hw, hw, 0.0, 0.1 * H);
                add(0.28 * L, 0.42 * L, -0.3 * W, 0.3 * W, 0.92 * H, 0.98 * H);
            }
            break;
        }
        case VehicleKind::BoxTruck: {
            add(0.28 * L, hl, -hw, hw, 0.1 * H, 0.75 * H);     // cab
            add(-hl, 0.26 * L, -hw, hw, 0.12 * H, H);          // cargo box
            if (fidelity >= 2) {
                add(-hl, hl, -0.4 * W, 0.4 * W, 0.06 * H, 0.12 * H);  // frame rails
                add(0.3 * L, 0.45 * L, -0.45 * W, 0.45 * W, 0.75 * H, 0.9 * H);  // roof fairing
            }
            if (fidelity >= 3) {
                add(0.32 * L, 0.42 * L, -hw, hw, 0.0, 0.06 * H);
                add(-0.4 * L, -0.2 * L, -hw, hw, 0.0, 0.06 * H);
                add(0.26 * L, 0.28 * L, -0.45 * W, 0.45 * W, 0.15 * H, 0.9 * H);  // cab back wall
            }
            break;
        }
    }
    return body;
}

Scene update_poses(const Scene& scene, const std::map<int, Pose>& poses, int fidelity, const std::map<int, VehicleKind>& new_kinds) {
    Scene out = scene;
    for (const auto& [id, pose] : poses) {
        auto it = out.vehicles.find(id);
        if (it == out.vehicles.end()) {
            const auto k = new_kinds.find(id);
            if (k == new_kinds.end()) fail(ErrorKind::UnknownVehicleKind, "vehicle " + std::to_string(id) + " has no registered kind");
            out.vehicles.emplace(id, PlacedVehicle{vehicle_geometry(k->second, fidelity), pose});
            continue;
        }
        if (it->second.body.fidelity != fidelity) it->second.body = vehicle_geometry(it->second.body.kind, fidelity);
        it->second.pose = pose;
    }
    return out;
}

MapSpec make_grid_city(const GridCitySpec& g) {
    if (g.rows < 1 || g.cols < 1 || !(g.block > 0.0)) fail(ErrorKind::InvalidArgument, "grid city needs rows, cols >= 1 and block > 0");
    MapSpec spec;
    Engine eng(derive_seed(g.seed, 0x6369747900ULL));
    const double inset = 0.5 * g.road_width + g.setback;
    const int n_blocks = g.rows * g.cols;

    std::vector<int> order(static_cast<std::size_t>(n_blocks));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n_blocks - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[uniform_index(eng, static_cast<std::uint64_t>(i) + 1)]);
    std::vector<bool> split(static_cast<std::size_t>(n_blocks), false);
    for (int i = 0; i < std::min(g.extra_buildings, n_blocks); ++i) split[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

    auto height = [&] { return g.min_height + (g.max_height - g.min_height) * uniform01(eng); };
    auto rect = [](double x0, double y0, double x1, double y1) { return std::vector<Vec2>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; };

    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const double x0 = c * g.block + inset, x1 = (c + 1) * g.block - inset;
            const double y0 = r * g.block + inset, y1 = (r + 1) * g.block - inset;
            if (x1 - x0 < 1.0 || y1 - y0 < 1.0) continue;
            if (split[static_cast<std::size_t>(r * g.cols + c)] && x1 - x0 > 10.0) {
                const double mid = 0.5 * (x0 + x1);
                spec.buildings.push_back({rect(x0, y0, mid - 2.0, y1), height(), material::kConcrete});
                spec.buildings.push_back({rect(mid + 2.0, y0, x1, y1), height(), material::kConcrete});
            } else {
                spec.buildings.push_back({rect(x0, y0, x1, y1), height(), material::kConcrete});
            }
        }
    }
    const double xmax = g.cols * g.block, ymax = g.rows * g.block;
    for (int r = 0; r <= g.rows; ++r) spec.roads.push_back({{{0.0, r * g.block}, {xmax, r * g.block}}, g.road_width});
    for (int c = 0; c <= g.cols; ++c) spec.roads.push_back({{{c * g.block, 0.0}, {c * g.block, ymax}}, g.road_width});
    // RSUs stand on the kerb at the intersection's south-west corner
    const double kerb = 0.5 * g.road_width - 0.5;
    for (const auto& [r, c] : g.rsu_nodes)
        spec.rsus.push_back({c * g.block - kerb, r * g.block - kerb, g.rsu_height, g.rsu_downtilt_deg, g.rsu_orientation_deg});
    return spec;
}

}  // namespace predtwin
