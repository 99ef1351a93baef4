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

#include "predtwin/oracles.hpp"

#include <cmath>

#include "predtwin/errors.hpp"
#include "predtwin/raytrace.hpp"

namespace predtwin {

namespace {

constexpr double kEps = 1e-9;

struct WallLine {
    Vec2 a, b;
    int id;
};

double side(const WallLine& w, Vec2 p) { return cross(w.b - w.a, p - w.a); }

/// Parameter along p->q where it crosses wall w, if it does so inside both.
std::optional<double> crossing(Vec2 p, Vec2 q, const WallLine& w) {
    const auto hit = intersect_lines(p, q - p, w.a, w.b - w.a);
    if (!hit || hit->t < -kEps || hit->t > 1.0 + kEps || hit->u < -kEps || hit->u > 1.0 + kEps) return std::nullopt;
    return hit->t;
}

/// True when some wall other than those listed cuts the open segment p->q.
bool leg_blocked(Vec2 p, Vec2 q, const std::vector<WallLine>& walls, int skip_a, int skip_b) {
    for (const auto& w : walls) {
        if (w.id == skip_a || w.id == skip_b) continue;
        if (auto t = crossing(p, q, w); t && *t > kEps && *t < 1.0 - kEps) return true;
    }
    return false;
}

ImagePath finish(std::vector<Vec2> pts, std::vector<int> seq, const Vec3& tx, const Vec3& rx) {
    ImagePath p;
    double lh = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) lh += norm(pts[i] - pts[i - 1]);
    p.length = std::hypot(lh, rx.z - tx.z);
    p.departure = angle_of(pts[1] - pts[0]);
    p.arrival = angle_of(pts.back() - pts[pts.size() - 2]);
    p.points = std::move(pts);
    p.surfaces = std::move(seq);
    return p;
}

}  // namespace

std::vector<ImagePath> image_method_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, int max_depth) {
    if (!scene.buildings.empty()) fail(ErrorKind::UnsupportedScene, "image method handles thin walls only");
    if (!scene.vehicles.empty()) fail(ErrorKind::UnsupportedScene, "image method ignores vehicles; remove them");
    if (scene.walls.size() > 2) fail(ErrorKind::UnsupportedScene, "image method handles at most two walls");
    if (max_depth < 0 || max_depth > 2) fail(ErrorKind::UnsupportedScene, "image method handles depth <= 2");

    std::vector<WallLine> walls;
    for (std::size_t i = 0; i < scene.walls.size(); ++i) walls.push_back({scene.walls[i].a, scene.walls[i].b, surface_id_of_wall(scene, i)});
    const Vec2 t = tx.xy(), r = rx.xy();
    std::vector<ImagePath> out;

    if (!leg_blocked(t, r, walls, -1, -1)) out.push_back(finish({t, r}, {}, tx, rx));

    if (max_depth >= 1) {
        for (const auto& w : walls) {
            if (side(w, t) * side(w, r) <= 0.0) continue;  // must bounce off one face
            const Vec2 img = mirror_point(t, w.a, w.b);
            const auto s = crossing(img, r, w);
            if (!s) continue;
            const Vec2 p = img + (r - img) * *s;
            if (leg_blocked(t, p, walls, w.id, -1) || leg_blocked(p, r, walls, w.id, -1)) continue;
            out.push_back(finish({t, p, r}, {w.id}, tx, rx));
        }
    }

    if (max_depth >= 2) {
        for (const auto& w1 : walls)
            for (const auto& w2 : walls) {
                if (w1.id == w2.id) continue;
                const Vec2 i1 = mirror_point(t, w1.a, w1.b);
                const Vec2 i2 = mirror_point(i1, w2.a, w2.b);
                const auto s2 = crossing(i2, r, w2);
                if (!s2) continue;
                const Vec2 p2 = i2 + (r - i2) * *s2;
                const auto s1 = crossing(i1, p2, w1);
                if (!s1) continue;
                const Vec2 p1 = i1 + (p2 - i1) * *s1;
                // each bounce keeps both of its legs on the same face
                if (side(w1, t) * side(w1, p2) <= 0.0 || side(w2, p1) * side(w2, r) <= 0.0) continue;
                if (leg_blocked(t, p1, walls, w1.id, -1) || leg_blocked(p1, p2, walls, w1.id, w2.id) || leg_blocked(p2, r, walls, w2.id, -1)) continue;
                out.push_back(finish({t, p1, p2, r}, {w1.id, w2.id}, tx, rx));
            }
    }
    return out;
}

double friis_gain_db(double distance, double carrier_hz) {
    if (!(distance > 0.0) || !(carrier_hz > 0.0)) fail(ErrorKind::InvalidArgument, "distance and carrier must be positive");
    const double lambda = kSpeedOfLight / carrier_hz;
    return 20.0 * std::log10(lambda / (4.0 * kPi * distance));
}

RrmResult brute_force_rrm(const GainTensor& g, const LinkBudget& budget, const RrmParams& params) {
    const int B = g.rsus(), W = g.beams();
    if (std::pow(static_cast<double>(W), B) > params.exhaustive_cap)
        fail(ErrorKind::SearchSpaceTooLarge, "W^B exceeds the exhaustive cap");
    RrmResult best;
    BeamState w(static_cast<std::size_t>(B), 0);
    bool have = false;
    while (true) {
        Evaluation e = evaluate_config(w, g, budget, params);
        ++best.eval_count;
        if (!have || e.score.better_than(best.eval.score)) {
            best.beams = w;
            best.eval = std::move(e);
            have = true;
        }
        // odometer, last RSU fastest
        int b = B - 1;
        while (b >= 0 && ++w[static_cast<std::size_t>(b)] == W) w[static_cast<std::size_t>(b--)] = 0;
        if (b < 0) break;
    }
    return best;
}

}  // namespace predtwin
