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

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace predtwin {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) {
    const double n = norm(a);
    return n > 0.0 ? a * (1.0 / n) : Vec2{};
}
inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

/// Rotates `v` counter-clockwise by `angle`.
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec2 xy() const { return {x, y}; }
    constexpr bool operator==(const Vec3&) const = default;
};

inline double distance(Vec3 a, Vec3 b) { return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z)); }

/// Maps any angle into [-pi, pi).
double wrap_angle(double a);

/// Mirror image of `p` across the infinite line through `a` and `b`.
Vec2 mirror_point(Vec2 p, Vec2 a, Vec2 b);

/// Parameters (t along p + t*r, u along q + u*s) of the intersection of two
/// lines, or nullopt when parallel.
struct LineHit {
    double t;
    double u;
};
std::optional<LineHit> intersect_lines(Vec2 p, Vec2 r, Vec2 q, Vec2 s);

/// True when closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

double polygon_signed_area(std::span<const Vec2> poly);
bool polygon_is_simple(std::span<const Vec2> poly);
bool point_in_polygon(Vec2 p, std::span<const Vec2> poly);

struct Aabb2 {
    Vec2 lo{1e300, 1e300};
    Vec2 hi{-1e300, -1e300};

    void expand(Vec2 p);
    void pad(double m);
    bool empty() const { return lo.x > hi.x; }
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

/// Slab test: entry/exit parameters of the ray o + t*d through `box`.
bool ray_aabb(Vec2 o, Vec2 inv_d, const Aabb2& box, double t_max, double& t_enter);

}  // namespace predtwin
