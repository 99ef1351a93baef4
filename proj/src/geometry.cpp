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

#include "predtwin/geometry.hpp"

#include <algorithm>

#include "predtwin/errors.hpp"

namespace predtwin {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedMap: return "MalformedMap";
        case ErrorKind::UnknownVehicleKind: return "UnknownVehicleKind";
        case ErrorKind::OvercrowdedNetwork: return "OvercrowdedNetwork";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::MalformedTrace: return "MalformedTrace";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NegativeBudget: return "NegativeBudget";
        case ErrorKind::LinkSetMismatch: return "LinkSetMismatch";
        case ErrorKind::NoFeasibleConfig: return "NoFeasibleConfig";
        case ErrorKind::EmptyNetwork: return "EmptyNetwork";
        case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorKind::UnsupportedScene: return "UnsupportedScene";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

double wrap_angle(double a) {
    double r = std::fmod(a + kPi, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    r -= kPi;
    // fmod can land exactly on +pi after the shift for inputs like -pi - eps
    if (r >= kPi) r -= 2.0 * kPi;
    return r;
}

Vec2 mirror_point(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = normalized(b - a);
    const Vec2 ap = p - a;
    const Vec2 proj = a + d * dot(ap, d);
    return proj * 2.0 - p;
}

std::optional<LineHit> intersect_lines(Vec2 p, Vec2 r, Vec2 q, Vec2 s) {
    const double denom = cross(r, s);
    if (std::abs(denom) < 1e-15) return std::nullopt;
    const Vec2 qp = q - p;
    return LineHit{cross(qp, s) / denom, cross(qp, r) / denom};
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    if (std::abs(v) < 1e-12) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double polygon_signed_area(std::span<const Vec2> poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % poly.size()];
        a += cross(p, q);
    }
    return 0.5 * a;
}

bool polygon_is_simple(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (norm(poly[(i + 1) % n] - poly[i]) < 1e-9) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex by construction
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Vec2 c = poly[j], d = poly[(j + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return std::abs(polygon_signed_area(poly)) > 1e-9;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[i], b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
    }
    return inside;
}

void Aabb2::expand(Vec2 p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
}

void Aabb2::pad(double m) {
    lo.x -= m;
    lo.y -= m;
    hi.x += m;
    hi.y += m;
}

bool ray_aabb(Vec2 o, Vec2 inv_d, const Aabb2& box, double t_max, double& t_enter) {
    double t0 = 0.0, t1 = t_max;
    const double tx1 = (box.lo.x - o.x) * inv_d.x, tx2 = (box.hi.x - o.x) * inv_d.x;
    t0 = std::max(t0, std::min(tx1, tx2));
    t1 = std::min(t1, std::max(tx1, tx2));
    const double ty1 = (box.lo.y - o.y) * inv_d.y, ty2 = (box.hi.y - o.y) * inv_d.y;
    t0 = std::max(t0, std::min(ty1, ty2));
    t1 = std::min(t1, std::max(ty1, ty2));
    t_enter = t0;
    return t0 <= t1;
}

}  // namespace predtwin
