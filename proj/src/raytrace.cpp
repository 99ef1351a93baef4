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

#include "predtwin/raytrace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>

#include "predtwin/errors.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

void FidelityConfig::validate() const {
    if (max_depth < 1 || max_depth > kMaxDepthLimit) fail(ErrorKind::InvalidArgument, "max_depth must be in [1, 10], got " + std::to_string(max_depth));
    if (n_rays < kMinRays || n_rays > kMaxRays) fail(ErrorKind::InvalidArgument, "n_rays must be in [1e2, 1e6], got " + std::to_string(n_rays));
    if (n_paths < 1) fail(ErrorKind::InvalidArgument, "n_paths must be >= 1");
    if (vehicle_fidelity < 0 || vehicle_fidelity >= kVehicleFidelityLevels)
        fail(ErrorKind::InvalidArgument, "vehicle_fidelity must be in 0..3, got " + std::to_string(vehicle_fidelity));
}

std::string FidelityConfig::label() const {
    return fmt::format("D{}-R{}-P{}-DR{}-DF{}-FV{}", max_depth, n_rays, n_paths, diffuse ? 1 : 0, diffraction ? 1 : 0, vehicle_fidelity);
}

const char* to_string(PathKind k) {
    switch (k) {
        case PathKind::LineOfSight: return "los";
        case PathKind::Specular: return "specular";
        case PathKind::Diffuse: return "diffuse";
        case PathKind::Diffraction: return "diffraction";
    }
    return "los";
}

int surface_id_of_building_edge(const Scene& scene, std::size_t building, std::size_t edge) {
    std::size_t id = 0;
    for (std::size_t b = 0; b < building; ++b) id += scene.buildings[b].footprint.size();
    return static_cast<int>(id + edge);
}

int surface_id_of_wall(const Scene& scene, std::size_t wall_index) {
    std::size_t id = 0;
    for (const auto& b : scene.buildings) id += b.footprint.size();
    return static_cast<int>(id + wall_index);
}

double knife_edge_loss_db(double nu) {
    const double x = nu - 0.1;
    const double j = 6.9 + 20.0 * std::log10(std::sqrt(x * x + 1.0) + x);
    return std::max(6.0, j);
}

namespace {

constexpr double kDiffuseScale = 0.3;
// Angular capture tolerance for Lambertian children. Fixed rather than
// tied to N_rays so the share of scattering routes found grows with ray count.
constexpr double kDiffuseCapture = 5e-3;
constexpr double kHitEps = 1e-9;
constexpr std::size_t kChunkRays = 2048;
constexpr int kMaxHits = kMaxDepthLimit;

struct Surface {
    Vec2 a, d, n;  // start, b - a, unit normal
    double refl;
    int id;
};

struct Group {
    Aabb2 box;
    int begin, end;
};

struct Corner {
    Vec2 p;
    int s1, s2;  // incident surface ids (s2 = -1 for a free wall end)
};

struct StaticGeometry {
    std::vector<Surface> surfaces;
    std::vector<Group> groups;
    std::vector<Corner> corners;
    Aabb2 bounds;
};

StaticGeometry build_static(const Scene& scene) {
    StaticGeometry g;
    int id = 0;
    auto add_surface = [&](Vec2 a, Vec2 b, double refl) {
        const Vec2 d = b - a;
        const Vec2 n = normalized(Vec2{d.y, -d.x});  // outward for CCW footprints
        g.surfaces.push_back({a, d, n, refl, id++});
        g.bounds.expand(a);
        g.bounds.expand(b);
    };
    for (const Building& b : scene.buildings) {
        Group grp;
        grp.begin = static_cast<int>(g.surfaces.size());
        const auto& fp = b.footprint;
        const std::size_t n = fp.size();
        for (std::size_t i = 0; i < n; ++i) {
            add_surface(fp[i], fp[(i + 1) % n], b.reflectivity);
            grp.box.expand(fp[i]);
        }
        grp.end = static_cast<int>(g.surfaces.size());
        grp.box.pad(1e-6);
        g.groups.push_back(grp);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 prev = fp[(i + n - 1) % n], cur = fp[i], next = fp[(i + 1) % n];
            if (cross(cur - prev, next - cur) > 0.0)  // convex vertex of a CCW polygon
                g.corners.push_back({cur, grp.begin + static_cast<int>((i + n - 1) % n), grp.begin + static_cast<int>(i)});
        }
    }
    for (const Wall& w : scene.walls) {
        Group grp;
        grp.begin = static_cast<int>(g.surfaces.size());
        add_surface(w.a, w.b, w.reflectivity);
        grp.end = grp.begin + 1;
        grp.box.expand(w.a);
        grp.box.expand(w.b);
        grp.box.pad(1e-6);
        g.groups.push_back(grp);
        g.corners.push_back({w.a, grp.begin, -1});
        g.corners.push_back({w.b, grp.begin, -1});
    }
    return g;
}

struct Blocker {
    int vehicle;
    Vec2 pos;
    double c, s;
    Aabb2 box;
    std::vector<OrientedBox> prims;
};

std::vector<Blocker> build_blockers(const Scene& scene, int fidelity) {
    std::vector<Blocker> out;
    for (const auto& [id, pv] : scene.vehicles) {
        Blocker b;
        b.vehicle = id;
        b.pos = pv.pose.position;
        b.c = std::cos(pv.pose.heading);
        b.s = std::sin(pv.pose.heading);
        b.prims = (fidelity < 0 || pv.body.fidelity == fidelity) ? pv.body.primitives : vehicle_geometry(pv.body.kind, fidelity).primitives;
        for (const auto& p : b.prims)
            for (const Vec2& c : world_corners(p, pv.pose)) b.box.expand(c);
        out.push_back(std::move(b));
    }
    return out;
}

// Exact test of the 3D segment (a, za) -> (b, zb) against an oriented box.
bool box_blocks(const Blocker& bl, const OrientedBox& box, Vec2 a, Vec2 b, double za, double zb) {
    auto to_body = [&](Vec2 p) {
        const Vec2 d = p - bl.pos;
        return Vec2{bl.c * d.x + bl.s * d.y, -bl.s * d.x + bl.c * d.y};
    };
    const Vec2 qa = to_body(a), qb = to_body(b);
    const Vec2 dq = qb - qa;
    double t0 = 0.0, t1 = 1.0;
    auto slab = [&](double o, double d, double lo, double hi) {
        if (std::abs(d) < 1e-15) return o > lo && o < hi;
        double ta = (lo - o) / d, tb = (hi - o) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return t0 < t1;
    };
    if (!slab(qa.x, dq.x, box.center.x - box.half.x, box.center.x + box.half.x)) return false;
    if (!slab(qa.y, dq.y, box.center.y - box.half.y, box.center.y + box.half.y)) return false;
    const double z0 = za + (zb - za) * t0, z1 = za + (zb - za) * t1;
    const double zlo = box.center.z - box.half.z, zhi = box.center.z + box.half.z;
    return std::max(z0, z1) > zlo && std::min(z0, z1) < zhi;
}

bool leg_blocked_by_vehicles(const std::vector<Blocker>& blockers, Vec2 a, Vec2 b, double za, double zb, int skip) {
    Aabb2 seg;
    seg.expand(a);
    seg.expand(b);
    for (const Blocker& bl : blockers) {
        if (bl.vehicle == skip) continue;
        if (bl.box.hi.x < seg.lo.x || bl.box.lo.x > seg.hi.x || bl.box.hi.y < seg.lo.y || bl.box.lo.y > seg.hi.y) continue;
        for (const auto& p : bl.prims)
            if (box_blocks(bl, p, a, b, za, zb)) return true;
    }
    return false;
}

// Polyline a path takes in the horizontal plane, z interpolated linearly in
// unfolded length between the end heights.
bool polyline_blocked(const std::vector<Blocker>& blockers, const std::vector<Vec2>& pts, double z_tx, double z_rx, int skip) {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += norm(pts[i] - pts[i - 1]);
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double len = norm(pts[i] - pts[i - 1]);
        const double za = total > 0 ? z_tx + (z_rx - z_tx) * s / total : z_tx;
        const double zb = total > 0 ? z_tx + (z_rx - z_tx) * (s + len) / total : z_rx;
        if (leg_blocked_by_vehicles(blockers, pts[i - 1], pts[i], za, zb, skip)) return true;
        s += len;
    }
    return false;
}

// Proper crossing of segment a -> b with any static surface, surfaces
// `ign1`/`ign2` excluded.
bool static_blocked(const StaticGeometry& g, Vec2 a, Vec2 b, int ign1 = -1, int ign2 = -1) {
    const Vec2 r = b - a;
    for (const Surface& s : g.surfaces) {
        if (s.id == ign1 || s.id == ign2) continue;
        const double denom = cross(r, s.d);
        if (std::abs(denom) < 1e-15) continue;
        const Vec2 w = s.a - a;
        const double t = cross(w, s.d) / denom;
        const double u = cross(w, r) / denom;
        if (t > 1e-9 && t < 1.0 - 1e-9 && u >= 0.0 && u <= 1.0) return true;
    }
    return false;
}

struct Capture {
    int rx;
    std::uint32_t ray;
    int hit;  // diffuse: index of the spawning hit; specular: 0
    bool diffuse;
    double offset;
    double route;  // unfolded length through the capture point to the receiver
    double refl;
    int n_specular;
    std::vector<Vec2> pts;  // tx, interaction points (rx appended later)
    std::vector<int> seq;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

class Shooter {
public:
    Shooter(const StaticGeometry& g, Vec2 tx, const std::vector<Receiver>& rx, const FidelityConfig& cfg, std::uint64_t seed)
        : g_(g), tx_(tx), rx_(rx), cfg_(cfg), seed_(seed) {
        bounds_ = g.bounds;
        bounds_.expand(tx);
        for (const Receiver& r : rx) bounds_.expand(r.position.xy());
        bounds_.pad(1.0);
        const double n = static_cast<double>(cfg.n_rays);
        step_ = 2.0 * kPi / n;
        jitter_ = hash_uniform(derive_seed(seed, 0x6a6974ULL)) * step_;
        capture_scale_ = kPi / n;
    }

    void shoot(std::uint32_t ray, std::vector<Capture>& out) const {
        const double az = -kPi + jitter_ + step_ * static_cast<double>(ray);
        Vec2 o = tx_;
        Vec2 d = unit_from_angle(az);
        double acc = 0.0;
        double refl = 1.0;
        int skip = -1;
        std::array<Vec2, kMaxHits + 1> pts;
        std::array<int, kMaxHits> seq;
        pts[0] = tx_;
        int hits = 0;
        while (true) {
            int surf = -1;
            const double t = nearest(o, d, skip, surf);
            // an escaping ray has nothing left to hit, so it can still reach
            // receivers past the scene bounds
            capture(o, d, surf < 0 ? kInf : t, acc, capture_scale_, ray, 0, false, refl, hits, pts.data(), seq.data(), hits, out);
            if (surf < 0 || hits == cfg_.max_depth) break;
            const Surface& s = g_.surfaces[static_cast<std::size_t>(surf)];
            const Vec2 p = o + d * t;
            acc += t;
            refl *= s.refl;
            pts[static_cast<std::size_t>(hits) + 1] = p;
            seq[static_cast<std::size_t>(hits)] = s.id;
            ++hits;
            const double dn = dot(d, s.n);
            if (cfg_.diffuse) {
                // Lambertian child leaving the lit side, traced for one segment
                const Vec2 n_out = dn < 0.0 ? s.n : -s.n;
                const std::uint64_t key = derive_seed(seed_, 0x646966ULL, ray, static_cast<std::uint64_t>(hits));
                const double theta = std::asin(2.0 * hash_uniform(key) - 1.0);
                const Vec2 dc = rotate(n_out, theta);
                int csurf = -1;
                const double tc = nearest(p, dc, s.id, csurf);
                capture(p, dc, csurf < 0 ? kInf : tc, acc, kDiffuseCapture, ray, hits, true, refl * kDiffuseScale, hits - 1, pts.data(), seq.data(), hits,
                        out);
            }
            d = d - s.n * (2.0 * dn);
            o = p;
            skip = s.id;
        }
    }

private:
    double exit_distance(Vec2 o, Vec2 d) const {
        double t = 1e300;
        if (d.x > 0) t = std::min(t, (bounds_.hi.x - o.x) / d.x);
        if (d.x < 0) t = std::min(t, (bounds_.lo.x - o.x) / d.x);
        if (d.y > 0) t = std::min(t, (bounds_.hi.y - o.y) / d.y);
        if (d.y < 0) t = std::min(t, (bounds_.lo.y - o.y) / d.y);
        return std::max(t, 0.0);
    }

    double nearest(Vec2 o, Vec2 d, int skip, int& best) const {
        double t_best = exit_distance(o, d);
        best = -1;
        const Vec2 inv{d.x != 0.0 ? 1.0 / d.x : std::copysign(1e300, d.x), d.y != 0.0 ? 1.0 / d.y : std::copysign(1e300, d.y)};
        for (const Group& grp : g_.groups) {
            double t_enter;
            if (!ray_aabb(o, inv, grp.box, t_best, t_enter)) continue;
            for (int i = grp.begin; i < grp.end; ++i) {
                const Surface& s = g_.surfaces[static_cast<std::size_t>(i)];
                if (s.id == skip) continue;
                const double denom = cross(d, s.d);
                if (std::abs(denom) < 1e-15) continue;
                const Vec2 w = s.a - o;
                const double t = cross(w, s.d) / denom;
                if (t <= kHitEps || t >= t_best) continue;
                const double u = cross(w, d) / denom;
                if (u < 0.0 || u > 1.0) continue;
                t_best = t;
                best = i;
            }
        }
        return t_best;
    }

    void capture(Vec2 o, Vec2 d, double len, double acc, double scale, std::uint32_t ray, int hit, bool diffuse, double refl, int n_specular,
                 const Vec2* pts, const int* seq, int n_hits, std::vector<Capture>& out) const {
        for (std::size_t r = 0; r < rx_.size(); ++r) {
            const Vec2 w = rx_[r].position.xy() - o;
            const double t = dot(w, d);
            if (t < 0.0 || t > len) continue;
            const double perp2 = std::max(0.0, dot(w, w) - t * t);
            const double unfolded = acc + t;
            const double route = acc + std::sqrt(dot(w, w));
            const double radius = route * scale;
            if (perp2 > radius * radius) continue;
            Capture c;
            c.rx = static_cast<int>(r);
            c.ray = ray;
            c.hit = hit;
            c.diffuse = diffuse;
            c.offset = unfolded > 0.0 ? std::sqrt(perp2) / unfolded : 0.0;
            c.route = route;
            c.refl = refl;
            c.n_specular = n_specular;
            c.pts.assign(pts, pts + n_hits + 1);
            c.seq.assign(seq, seq + n_hits);
            out.push_back(std::move(c));
        }
    }

    const StaticGeometry& g_;
    Vec2 tx_;
    const std::vector<Receiver>& rx_;
    FidelityConfig cfg_;
    std::uint64_t seed_;
    Aabb2 bounds_;
    double step_ = 0.0, jitter_ = 0.0, capture_scale_ = 0.0;
};

double wrapped_carrier_phase(double length, double lambda) {
    const double cycles = length / lambda;
    return -2.0 * kPi * (cycles - std::floor(cycles));
}

PathComponent make_component(const std::vector<Vec2>& pts, double z_tx, double z_rx, double lambda, double amp_factor, double extra_phase,
                             PathKind kind, int interactions, std::vector<int> seq) {
    double lh = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) lh += norm(pts[i] - pts[i - 1]);
    const double dz = z_rx - z_tx;
    PathComponent pc;
    pc.length = std::sqrt(lh * lh + dz * dz);
    pc.delay = pc.length / kSpeedOfLight;
    pc.amplitude = lambda / (4.0 * kPi * pc.length) * amp_factor;
    pc.phase = wrap_angle(wrapped_carrier_phase(pc.length, lambda) + extra_phase);
    pc.azimuth = angle_of(pts[1] - pts[0]);
    pc.elevation = std::atan2(dz, lh);
    pc.interactions = interactions;
    pc.kind = kind;
    pc.surfaces = std::move(seq);
    return pc;
}

void add_diffraction(const StaticGeometry& g, const std::vector<Blocker>& blockers, const Vec3& tx, const Receiver& rx, double lambda, PathList& out) {
    const Vec2 a = tx.xy(), b = rx.position.xy();
    if (!static_blocked(g, a, b)) return;
    const double direct = distance(tx, rx.position);
    for (const Corner& c : g.corners) {
        // pull the corner back a hair so grazing the corner's own faces does not count
        const Vec2 ca = c.p + normalized(a - c.p) * 1e-6;
        const Vec2 cb = c.p + normalized(b - c.p) * 1e-6;
        if (static_blocked(g, a, ca) || static_blocked(g, cb, b)) continue;
        const std::vector<Vec2> pts{a, c.p, b};
        if (polyline_blocked(blockers, pts, tx.z, rx.position.z, rx.vehicle_id)) continue;
        const double lh = norm(c.p - a) + norm(b - c.p);
        const double dz = rx.position.z - tx.z;
        const double excess = std::max(0.0, std::sqrt(lh * lh + dz * dz) - direct);
        const double nu = 2.0 * std::sqrt(excess / lambda);
        const double loss = std::pow(10.0, -knife_edge_loss_db(nu) / 20.0);
        std::vector<int> seq{c.s1};
        out.push_back(make_component(pts, tx.z, rx.position.z, lambda, loss, 0.0, PathKind::Diffraction, 1, std::move(seq)));
    }
}

}  // namespace

std::vector<PathList> trace_source_raw(const Scene& scene, const Vec3& tx, const std::vector<Receiver>& receivers, const FidelityConfig& cfg,
                                       std::uint64_t seed, const TraceOptions& opt) {
    cfg.validate();
    if (!(opt.carrier_hz > 0.0)) fail(ErrorKind::InvalidArgument, "carrier must be positive");
    const double lambda = kSpeedOfLight / opt.carrier_hz;
    const StaticGeometry g = build_static(scene);
    const std::vector<Blocker> blockers = build_blockers(scene, cfg.vehicle_fidelity);
    std::vector<PathList> result(receivers.size());
    if (receivers.empty()) return result;

    const Shooter shooter(g, tx.xy(), receivers, cfg, seed);
    const auto n_rays = static_cast<std::size_t>(cfg.n_rays);
    const std::size_t n_chunks = (n_rays + kChunkRays - 1) / kChunkRays;
    std::vector<std::vector<Capture>> chunks(n_chunks);
    auto run_chunk = [&](std::size_t c) {
        const std::size_t end = std::min(n_rays, (c + 1) * kChunkRays);
        for (std::size_t r = c * kChunkRays; r < end; ++r) shooter.shoot(static_cast<std::uint32_t>(r), chunks[c]);
    };
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) run_chunk(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    }

    // One specular path per (receiver, surface sequence): the capturing ray
    // closest to the receiver wins, ties to the lower ray index.
    // Diffuse: one path per (receiver, surface sequence) along the shortest
    // captured route, which settles as the ray count grows.
    std::map<std::pair<int, std::vector<int>>, const Capture*> best, diffuse;
    for (const auto& chunk : chunks) {
        for (const Capture& c : chunk) {
            if (c.diffuse) {
                auto [it, inserted] = diffuse.try_emplace({c.rx, c.seq}, &c);
                if (!inserted && (c.route < it->second->route || (c.route == it->second->route && c.ray < it->second->ray))) it->second = &c;
                continue;
            }
            auto [it, inserted] = best.try_emplace({c.rx, c.seq}, &c);
            if (!inserted && (c.offset < it->second->offset || (c.offset == it->second->offset && c.ray < it->second->ray))) it->second = &c;
        }
    }

    auto finish = [&](const Capture& c, PathKind kind, double phase_extra) {
        const Receiver& rx = receivers[static_cast<std::size_t>(c.rx)];
        std::vector<Vec2> pts = c.pts;
        pts.push_back(rx.position.xy());
        if (polyline_blocked(blockers, pts, tx.z, rx.position.z, rx.vehicle_id)) return;
        const int interactions = static_cast<int>(c.seq.size());
        result[static_cast<std::size_t>(c.rx)].push_back(make_component(pts, tx.z, rx.position.z, lambda, c.refl, phase_extra, kind, interactions, c.seq));
    };
    for (const auto& [key, c] : best) finish(*c, c->seq.empty() ? PathKind::LineOfSight : PathKind::Specular, kPi * static_cast<double>(c->seq.size()));
    for (const auto& [key, c] : diffuse) {
        std::uint64_t h = derive_seed(seed, 0x646966ULL, static_cast<std::uint64_t>(key.first));
        for (int id : key.second) h = splitmix64(h ^ static_cast<std::uint64_t>(id));
        finish(*c, PathKind::Diffuse, kPi * static_cast<double>(c->n_specular) + 2.0 * kPi * hash_uniform(h));
    }

    if (cfg.diffraction)
        for (std::size_t r = 0; r < receivers.size(); ++r) add_diffraction(g, blockers, tx, receivers[r], lambda, result[r]);
    return result;
}

PathList select_paths(const PathList& raw, const FidelityConfig& cfg) {
    PathList out;
    for (const PathComponent& p : raw) {
        if (p.interactions > cfg.max_depth) continue;
        if (p.kind == PathKind::Diffuse && !cfg.diffuse) continue;
        if (p.kind == PathKind::Diffraction && !cfg.diffraction) continue;
        out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(), [](const PathComponent& a, const PathComponent& b) {
        if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
        return a.delay < b.delay;
    });
    if (static_cast<long long>(out.size()) > cfg.n_paths) out.resize(static_cast<std::size_t>(cfg.n_paths));
    return out;
}

std::vector<PathList> trace_source(const Scene& scene, const Vec3& tx, const std::vector<Receiver>& receivers, const FidelityConfig& cfg,
                                   std::uint64_t seed, const TraceOptions& opt) {
    auto raw = trace_source_raw(scene, tx, receivers, cfg, seed, opt);
    for (auto& pl : raw) pl = select_paths(pl, cfg);
    return raw;
}

PathList trace_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, const FidelityConfig& cfg, std::uint64_t seed, const TraceOptions& opt) {
    if (tx == rx) fail(ErrorKind::InvalidArgument, "tx and rx coincide");
    return trace_source(scene, tx, {Receiver{rx, -1}}, cfg, seed, opt).front();
}

bool segment_blocked(const Scene& scene, const Vec3& a, const Vec3& b, int skip_vehicle) {
    const StaticGeometry g = build_static(scene);
    if (static_blocked(g, a.xy(), b.xy())) return true;
    const auto blockers = build_blockers(scene, -1);
    return leg_blocked_by_vehicles(blockers, a.xy(), b.xy(), a.z, b.z, skip_vehicle);
}

std::string paths_to_csv(const std::vector<std::pair<std::string, PathList>>& links) {
    std::string out = "link,kind,amplitude,phase,delay_s,azimuth,elevation,interactions,length_m\n";
    for (const auto& [link, paths] : links)
        for (const auto& p : paths)
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", link, to_string(p.kind), io::fmt_double(p.amplitude), io::fmt_double(p.phase),
                               io::fmt_double(p.delay), io::fmt_double(p.azimuth), io::fmt_double(p.elevation), p.interactions, io::fmt_double(p.length));
    return out;
}

}  // namespace predtwin
