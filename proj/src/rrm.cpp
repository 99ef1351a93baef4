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

#include "predtwin/rrm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "predtwin/errors.hpp"
#include "predtwin/geometry.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

void RrmParams::validate() const {
    if (load_limit < 1) fail(ErrorKind::ConfigError, "rrm load limit must be >= 1");
    if (!(outage_penalty > 0.0)) fail(ErrorKind::ConfigError, "outage penalty must be positive");
    if (n_restarts < 1 || max_iters < 1) fail(ErrorKind::ConfigError, "rrm restarts and iterations must be >= 1");
}

Evaluation evaluate_config(const BeamState& w, const GainTensor& g, const LinkBudget& budget, const RrmParams& params) {
    const int U = g.users(), B = g.rsus();
    if (U == 0 || B == 0) fail(ErrorKind::EmptyNetwork, "evaluation needs at least one user and one RSU");
    if (static_cast<int>(w.size()) != B) fail(ErrorKind::DimensionMismatch, "beam state length differs from RSU count");
    const double p = budget.p_tx_w(), noise = budget.noise_w(), gmin = db_to_linear(params.gamma_min_db);

    Evaluation ev;
    ev.sinr.assign(static_cast<std::size_t>(U), 0.0);
    ev.assignment.serving.assign(static_cast<std::size_t>(U), -1);
    ev.assignment.served.assign(static_cast<std::size_t>(B), {});
    std::vector<std::vector<int>> candidates(static_cast<std::size_t>(B));

    for (int u = 0; u < U; ++u) {
        int best_b = -1;
        double best = -1.0;
        for (int b = 0; b < B; ++b) {
            const double s = p * g(u, b, w[static_cast<std::size_t>(b)]);
            // interference summed directly keeps this bit-identical to sinr()
            double interf = 0.0;
            for (int j = 0; j < B; ++j)
                if (j != b) interf += p * g(u, j, w[static_cast<std::size_t>(j)]);
            const double gamma = s / (noise + interf);
            if (gamma > best) {
                best = gamma;
                best_b = b;
            }
        }
        ev.sinr[static_cast<std::size_t>(u)] = best;
        if (best >= gmin) candidates[static_cast<std::size_t>(best_b)].push_back(u);
    }

    double pf = 0.0;
    int outage = U;
    double worst = std::numeric_limits<double>::infinity();
    for (int b = 0; b < B; ++b) {
        auto& cand = candidates[static_cast<std::size_t>(b)];
        std::stable_sort(cand.begin(), cand.end(), [&](int x, int y) { return ev.sinr[static_cast<std::size_t>(x)] > ev.sinr[static_cast<std::size_t>(y)]; });
        const std::size_t n = std::min(cand.size(), static_cast<std::size_t>(params.load_limit));
        for (std::size_t i = 0; i < n; ++i) {
            const int u = cand[i];
            const double gamma = ev.sinr[static_cast<std::size_t>(u)];
            ev.assignment.serving[static_cast<std::size_t>(u)] = b;
            ev.assignment.served[static_cast<std::size_t>(b)].push_back(u);
            pf += std::log(std::log2(1.0 + gamma));
            worst = std::min(worst, gamma);
            --outage;
        }
    }
    ev.score.pf_score = pf - params.outage_penalty * outage;
    ev.score.worst_sinr_db = std::isinf(worst) ? -std::numeric_limits<double>::infinity() : linear_to_db(worst);
    return ev;
}

BeamState greedy_seed(const GainTensor& g) {
    if (g.users() == 0 || g.rsus() == 0 || g.beams() == 0) fail(ErrorKind::EmptyNetwork, "greedy seed needs a non-empty tensor");
    BeamState w(static_cast<std::size_t>(g.rsus()), 0);
    for (int b = 0; b < g.rsus(); ++b) {
        double best = -1.0;
        for (int k = 0; k < g.beams(); ++k)
            for (int u = 0; u < g.users(); ++u)
                if (g(u, b, k) > best) {
                    best = g(u, b, k);
                    w[static_cast<std::size_t>(b)] = k;
                }
    }
    return w;
}

long long icd_eval_bound(const RrmParams& params, int rsus, int beams) {
    return static_cast<long long>(params.n_restarts) * params.max_iters * rsus * beams + params.n_restarts;
}

namespace {

struct RestartOutcome {
    BeamState w;
    Evaluation eval;
    long long evals = 0;
    std::vector<SolverTracePoint> trace;
};

RestartOutcome run_restart(int r, const GainTensor& g, const LinkBudget& budget, const RrmParams& params, bool keep_trace) {
    const int B = g.rsus(), W = g.beams();
    Engine eng(derive_seed(params.seed, 0x696364ULL, static_cast<std::uint64_t>(r)));
    RestartOutcome out;
    if (r == 0) {
        out.w = greedy_seed(g);
    } else {
        out.w.resize(static_cast<std::size_t>(B));
        for (auto& wb : out.w) wb = static_cast<int>(uniform_index(eng, static_cast<std::uint64_t>(W)));
    }
    out.eval = evaluate_config(out.w, g, budget, params);
    ++out.evals;
    if (keep_trace) out.trace.push_back({r, 0, out.eval.score});

    std::vector<int> order(static_cast<std::size_t>(B));
    for (int pass = 1; pass <= params.max_iters; ++pass) {
        bool improved = false;
        std::iota(order.begin(), order.end(), 0);
        for (int i = B - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[uniform_index(eng, static_cast<std::uint64_t>(i) + 1)]);
        for (int b : order) {
            const int current = out.w[static_cast<std::size_t>(b)];
            int best_k = current;
            Evaluation best_eval = out.eval;
            BeamState trial = out.w;
            for (int k = 0; k < W; ++k) {
                if (k == current) continue;
                trial[static_cast<std::size_t>(b)] = k;
                Evaluation cand = evaluate_config(trial, g, budget, params);
                ++out.evals;
                if (cand.score.better_than(best_eval.score)) {
                    best_eval = std::move(cand);
                    best_k = k;
                    improved = true;
                }
            }
            out.w[static_cast<std::size_t>(b)] = best_k;
            out.eval = std::move(best_eval);
        }
        if (keep_trace) out.trace.push_back({r, pass, out.eval.score});
        if (!improved) break;
    }
    return out;
}

}  // namespace

RrmResult icd_solve(const GainTensor& g, const LinkBudget& budget, const RrmParams& params, std::vector<SolverTracePoint>* trace) {
    params.validate();
    if (g.users() == 0 || g.rsus() == 0) fail(ErrorKind::EmptyNetwork, "icd needs at least one user and one RSU");
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(params.n_restarts));
    const bool keep = trace != nullptr;
    if (params.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int r = 0; r < params.n_restarts; ++r) outcomes[static_cast<std::size_t>(r)] = run_restart(r, g, budget, params, keep);
    } else {
        for (int r = 0; r < params.n_restarts; ++r) outcomes[static_cast<std::size_t>(r)] = run_restart(r, g, budget, params, keep);
    }
    RrmResult res;
    bool have = false;
    for (auto& o : outcomes) {
        res.eval_count += o.evals;
        if (trace) trace->insert(trace->end(), o.trace.begin(), o.trace.end());
        if (!have || o.eval.score.better_than(res.eval.score)) {
            res.beams = o.w;
            res.eval = o.eval;
            have = true;
        }
    }
    return res;
}

RrmResult exhaustive_solve(const GainTensor& g, const LinkBudget& budget, const RrmParams& params) {
    params.validate();
    const int B = g.rsus(), W = g.beams();
    if (g.users() == 0 || B == 0) fail(ErrorKind::EmptyNetwork, "exhaustive search needs at least one user and one RSU");
    const double space = std::pow(static_cast<double>(W), B);
    if (space > params.exhaustive_cap)
        fail(ErrorKind::SearchSpaceTooLarge, "W^B = " + std::to_string(W) + "^" + std::to_string(B) + " exceeds cap " + std::to_string(static_cast<long long>(params.exhaustive_cap)));
    const auto total = static_cast<long long>(std::llround(space));

    auto decode = [&](long long idx) {
        BeamState w(static_cast<std::size_t>(B));
        for (int b = B - 1; b >= 0; --b) {
            w[static_cast<std::size_t>(b)] = static_cast<int>(idx % W);
            idx /= W;
        }
        return w;
    };
    // Index order is lexicographic order of the beam vector, so keeping the
    // first strict maximum gives the smallest vector among ties.
    constexpr long long kChunk = 4096;
    const long long n_chunks = (total + kChunk - 1) / kChunk;
    std::vector<RrmResult> partial(static_cast<std::size_t>(n_chunks));
    auto run = [&](long long c) {
        RrmResult& best = partial[static_cast<std::size_t>(c)];
        const long long end = std::min(total, (c + 1) * kChunk);
        bool have = false;
        for (long long i = c * kChunk; i < end; ++i) {
            BeamState w = decode(i);
            Evaluation ev = evaluate_config(w, g, budget, params);
            ++best.eval_count;
            if (!have || ev.score.better_than(best.eval.score)) {
                best.beams = std::move(w);
                best.eval = std::move(ev);
                have = true;
            }
        }
    };
    if (params.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long c = 0; c < n_chunks; ++c) run(c);
    } else {
        for (long long c = 0; c < n_chunks; ++c) run(c);
    }
    RrmResult res;
    bool have = false;
    for (auto& p : partial) {
        res.eval_count += p.eval_count;
        if (!have || p.eval.score.better_than(res.eval.score)) {
            res.beams = p.beams;
            res.eval = p.eval;
            have = true;
        }
    }
    return res;
}

NetworkMetrics network_metrics(const Assignment& a, const std::vector<double>& sinrs, const LinkBudget& budget) {
    NetworkMetrics m;
    const std::size_t U = a.serving.size();
    if (U == 0) return m;
    if (sinrs.size() != U) fail(ErrorKind::DimensionMismatch, "one SINR per user required");
    const double gmin = budget.gamma_min();
    std::size_t outage = 0;
    for (std::size_t u = 0; u < U; ++u) {
        if (a.serving[u] >= 0 && sinrs[u] >= gmin)
            m.sum_rate += budget.bandwidth_hz * std::log2(1.0 + sinrs[u]);
        else
            ++outage;
    }
    m.outage_prob = static_cast<double>(outage) / static_cast<double>(U);
    return m;
}

std::vector<std::string> validate_assignment(const Assignment& a, const BeamState& w, const GainTensor& g, const LinkBudget& budget, const RrmParams& params) {
    std::vector<std::string> issues;
    const int U = g.users(), B = g.rsus();
    if (static_cast<int>(a.serving.size()) != U) issues.push_back("serving vector length differs from user count");
    if (static_cast<int>(a.served.size()) != B) issues.push_back("served lists length differs from RSU count");
    if (!issues.empty()) return issues;
    std::vector<int> times_served(static_cast<std::size_t>(U), 0);
    const double gmin = db_to_linear(params.gamma_min_db);
    for (int b = 0; b < B; ++b) {
        const auto& list = a.served[static_cast<std::size_t>(b)];
        if (static_cast<int>(list.size()) > params.load_limit) issues.push_back("RSU " + std::to_string(b) + " serves more than L users");
        for (int u : list) {
            if (u < 0 || u >= U) {
                issues.push_back("RSU " + std::to_string(b) + " lists unknown user");
                continue;
            }
            ++times_served[static_cast<std::size_t>(u)];
            if (a.serving[static_cast<std::size_t>(u)] != b) issues.push_back("user " + std::to_string(u) + " serving entry disagrees with RSU list");
            // recomputed from scratch rather than trusting the evaluator
            const double p = budget.p_tx_w();
            double interf = 0.0;
            for (int j = 0; j < B; ++j)
                if (j != b) interf += p * g(u, j, w[static_cast<std::size_t>(j)]);
            const double gamma = p * g(u, b, w[static_cast<std::size_t>(b)]) / (budget.noise_w() + interf);
            if (gamma < gmin) issues.push_back("user " + std::to_string(u) + " served below gamma_min");
        }
    }
    for (int u = 0; u < U; ++u) {
        if (times_served[static_cast<std::size_t>(u)] > 1) issues.push_back("user " + std::to_string(u) + " served by several RSUs");
        if (a.serving[static_cast<std::size_t>(u)] >= 0 && times_served[static_cast<std::size_t>(u)] == 0)
            issues.push_back("user " + std::to_string(u) + " marked served but missing from RSU list");
    }
    return issues;
}

GainTensor random_instance(int rsus, int beams, int users, std::uint64_t seed) {
    if (rsus < 1 || beams < 1 || users < 0) fail(ErrorKind::InvalidArgument, "instance needs B, W >= 1 and U >= 0");
    Engine eng(derive_seed(seed, 0x696e7374ULL));
    // Few-path channels on a W-element half-wavelength ULA seen through the
    // DFT codebook, so neighbouring beams are correlated the way real ones are.
    const Codebook cb = dft_codebook(beams, beams);
    std::vector<std::vector<ChannelVector>> h(static_cast<std::size_t>(users), std::vector<ChannelVector>(static_cast<std::size_t>(rsus)));
    for (auto& row : h) {
        for (auto& hb : row) {
            const double base = db_to_linear(-130.0 + 45.0 * uniform01(eng));
            const int n_paths = 1 + static_cast<int>(uniform_index(eng, 3));
            hb.assign(static_cast<std::size_t>(beams), cdouble{});
            for (int k = 0; k < n_paths; ++k) {
                const double power = k == 0 ? 1.0 : 0.05 + 0.45 * uniform01(eng);
                const double sin_az = -1.0 + 2.0 * uniform01(eng);
                const cdouble a = std::polar(std::sqrt(base * power), 2.0 * kPi * uniform01(eng));
                for (int i = 0; i < beams; ++i) hb[static_cast<std::size_t>(i)] += a * std::polar(1.0, kPi * i * sin_az);
            }
        }
    }
    return build_gain_tensor(h, cb, false);
}

}  // namespace predtwin
