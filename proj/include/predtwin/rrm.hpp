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
#include <limits>
#include <string>
#include <vector>

#include "predtwin/phy.hpp"

namespace predtwin {

struct RrmParams {
    int load_limit = 20;            ///< L, users per RSU
    double gamma_min_db = -6.0;
    double outage_penalty = 1e3;
    int n_restarts = 5;
    int max_iters = 20;
    std::uint64_t seed = 1;
    double exhaustive_cap = 1e6;    ///< largest W^B exhaustive_solve accepts
    bool parallel = true;

    void validate() const;
};

/// Lexicographic objective: pf_score first, worst served SINR second.
struct EvalScore {
    double pf_score = -std::numeric_limits<double>::infinity();
    double worst_sinr_db = -std::numeric_limits<double>::infinity();

    bool operator==(const EvalScore&) const = default;
    bool better_than(const EvalScore& o) const {
        if (pf_score != o.pf_score) return pf_score > o.pf_score;
        return worst_sinr_db > o.worst_sinr_db;
    }
};

struct Assignment {
    std::vector<int> serving;             ///< per user: RSU index or -1
    std::vector<std::vector<int>> served; ///< per RSU: served users, best SE first
    bool operator==(const Assignment&) const = default;
};

struct Evaluation {
    EvalScore score;
    Assignment assignment;
    std::vector<double> sinr;  ///< per user, linear, toward the serving (or best) RSU
};

/// Best-SINR association, gamma_min pruning and top-L capping per RSU.
/// Throws EmptyNetwork when U = 0 or B = 0.
Evaluation evaluate_config(const BeamState& w, const GainTensor& g, const LinkBudget& budget, const RrmParams& params);

/// Per RSU, the beam of the single largest gain over users (ties: lowest beam).
BeamState greedy_seed(const GainTensor& g);

struct RrmResult {
    BeamState beams;
    Evaluation eval;
    long long eval_count = 0;
};

struct SolverTracePoint {
    int restart;
    int pass;
    EvalScore score;
};

/// Multi-start iterative coordinate descent.
RrmResult icd_solve(const GainTensor& g, const LinkBudget& budget, const RrmParams& params, std::vector<SolverTracePoint>* trace = nullptr);

/// Evaluates all W^B beam states; ties go to the lexicographically smallest
/// vector. Throws SearchSpaceTooLarge beyond params.exhaustive_cap.
RrmResult exhaustive_solve(const GainTensor& g, const LinkBudget& budget, const RrmParams& params);

long long icd_eval_bound(const RrmParams& params, int rsus, int beams);

struct NetworkMetrics {
    double sum_rate = 0.0;     ///< bit/s
    double outage_prob = 0.0;  ///< fraction of users
};

/// Sum rate over served users meeting gamma_min; outage counts every user
/// that is unserved or below gamma_min.
NetworkMetrics network_metrics(const Assignment& assignment, const std::vector<double>& sinrs, const LinkBudget& budget);

/// Independent check of the association constraints: at most one RSU per
/// user, per-RSU load <= L, every served user at or above gamma_min under
/// the beam state (SINR recomputed from the tensor). Returns the violations.
std::vector<std::string> validate_assignment(const Assignment& a, const BeamState& w, const GainTensor& g, const LinkBudget& budget, const RrmParams& params);

/// Seeded synthetic tensor for solver benchmarks: per link, a log-uniform
/// path gain split over 1-3 plane waves on a W-element ULA, seen through the
/// W-beam DFT codebook.
GainTensor random_instance(int rsus, int beams, int users, std::uint64_t seed);

}  // namespace predtwin
