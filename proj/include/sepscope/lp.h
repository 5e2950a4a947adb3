// Copyright 2026 The sepscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPSCOPE_LP_H
#define SEPSCOPE_LP_H

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sepscope/kernels.h"

namespace sepscope {

/// maximize c.x  subject to  A x = b, x >= 0.
struct LpProblem {
    Eigen::MatrixXd A;
    RVector b;
    RVector c;
};

struct LpOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    int refactor_every = 64;
    /// Column block for partial pricing; 0 picks one from the problem size.
    Eigen::Index block_size = 0;
    /// 0 means 20 * (m + n).
    long max_pivots = 0;
    /// Track the phase-2 objective after every pivot and record decreases.
    bool check_monotone = false;
    Exec exec = Exec::Parallel;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    RVector x;
    double objective = 0;
    /// Structural basic columns, in row order. Shorter than m when a
    /// redundant row keeps an artificial variable basic at zero.
    std::vector<Eigen::Index> basis;
    /// Row prices y with reduced costs c_j - y . A_j.
    RVector duals;

    long pivots = 0;
    long phase1_pivots = 0;
    long degenerate_pivots = 0;
    bool bland_engaged = false;
    double phase1_residual = 0;
    Eigen::Index unbounded_column = -1;
    /// warm_start_lp had to fall back to a cold start.
    bool warm_start_fallback = false;

    // KKT residuals on optimal solutions.
    double max_reduced_cost = 0;
    double primal_residual = 0;
    double min_x = 0;
    /// False if check_monotone saw the phase-2 objective decrease.
    bool monotone = true;
};

/// Two-phase revised simplex with an explicit basis inverse, product-form
/// updates and periodic LU refactorization. Partial pricing over column
/// blocks; Bland's rule after 3m consecutive degenerate pivots.
LpSolution solve_lp(const LpProblem &p, const LpOptions &opt = {});

/// Phase 2 from a given basis. Falls back to solve_lp (and sets
/// warm_start_fallback) if the basis is malformed, singular or infeasible.
LpSolution warm_start_lp(const LpProblem &p, std::span<const Eigen::Index> basis,
                         const LpOptions &opt = {});

}  // namespace sepscope

#endif
