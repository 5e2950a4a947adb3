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

#ifndef SEPSCOPE_BSA_H
#define SEPSCOPE_BSA_H

#include <optional>
#include <vector>

#include "sepscope/hermitian.h"
#include "sepscope/lp.h"
#include "sepscope/random_states.h"
#include "sepscope/rng.h"

namespace sepscope {

/// Knobs of the sampled-LP best separable approximation.
struct BsaParams {
    int lambda = 4;             // pool size M = lambda * N^4
    double eps_c = 1e-10;       // loop convergence on the LP objective
    int max_iters = 300;
    double eta0 = 0.01;         // perturbation radius schedule
    double eta_shrink = 0.7;
    double eta_min = 1e-6;
    double sep_fraction = 0.5;  // share of product states in fresh samples
    double weight_floor = 1e-12;
    double t0 = 5e-4;           // eigenvalues above t0 count as non-vanishing
    double min_input_eig = 1e-4;

    /// Consecutive iterations with improvement < eps_c before stopping.
    int stall_patience = 2;
    /// Random perturbations generated around each support vector.
    int perturbations_per_support = 2;
    /// Extra alternating-minimization descents from random product states.
    int descent_restarts = 32;
    /// Put the eigenvectors of the input into the first pool, which makes
    /// the first LP feasible.
    bool seed_eigenvectors = true;
    /// Pool doublings tried when the first LP is infeasible.
    int pool_retries = 2;
    /// Weight of the best-bound dual in the pricing point (0 disables).
    double dual_smoothing = 0.8;
    /// Also run the support descents against the unsmoothed duals.
    bool raw_descents = true;

    LpOptions lp = [] {
        LpOptions o;
        o.block_size = 512;
        return o;
    }();

    /// Table defaults: two qubits lambda=15, eps_c=1e-15, t0=1e-3; two
    /// qutrits (and anything else) lambda=4, eps_c=1e-10, t0=5e-4.
    static BsaParams defaults_for(const Dims &dims);
    void validate() const;
};

struct WeightedProduct {
    ProductState state;
    double weight;
};

struct WeightedPure {
    CVector state;
    double weight;
};

/// rho = (1 - B) rho_sep + B rho_ent with minimal B.
struct BsaResult {
    Dims dims;
    double B = 0;      // reported weight; 0 when B_raw <= delta_B_estimate
    double B_raw = 0;  // LP value before the noise cut
    /// Larger of the dual-bound gap and the spread of the last objectives.
    double delta_B_estimate = 0;
    double t0 = 0;
    DensityMatrix rho_sep;
    std::optional<DensityMatrix> rho_ent;  // absent when B is reported as 0
    std::vector<WeightedProduct> sep_support;
    std::vector<WeightedPure> ent_support;

    int iterations = 0;
    std::vector<double> objective_history;  // LP objective 1 - B per iteration
    std::vector<double> bound_history;      // best dual upper bound on 1 - B
    long pool_size = 0;
    long total_pivots = 0;
    int warm_start_fallbacks = 0;
    double final_eta = 0;

    bool entangled() const { return rho_ent.has_value(); }
};

BsaResult best_separable_approximation(const DensityMatrix &rho, const BsaParams &params,
                                       RngStream &rng);

/// Number of eigenvalues above t0.
int effective_rank(const CMatrix &h, double t0);

/// D_HS((1 - B) rho_sep + B rho_ent, rho).
double reconstruction_residual(const BsaResult &result, const DensityMatrix &rho);

/// Local minimum of <pi|Y|pi> over product states by alternating
/// eigen-updates of one factor at a time, starting at `start`.
struct ProductDescent {
    ProductState state;
    double value;
};
ProductDescent descend_product(const CMatrix &y, ProductState start, int max_sweeps = 30);

}  // namespace sepscope

#endif
