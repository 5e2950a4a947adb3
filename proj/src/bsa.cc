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

#include "sepscope/bsa.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "sepscope/error.h"
#include "sepscope/kernels.h"

namespace sepscope {

BsaParams BsaParams::defaults_for(const Dims &dims) {
    BsaParams p;
    if (dims == Dims{2, 2}) {
        p.lambda = 15;
        p.eps_c = 1e-15;
        p.t0 = 1e-3;
    } else {
        p.lambda = 4;
        p.eps_c = 1e-10;
        p.t0 = 5e-4;
    }
    return p;
}

void BsaParams::validate() const {
    if (lambda < 1 || !(eps_c > 0) || max_iters < 1 || !(eta0 > 0) || eta0 > 1 ||
        !(eta_shrink > 0) || eta_shrink >= 1 || !(eta_min > 0) || !(weight_floor > 0) ||
        !(t0 > 0) || !(min_input_eig > 0) || stall_patience < 1 || perturbations_per_support < 0 ||
        descent_restarts < 0 || pool_retries < 0)
        throw ContractError("BsaParams: parameters must be positive");
    if (!(sep_fraction > 0 && sep_fraction < 1))
        throw ContractError("BsaParams: sep_fraction must lie in (0, 1)");
}

int effective_rank(const CMatrix &h, double t0) {
    RVector ev = eigenvalues(h);
    return static_cast<int>((ev.array() > t0).count());
}

double reconstruction_residual(const BsaResult &r, const DensityMatrix &rho) {
    if (!(r.dims == rho.dims())) throw DimensionError("reconstruction_residual: dims mismatch");
    CMatrix rec = (1.0 - r.B) * r.rho_sep.matrix();
    if (r.rho_ent) rec += r.B * r.rho_ent->matrix();
    return hs_distance(rec, rho.matrix());
}

ProductDescent descend_product(const CMatrix &y, ProductState start, int max_sweeps) {
    const Dims &dims = start.dims;
    const int kk = dims.count();
    const int n = dims.total();
    double value = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double prev = value;
        for (int k = 0; k < kk; ++k) {
            CVector left = CVector::Ones(1), right = CVector::Ones(1);
            for (int q = 0; q < k; ++q) left = kron(left, start.factors[static_cast<size_t>(q)]);
            for (int q = k + 1; q < kk; ++q) right = kron(right, start.factors[static_cast<size_t>(q)]);
            const int d = dims[k];
            const auto r = right.size();
            CMatrix v = CMatrix::Zero(n, d);
            for (Eigen::Index l = 0; l < left.size(); ++l)
                for (int a = 0; a < d; ++a)
                    for (Eigen::Index s = 0; s < r; ++s) v((l * d + a) * r + s, a) = left(l) * right(s);
            CMatrix local = v.adjoint() * y * v;
            local = (0.5 * (local + local.adjoint())).eval();
            Eigen::SelfAdjointEigenSolver<CMatrix> es(local);
            start.factors[static_cast<size_t>(k)] = es.eigenvectors().col(0);
            value = es.eigenvalues()(0);
        }
        if (std::abs(prev - value) < 1e-14) break;
    }
    return {std::move(start), value};
}

namespace {

constexpr int kCenterPatience = 30;

// Candidate pure states; product entries keep their factors.
struct Pool {
    std::vector<CVector> amps;
    std::vector<ProductState> factors;  // empty factor list for generic states

    void add_product(ProductState p) {
        amps.push_back(p.amplitudes());
        factors.push_back(std::move(p));
    }
    void add_generic(CVector v) {
        amps.push_back(std::move(v));
        factors.push_back(ProductState{});
    }
    bool is_product(size_t i) const { return !factors[i].factors.empty(); }
    size_t size() const { return amps.size(); }
};

LpProblem build_lp(const Pool &pool, const RVector &target, Exec exec) {
    LpProblem p;
    const auto cols = static_cast<Eigen::Index>(pool.size());
    p.A.resize(target.size(), cols);
    kernels::projector_columns(exec, pool.amps, p.A, 0);
    p.b = target;
    p.c.resize(cols);
    for (size_t i = 0; i < pool.size(); ++i) p.c(static_cast<Eigen::Index>(i)) = pool.is_product(i) ? 1.0 : 0.0;
    return p;
}

void fill_fresh(Pool &pool, const Dims &dims, long target, double sep_fraction, RngStream &rng) {
    long need = target - static_cast<long>(pool.size());
    if (need <= 0) return;
    long products = static_cast<long>(std::ceil(sep_fraction * static_cast<double>(need)));
    for (long i = 0; i < products; ++i) pool.add_product(product_pure(dims, rng));
    for (long i = products; i < need; ++i) pool.add_generic(haar_vector(dims.total(), rng));
}

}  // namespace

BsaResult best_separable_approximation(const DensityMatrix &rho, const BsaParams &params,
                                       RngStream &rng) {
    params.validate();
    const Dims &dims = rho.dims();
    const int n = dims.total();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    if (es.eigenvalues()(0) < params.min_input_eig)
        throw RankDeficiencyError("best_separable_approximation: smallest eigenvalue " +
                                  std::to_string(es.eigenvalues()(0)) + " is below the floor");

    const long m_pool = static_cast<long>(params.lambda) * n * n * n * n;
    const RVector target = hermitian_coords(rho.matrix());
    const Exec exec = params.lp.exec;

    // Initial pool and cold solve; enlarge the generic part if infeasible.
    Pool pool;
    LpSolution sol;
    long generic_target = m_pool - static_cast<long>(std::ceil(params.sep_fraction * m_pool));
    for (int attempt = 0;; ++attempt) {
        pool = Pool{};
        long products = static_cast<long>(std::ceil(params.sep_fraction * m_pool));
        for (long i = 0; i < products; ++i) pool.add_product(product_pure(dims, rng));
        if (params.seed_eigenvectors)
            for (int k = 0; k < n; ++k) pool.add_generic(es.eigenvectors().col(k));
        while (static_cast<long>(pool.size()) < products + generic_target)
            pool.add_generic(haar_vector(n, rng));
        LpProblem lp = build_lp(pool, target, exec);
        sol = solve_lp(lp, params.lp);
        if (sol.status == LpStatus::Optimal) break;
        if (attempt >= params.pool_retries)
            throw SamplingFailureError("best_separable_approximation: pool cannot represent the input (" +
                                           to_string(sol.status) + ")",
                                       static_cast<long>(pool.size()));
        generic_target *= 2;
    }

    BsaResult res;
    res.dims = dims;
    res.t0 = params.t0;
    res.total_pivots = sol.pivots;
    res.objective_history.push_back(sol.objective);

    // Dual bound: with Y shifted to be PSD, Y / min_pi <pi|Y|pi> is feasible for
    // the dual over all pure states, so 1 - B <= (b.y - s) / (mu - s).
    auto dual_bound = [&](const RVector &y, const CMatrix &ym, double mu) {
        double s = std::min(0.0, min_eigenvalue(ym));
        double denom = mu - s;
        if (!(denom > 0)) return std::numeric_limits<double>::infinity();
        return (target.dot(y) - s) / denom;
    };

    double eta = params.eta0;
    int stalls = 0;
    int iter = 0;
    RVector center = sol.duals;
    double best_bound = std::numeric_limits<double>::infinity();
    int since_center = 0;
    while (iter < params.max_iters && sol.objective < 1.0 - params.lp.opt_tol) {
        ++iter;
        // A center that has not been beaten for a while drags pricing away
        // from useful columns; restart from the current duals.
        if (since_center >= kCenterPatience) {
            center = sol.duals;
            since_center = 0;
        }
        const bool smooth = best_bound < 1.0;
        const double alpha = smooth ? params.dual_smoothing : 0.0;
        const RVector ys = alpha * center + (1.0 - alpha) * sol.duals;
        const CMatrix y = dual_matrix(ys, n);
        double mu = std::numeric_limits<double>::infinity();

        Pool next;
        std::vector<Eigen::Index> warm;
        for (Eigen::Index j : sol.basis) {
            auto ju = static_cast<size_t>(j);
            warm.push_back(static_cast<Eigen::Index>(next.size()));
            if (pool.is_product(ju))
                next.add_product(pool.factors[ju]);
            else
                next.add_generic(pool.amps[ju]);
        }
        const CMatrix yraw = dual_matrix(sol.duals, n);
        auto add_descent = [&](ProductState start) {
            if (params.raw_descents) {
                ProductDescent raw = descend_product(yraw, start);
                if (raw.value < 1.0 - params.lp.opt_tol) next.add_product(std::move(raw.state));
            }
            ProductDescent dsc = descend_product(y, std::move(start));
            mu = std::min(mu, dsc.value);
            if (dsc.value < 1.0 - params.lp.opt_tol) next.add_product(std::move(dsc.state));
        };
        const size_t support_end = next.size();
        for (size_t i = 0; i < support_end; ++i) {
            if (sol.x(sol.basis[i]) <= params.weight_floor) continue;
            if (next.is_product(i)) {
                ProductState base = next.factors[i];
                for (int t = 0; t < params.perturbations_per_support; ++t)
                    next.add_product(perturb_pure(base, eta, rng));
                add_descent(base);
            } else {
                CVector base = next.amps[i];
                for (int t = 0; t < params.perturbations_per_support; ++t)
                    next.add_generic(perturb_vector(base, eta, rng));
            }
        }
        for (int t = 0; t < params.descent_restarts; ++t) add_descent(product_pure(dims, rng));
        {
            Eigen::SelfAdjointEigenSolver<CMatrix> ysol(y);
            for (int k = 0; k < n && ysol.eigenvalues()(k) < -params.lp.opt_tol; ++k)
                next.add_generic(ysol.eigenvectors().col(k));
        }
        double bound = dual_bound(ys, y, mu);
        if (bound < best_bound) {
            best_bound = bound;
            center = ys;
            since_center = 0;
        } else {
            ++since_center;
        }
        fill_fresh(next, dims, m_pool, params.sep_fraction, rng);

        LpProblem lp = build_lp(next, target, exec);
        LpSolution nsol = warm.size() == static_cast<size_t>(target.size())
                              ? warm_start_lp(lp, warm, params.lp)
                              : solve_lp(lp, params.lp);
        if (nsol.warm_start_fallback) ++res.warm_start_fallbacks;
        res.total_pivots += nsol.pivots;
        if (nsol.status != LpStatus::Optimal) break;

        double improvement = nsol.objective - sol.objective;
        pool = std::move(next);
        sol = std::move(nsol);
        res.objective_history.push_back(sol.objective);
        res.bound_history.push_back(best_bound);

        if (best_bound - sol.objective < params.eps_c) break;
        if (improvement < 10 * params.eps_c) eta *= params.eta_shrink;
        stalls = improvement < params.eps_c ? stalls + 1 : 0;
        if (stalls >= params.stall_patience || eta < params.eta_min) break;
    }
    res.iterations = iter;
    res.final_eta = eta;
    res.pool_size = static_cast<long>(pool.size());

    CMatrix sep = CMatrix::Zero(n, n), ent = CMatrix::Zero(n, n);
    double wsep = 0, went = 0;
    for (Eigen::Index j : sol.basis) {
        double w = sol.x(j);
        if (w <= 0) continue;
        auto ju = static_cast<size_t>(j);
        const CVector &v = pool.amps[ju];
        if (pool.is_product(ju)) {
            sep += w * (v * v.adjoint());
            wsep += w;
            if (w > params.weight_floor) res.sep_support.push_back({pool.factors[ju], w});
        } else {
            ent += w * (v * v.adjoint());
            went += w;
            if (w > params.weight_floor) res.ent_support.push_back({v, w});
        }
    }

    const auto &h = res.objective_history;
    size_t tail = std::min<size_t>(3, h.size());
    auto [lo, hi] = std::minmax_element(h.end() - static_cast<long>(tail), h.end());
    double spread = *hi - *lo;
    double gap = std::isfinite(best_bound) ? std::abs(best_bound - sol.objective) : 0.0;
    // B cannot be negative, so the uncertainty never exceeds the LP value itself.
    res.delta_B_estimate =
        std::min(std::max(spread, gap), went) + params.lp.opt_tol * static_cast<double>(target.size());

    res.B_raw = went;
    res.rho_sep = DensityMatrix::from_unnormalized(dims, sep);
    if (went > res.delta_B_estimate) {
        res.B = went;
        res.rho_ent = DensityMatrix::from_unnormalized(dims, ent);
    } else {
        res.B = 0;
    }
    return res;
}

}  // namespace sepscope
