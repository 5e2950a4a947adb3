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

#include "sepscope/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "sepscope/error.h"

namespace sepscope {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

using Eigen::Index;

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;

class Simplex {
  public:
    Simplex(const LpProblem &p, const LpOptions &o)
        : a_(p.A), b_(p.b), c_(p.c), opt_(o), m_(p.A.rows()), n_(p.A.cols()) {
        if (b_.size() != m_ || c_.size() != n_) throw DimensionError("solve_lp: inconsistent dimensions");
        if (m_ == 0) throw DimensionError("solve_lp: no constraints");
        if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite())
            throw ContractError("solve_lp: non-finite entries");
        block_ = opt_.block_size > 0 ? opt_.block_size
                                     : std::max<Index>(256, std::min<Index>(n_, 32 * m_));
        block_ = std::min(block_, std::max<Index>(n_, 1));
        max_pivots_ = opt_.max_pivots > 0 ? opt_.max_pivots : 20 * (m_ + n_);
        rc_.resize(static_cast<size_t>(block_));
        zero_c_ = RVector::Zero(n_);
        basic_.assign(static_cast<size_t>(n_), 0);
    }

    LpSolution solve_cold() {
        sign_.resize(m_);
        for (Index i = 0; i < m_; ++i) sign_(i) = b_(i) < 0 ? -1.0 : 1.0;
        head_.resize(static_cast<size_t>(m_));
        for (Index i = 0; i < m_; ++i) head_[static_cast<size_t>(i)] = n_ + i;
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        xb_ = b_.cwiseAbs();

        phase_ = 1;
        LpStatus st = iterate();
        sol_.phase1_pivots = sol_.pivots;
        double resid = 0;
        for (Index r = 0; r < m_; ++r)
            if (head_[static_cast<size_t>(r)] >= n_) resid += std::max(0.0, xb_(r));
        sol_.phase1_residual = resid;
        double scale = std::max(1.0, b_.cwiseAbs().maxCoeff());
        if (st == LpStatus::IterationLimit) return finish(st);
        if (resid > opt_.feas_tol * static_cast<double>(m_) * scale) return finish(LpStatus::Infeasible);
        drive_out_artificials();
        phase_ = 2;
        return finish(iterate());
    }

    bool start_from(std::span<const Index> basis) {
        if (static_cast<Index>(basis.size()) != m_) return false;
        sign_ = RVector::Ones(m_);
        head_.assign(basis.begin(), basis.end());
        for (Index j : head_) {
            if (j < 0 || j >= n_ || basic_[static_cast<size_t>(j)]) return false;
            basic_[static_cast<size_t>(j)] = 1;
        }
        if (!refactor()) return false;
        if (xb_.minCoeff() < -opt_.feas_tol) return false;
        return true;
    }

    LpSolution solve_phase2() {
        phase_ = 2;
        return finish(iterate());
    }

  private:
    double cost(Index j) const {
        if (phase_ == 1) return j >= n_ ? -1.0 : 0.0;
        return j >= n_ ? 0.0 : c_(j);
    }

    RVector column(Index j) const {
        if (j >= n_) {
            RVector e = RVector::Zero(m_);
            e(j - n_) = 1.0;
            return e;
        }
        return sign_.cwiseProduct(a_.col(j));
    }

    bool refactor() {
        Eigen::MatrixXd basis(m_, m_);
        for (Index r = 0; r < m_; ++r) basis.col(r) = column(head_[static_cast<size_t>(r)]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
        if (!(lu.rcond() > 1e-14)) return false;
        binv_ = lu.inverse();
        xb_ = binv_ * sign_.cwiseProduct(b_);
        since_refactor_ = 0;
        return true;
    }

    /// Prices in the original (unflipped) row signs.
    RVector prices() const {
        RVector cb(m_);
        for (Index r = 0; r < m_; ++r) cb(r) = cost(head_[static_cast<size_t>(r)]);
        RVector yp = binv_.transpose() * cb;
        return sign_.cwiseProduct(yp);
    }

    double objective() const {
        double s = 0;
        for (Index r = 0; r < m_; ++r) s += cost(head_[static_cast<size_t>(r)]) * xb_(r);
        return s;
    }

    Index choose_entering(const RVector &y) {
        const RVector &cvec = phase_ == 1 ? zero_c_ : c_;
        const Index nblocks = (n_ + block_ - 1) / block_;
        if (bland_) {
            for (Index bi = 0; bi < nblocks; ++bi) {
                Index lo = bi * block_, hi = std::min(n_, lo + block_);
                kernels::reduced_costs(opt_.exec, a_, y, cvec, lo, hi, rc_.data());
                for (Index j = lo; j < hi; ++j)
                    if (!basic_[static_cast<size_t>(j)] && rc_[static_cast<size_t>(j - lo)] > opt_.opt_tol)
                        return j;
            }
            return -1;
        }
        for (Index t = 0; t < nblocks; ++t) {
            Index bi = (cursor_ + t) % nblocks;
            Index lo = bi * block_, hi = std::min(n_, lo + block_);
            kernels::reduced_costs(opt_.exec, a_, y, cvec, lo, hi, rc_.data());
            Index best = -1;
            double best_rc = opt_.opt_tol;
            for (Index j = lo; j < hi; ++j) {
                double r = rc_[static_cast<size_t>(j - lo)];
                if (r > best_rc && !basic_[static_cast<size_t>(j)]) {
                    best_rc = r;
                    best = j;
                }
            }
            if (best >= 0) {
                cursor_ = bi;
                return best;
            }
        }
        return -1;
    }

    Index ratio_test(const RVector &d) const {
        if (phase_ == 2) {
            // Artificials left on redundant rows are pinned at zero.
            Index r = -1;
            double best = kPivotTol;
            for (Index i = 0; i < m_; ++i)
                if (head_[static_cast<size_t>(i)] >= n_ && std::abs(d(i)) > best) {
                    best = std::abs(d(i));
                    r = i;
                }
            if (r >= 0) return r;
        }
        if (bland_) {
            double min_ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m_; ++i)
                if (d(i) > kPivotTol) min_ratio = std::min(min_ratio, std::max(0.0, xb_(i)) / d(i));
            if (!std::isfinite(min_ratio)) return -1;
            Index r = -1;
            for (Index i = 0; i < m_; ++i)
                if (d(i) > kPivotTol && std::max(0.0, xb_(i)) / d(i) <= min_ratio + 1e-12 &&
                    (r < 0 || head_[static_cast<size_t>(i)] < head_[static_cast<size_t>(r)]))
                    r = i;
            return r;
        }
        // Harris two-pass test.
        double theta_max = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < m_; ++i)
            if (d(i) > kPivotTol) theta_max = std::min(theta_max, (xb_(i) + opt_.feas_tol) / d(i));
        if (!std::isfinite(theta_max)) return -1;
        Index r = -1;
        double best = 0;
        for (Index i = 0; i < m_; ++i)
            if (d(i) > kPivotTol && xb_(i) / d(i) <= theta_max && d(i) > best) {
                best = d(i);
                r = i;
            }
        return r;
    }

    void pivot(Index r, Index q, const RVector &d) {
        double theta = xb_(r) / d(r);
        if (phase_ == 2 && head_[static_cast<size_t>(r)] < n_) theta = std::max(0.0, theta);
        xb_ -= theta * d;
        xb_(r) = theta;
        Index leaving = head_[static_cast<size_t>(r)];
        if (leaving < n_) basic_[static_cast<size_t>(leaving)] = 0;
        head_[static_cast<size_t>(r)] = q;
        basic_[static_cast<size_t>(q)] = 1;

        Eigen::RowVectorXd prow = binv_.row(r) / d(r);
        binv_.noalias() -= d * prow;
        binv_.row(r) = prow;

        ++sol_.pivots;
        ++since_refactor_;
        if (std::abs(theta) < kDegenerateStep) {
            ++sol_.degenerate_pivots;
            if (++degenerate_run_ > 3 * m_ && !bland_) {
                bland_ = true;
                sol_.bland_engaged = true;
            }
        } else {
            degenerate_run_ = 0;
            bland_ = false;
        }
    }

    LpStatus iterate() {
        double last_obj = objective();
        for (;;) {
            if (sol_.pivots >= max_pivots_) return LpStatus::IterationLimit;
            if (since_refactor_ >= opt_.refactor_every) refactor();
            RVector y = prices();
            Index q = choose_entering(y);
            if (q < 0 && since_refactor_ > 0) {
                // Confirm optimality on a fresh factorization.
                refactor();
                y = prices();
                q = choose_entering(y);
            }
            if (q < 0) return LpStatus::Optimal;
            RVector d = binv_ * column(q);
            Index r = ratio_test(d);
            if (r < 0) {
                sol_.unbounded_column = q;
                return LpStatus::Unbounded;
            }
            pivot(r, q, d);
            if (opt_.check_monotone && phase_ == 2) {
                double obj = objective();
                if (obj < last_obj - 1e-9 * std::max(1.0, std::abs(last_obj))) sol_.monotone = false;
                last_obj = obj;
            }
        }
    }

    void drive_out_artificials() {
        RVector alpha(n_);
        for (Index r = 0; r < m_; ++r) {
            if (head_[static_cast<size_t>(r)] < n_) continue;
            RVector w = sign_.cwiseProduct(RVector(binv_.row(r).transpose()));
            kernels::reduced_costs(opt_.exec, a_, w, zero_c_, 0, n_, alpha.data());
            Index best = -1;
            double best_abs = 1e-7;
            for (Index j = 0; j < n_; ++j)
                if (!basic_[static_cast<size_t>(j)] && std::abs(alpha(j)) > best_abs) {
                    best_abs = std::abs(alpha(j));
                    best = j;
                }
            if (best < 0) continue;  // redundant row
            RVector d = binv_ * column(best);
            pivot(r, best, d);
        }
        refactor();
    }

    LpSolution finish(LpStatus st) {
        sol_.status = st;
        if (since_refactor_ > 0) refactor();
        sol_.x = RVector::Zero(n_);
        sol_.min_x = 0;
        sol_.basis.clear();
        for (Index r = 0; r < m_; ++r) {
            Index j = head_[static_cast<size_t>(r)];
            if (j >= n_) continue;
            sol_.basis.push_back(j);
            sol_.min_x = std::min(sol_.min_x, xb_(r));
            sol_.x(j) = std::max(0.0, xb_(r));
        }
        sol_.objective = c_.dot(sol_.x);
        if (st == LpStatus::Optimal) {
            phase_ = 2;
            sol_.duals = prices();
            RVector rc(n_);
            kernels::reduced_costs(opt_.exec, a_, sol_.duals, c_, 0, n_, rc.data());
            double worst = 0;
            for (Index j = 0; j < n_; ++j)
                if (!basic_[static_cast<size_t>(j)]) worst = std::max(worst, rc(j));
            sol_.max_reduced_cost = worst;
            sol_.primal_residual = (a_ * sol_.x - b_).cwiseAbs().maxCoeff();
        }
        return sol_;
    }

    const Eigen::MatrixXd &a_;
    const RVector &b_;
    const RVector &c_;
    LpOptions opt_;
    Index m_, n_;
    Index block_ = 0;
    long max_pivots_ = 0;
    Index cursor_ = 0;
    RVector sign_;
    RVector zero_c_;
    std::vector<Index> head_;
    std::vector<char> basic_;
    Eigen::MatrixXd binv_;
    RVector xb_;
    std::vector<double> rc_;
    int phase_ = 1;
    int since_refactor_ = 0;
    Index degenerate_run_ = 0;
    bool bland_ = false;
    LpSolution sol_;
};

}  // namespace

LpSolution solve_lp(const LpProblem &p, const LpOptions &opt) {
    Simplex s(p, opt);
    return s.solve_cold();
}

LpSolution warm_start_lp(const LpProblem &p, std::span<const Eigen::Index> basis,
                         const LpOptions &opt) {
    {
        Simplex s(p, opt);
        if (s.start_from(basis)) return s.solve_phase2();
    }
    LpSolution cold = solve_lp(p, opt);
    cold.warm_start_fallback = true;
    return cold;
}

}  // namespace sepscope
