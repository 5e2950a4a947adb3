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

#include "sepscope/kernels.h"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sepscope/error.h"

namespace sepscope {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

RVector hermitian_coords(const CMatrix &h) {
    const int n = static_cast<int>(h.rows());
    RVector v(n * n);
    for (int i = 0; i < n; ++i) v(i) = h(i, i).real();
    int p = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            v(p++) = h(i, j).real();
            v(p++) = h(i, j).imag();
        }
    return v;
}

CMatrix hermitian_from_coords(const RVector &v, int n) {
    if (v.size() != n * n) throw DimensionError("hermitian_from_coords: length must be n^2");
    CMatrix h(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = v(i);
    int p = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            h(i, j) = cplx(v(p), v(p + 1));
            h(j, i) = std::conj(h(i, j));
            p += 2;
        }
    return h;
}

CMatrix dual_matrix(const RVector &y, int n) {
    if (y.size() != n * n) throw DimensionError("dual_matrix: length must be n^2");
    // Tr(Y P) = sum_i Y_ii P_ii + sum_{i<j} 2 Re(Y_ji P_ij).
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = y(i);
    int p = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = cplx(0.5 * y(p), 0.5 * y(p + 1));
            m(j, i) = std::conj(m(i, j));
            p += 2;
        }
    return m;
}

namespace kernels {

namespace {

inline void projector_column(const CVector &v, double *col) {
    const Eigen::Index n = v.size();
    for (Eigen::Index i = 0; i < n; ++i) col[i] = std::norm(v(i));
    Eigen::Index p = n;
    for (Eigen::Index i = 0; i < n; ++i) {
        // Written out: std::complex multiply goes through the NaN-safe slow path.
        const double ar = v(i).real(), ai = v(i).imag();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double br = v(j).real(), bi = v(j).imag();
            col[p++] = ar * br + ai * bi;
            col[p++] = ai * br - ar * bi;
        }
    }
}

void check_projector_shape(std::span<const CVector> states, const Eigen::MatrixXd &out,
                           Eigen::Index first_col) {
    if (first_col < 0 || first_col + static_cast<Eigen::Index>(states.size()) > out.cols())
        throw DimensionError("projector_columns: not enough columns");
    for (const auto &s : states)
        if (s.size() * s.size() != out.rows())
            throw DimensionError("projector_columns: state length does not match rows");
}

// Cholesky first; an eigen-solve only when it fails near the boundary.
bool block_is_negative(const CMatrix &m, double tol) {
    const double tr = m.trace().real();
    if (!(tr > 0)) return false;
    CMatrix shifted = m;
    shifted.diagonal().array() += tol * tr;
    Eigen::LLT<CMatrix> llt(shifted);
    if (llt.info() == Eigen::Success) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) < -tol * tr;
}

CMatrix mix_block(std::span<const CMatrix> s, std::span<const CMatrix> e, double beta, size_t k) {
    if (e.empty()) return s[k];
    return (1 - beta) * s[k] + beta * e[k];
}

void check_block_shape(std::span<const CMatrix> s, std::span<const CMatrix> e) {
    if (!e.empty() && e.size() != s.size()) throw DimensionError("first_negative_block: list sizes differ");
}

}  // namespace

void reduced_costs_serial(const Eigen::MatrixXd &a, const RVector &y, const RVector &c,
                          Eigen::Index begin, Eigen::Index end, double *out) {
    const Eigen::Index m = a.rows();
    for (Eigen::Index j = begin; j < end; ++j) {
        const double *col = a.data() + j * m;
        double s = 0;
        for (Eigen::Index i = 0; i < m; ++i) s += y(i) * col[i];
        out[j - begin] = c(j) - s;
    }
}

void reduced_costs_parallel(const Eigen::MatrixXd &a, const RVector &y, const RVector &c,
                            Eigen::Index begin, Eigen::Index end, double *out) {
    const Eigen::Index m = a.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = begin; j < end; ++j) {
        const double *col = a.data() + j * m;
        double s = 0;
        for (Eigen::Index i = 0; i < m; ++i) s += y(i) * col[i];
        out[j - begin] = c(j) - s;
    }
}

void projector_columns_serial(std::span<const CVector> states, Eigen::MatrixXd &out,
                              Eigen::Index first_col) {
    check_projector_shape(states, out, first_col);
    for (size_t k = 0; k < states.size(); ++k)
        projector_column(states[k], out.col(first_col + static_cast<Eigen::Index>(k)).data());
}

void projector_columns_parallel(std::span<const CVector> states, Eigen::MatrixXd &out,
                                Eigen::Index first_col) {
    check_projector_shape(states, out, first_col);
    const long count = static_cast<long>(states.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < count; ++k)
        projector_column(states[static_cast<size_t>(k)], out.col(first_col + k).data());
}

long first_negative_block_serial(std::span<const CMatrix> s, std::span<const CMatrix> e, double beta,
                                 double tol) {
    check_block_shape(s, e);
    for (size_t k = 0; k < s.size(); ++k)
        if (block_is_negative(mix_block(s, e, beta, k), tol)) return static_cast<long>(k);
    return -1;
}

long first_negative_block_parallel(std::span<const CMatrix> s, std::span<const CMatrix> e, double beta,
                                   double tol) {
    check_block_shape(s, e);
    const long n = static_cast<long>(s.size());
    long best = n;
    // Static chunks run in index order, so each thread stops at its first hit.
#pragma omp parallel for schedule(static) reduction(min : best)
    for (long k = 0; k < n; ++k)
        if (k < best && block_is_negative(mix_block(s, e, beta, static_cast<size_t>(k)), tol)) best = k;
    return best == n ? -1 : best;
}

}  // namespace kernels
}  // namespace sepscope
