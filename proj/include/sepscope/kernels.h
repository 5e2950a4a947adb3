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

// Data-parallel inner loops. Every kernel has a serial reference version
// and an OpenMP version with identical results; tests compare the two and
// bench/ times them.

#ifndef SEPSCOPE_KERNELS_H
#define SEPSCOPE_KERNELS_H

#include <span>

#include <Eigen/Dense>

#include "sepscope/hermitian.h"

namespace sepscope {

enum class Exec { Serial, Parallel };

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

// Real coordinates of an N x N Hermitian matrix: the N diagonal entries,
// then Re and Im of every strictly-upper entry (i < j, row-major pairs).
// Length N^2.

RVector hermitian_coords(const CMatrix &h);
/// Inverse of hermitian_coords.
CMatrix hermitian_from_coords(const RVector &v, int n);
/// Y such that y . hermitian_coords(P) = Tr(Y P) for every Hermitian P.
CMatrix dual_matrix(const RVector &y, int n);

namespace kernels {

/// out[j - begin] = c[j] - y . A.col(j) for j in [begin, end).
void reduced_costs_serial(const Eigen::MatrixXd &a, const RVector &y, const RVector &c,
                          Eigen::Index begin, Eigen::Index end, double *out);
void reduced_costs_parallel(const Eigen::MatrixXd &a, const RVector &y, const RVector &c,
                            Eigen::Index begin, Eigen::Index end, double *out);

/// Writes hermitian_coords(|v><v|) of each state into consecutive columns
/// of `out`, starting at `first_col`.
void projector_columns_serial(std::span<const CVector> states, Eigen::MatrixXd &out,
                              Eigen::Index first_col);
void projector_columns_parallel(std::span<const CVector> states, Eigen::MatrixXd &out,
                                Eigen::Index first_col);

/// Smallest k such that M_k = (1 - beta) s[k] + beta e[k] (just s[k] when
/// `e` is empty) has an eigenvalue below -tol * Tr M_k; -1 if none.
/// Blocks with non-positive trace are skipped.
long first_negative_block_serial(std::span<const CMatrix> s, std::span<const CMatrix> e, double beta,
                                 double tol);
long first_negative_block_parallel(std::span<const CMatrix> s, std::span<const CMatrix> e, double beta,
                                   double tol);

inline void reduced_costs(Exec e, const Eigen::MatrixXd &a, const RVector &y, const RVector &c,
                          Eigen::Index begin, Eigen::Index end, double *out) {
    if (e == Exec::Parallel)
        reduced_costs_parallel(a, y, c, begin, end, out);
    else
        reduced_costs_serial(a, y, c, begin, end, out);
}

inline void projector_columns(Exec e, std::span<const CVector> states, Eigen::MatrixXd &out,
                              Eigen::Index first_col) {
    if (e == Exec::Parallel)
        projector_columns_parallel(states, out, first_col);
    else
        projector_columns_serial(states, out, first_col);
}

inline long first_negative_block(Exec ex, std::span<const CMatrix> s, std::span<const CMatrix> e,
                                 double beta, double tol) {
    return ex == Exec::Parallel ? first_negative_block_parallel(s, e, beta, tol)
                                : first_negative_block_serial(s, e, beta, tol);
}

}  // namespace kernels
}  // namespace sepscope

#endif
