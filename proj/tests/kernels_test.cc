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

#include <vector>

#include "gtest/gtest.h"

#include "sepscope/error.h"
#include "sepscope/random_states.h"

using namespace sepscope;

TEST(CoordsTest, RoundTripAndDualPairing) {
    RngStream rng(1, stream_id("coords", 0));
    for (int t = 0; t < 20; ++t) {
        CMatrix h = flat_measure_dm({3, 3}, rng).matrix();
        RVector v = hermitian_coords(h);
        ASSERT_EQ(v.size(), 81);
        EXPECT_LT((hermitian_from_coords(v, 9) - h).cwiseAbs().maxCoeff(), 1e-16);
        RVector y(81);
        for (int i = 0; i < 81; ++i) y(i) = rng.normal();
        EXPECT_NEAR(y.dot(v), (dual_matrix(y, 9) * h).trace().real(), 1e-13);
    }
    EXPECT_THROW(dual_matrix(RVector::Zero(5), 2), DimensionError);
}

TEST(KernelsTest, ProjectorColumnsMatchCoords) {
    RngStream rng(2, stream_id("kernels/columns", 0));
    std::vector<CVector> states;
    for (int i = 0; i < 500; ++i) states.push_back(haar_vector(9, rng));
    Eigen::MatrixXd ser(81, 502), par(81, 502);
    ser.setZero();
    par.setZero();
    kernels::projector_columns_serial(states, ser, 2);
    kernels::projector_columns_parallel(states, par, 2);
    EXPECT_EQ(ser, par);
    for (int i = 0; i < 500; i += 50) {
        RVector ref = hermitian_coords(states[static_cast<size_t>(i)] * states[static_cast<size_t>(i)].adjoint());
        EXPECT_LT((ser.col(i + 2) - ref).cwiseAbs().maxCoeff(), 1e-15);
    }
    Eigen::MatrixXd small(81, 10);
    EXPECT_THROW(kernels::projector_columns_serial(states, small, 0), DimensionError);
    Eigen::MatrixXd wrong(16, 600);
    EXPECT_THROW(kernels::projector_columns_parallel(states, wrong, 0), DimensionError);
}

TEST(KernelsTest, ReducedCostsSerialAndParallelAgree) {
    RngStream rng(3, stream_id("kernels/rc", 0));
    Eigen::MatrixXd a(81, 3000);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
    RVector y(81), c(3000);
    for (auto &v : y) v = rng.normal();
    for (auto &v : c) v = rng.normal();
    std::vector<double> s(2000), p(2000);
    kernels::reduced_costs_serial(a, y, c, 500, 2500, s.data());
    kernels::reduced_costs_parallel(a, y, c, 500, 2500, p.data());
    EXPECT_EQ(s, p);
    RVector ref = c - a.transpose() * y;
    for (int j = 0; j < 2000; ++j) EXPECT_NEAR(s[static_cast<size_t>(j)], ref(500 + j), 1e-12);
}

TEST(KernelsTest, FirstNegativeBlockMatchesEigenvalueScan) {
    RngStream rng(4, stream_id("kernels/negative", 0));
    std::vector<CMatrix> s, e;
    for (int k = 0; k < 400; ++k) {
        CMatrix g = haar_unitary(6, rng);
        RVector d(6);
        for (int i = 0; i < 6; ++i) d(i) = rng.uniform(0, 1);
        s.push_back(g * d.cast<cplx>().asDiagonal() * g.adjoint());
        CMatrix h = haar_unitary(6, rng);
        for (int i = 0; i < 6; ++i) d(i) = rng.uniform(-0.2, 1);
        e.push_back(h * d.cast<cplx>().asDiagonal() * h.adjoint());
    }
    for (double beta : {0.0, 0.05, 0.2, 0.6, 1.0}) {
        long ref = -1;
        for (size_t k = 0; k < s.size() && ref < 0; ++k) {
            CMatrix m = (1 - beta) * s[k] + beta * e[k];
            if (min_eigenvalue(m) < -1e-10 * m.trace().real()) ref = static_cast<long>(k);
        }
        EXPECT_EQ(kernels::first_negative_block_serial(s, e, beta, 1e-10), ref) << beta;
        EXPECT_EQ(kernels::first_negative_block_parallel(s, e, beta, 1e-10), ref) << beta;
    }
    EXPECT_EQ(kernels::first_negative_block_serial(s, {}, 0.3, 1e-10), -1);
    EXPECT_THROW(kernels::first_negative_block_parallel(s, std::span(e).first(3), 0.5, 1e-10), DimensionError);
}
