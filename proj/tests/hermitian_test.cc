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

#include "sepscope/hermitian.h"

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"

#include "sepscope/error.h"
#include "sepscope/random_states.h"

using namespace sepscope;

namespace {

CVector basis(int n, int k) {
    CVector v = CVector::Zero(n);
    v(k) = 1;
    return v;
}

PureState bell() {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1 / std::sqrt(2.0);
    return PureState({2, 2}, v);
}

// (|01> - |10>)/sqrt2.
CVector singlet() {
    CVector v = CVector::Zero(4);
    v(1) = 1 / std::sqrt(2.0);
    v(2) = -1 / std::sqrt(2.0);
    return v;
}

DensityMatrix werner(double p) {
    CVector s = singlet();
    CMatrix m = p * s * s.adjoint() + (1 - p) / 4 * CMatrix::Identity(4, 4);
    return DensityMatrix({2, 2}, m);
}

}  // namespace

TEST(DimsTest, ParseAndValidate) {
    EXPECT_EQ(Dims::parse("3x3"), (Dims{3, 3}));
    EXPECT_EQ(Dims::parse("2x2x2").total(), 8);
    EXPECT_EQ(Dims::parse("2x3").str(), "2x3");
    EXPECT_THROW(Dims::parse("3x1"), DimensionError);
    EXPECT_THROW(Dims::parse("x3"), DimensionError);
    EXPECT_THROW(Dims(std::vector<int>{}), DimensionError);
}

TEST(DensityMatrixTest, RejectsBrokenInvariants) {
    CMatrix m = CMatrix::Identity(4, 4) / 4.0;
    m(0, 1) = 1e-6;  // not Hermitian
    EXPECT_THROW(DensityMatrix({2, 2}, m), ContractError);
    EXPECT_THROW(DensityMatrix({2, 2}, CMatrix::Identity(4, 4) / 3.0), ContractError);
    CMatrix neg = CMatrix::Zero(4, 4);
    neg.diagonal() << 0.6, 0.6, 0.0, -0.2;
    EXPECT_THROW(DensityMatrix({2, 2}, neg), ContractError);
    EXPECT_THROW(DensityMatrix({2, 2}, CMatrix::Identity(3, 3) / 3.0), DimensionError);
}

TEST(DensityMatrixTest, SymmetrizesSmallNoise) {
    CMatrix m = CMatrix::Identity(4, 4) / 4.0;
    m(0, 1) = 1e-10;
    DensityMatrix rho({2, 2}, m);
    EXPECT_NEAR(rho.asymmetry(), 1e-10, 1e-16);
    EXPECT_EQ(rho.matrix(), rho.matrix().adjoint());
}

TEST(PureStateTest, RequiresUnitNorm) {
    EXPECT_THROW(PureState({2}, CVector::Ones(2)), ContractError);
    EXPECT_THROW(PureState::normalized({2}, CVector::Zero(2)), ContractError);
    EXPECT_NEAR(PureState::normalized({2}, CVector::Ones(2)).amplitudes().norm(), 1.0, 1e-15);
}

TEST(HsDistanceTest, Examples) {
    CMatrix a = basis(2, 0) * basis(2, 0).adjoint(), b = basis(2, 1) * basis(2, 1).adjoint();
    EXPECT_EQ(hs_distance(a, a), 0.0);
    EXPECT_NEAR(hs_distance(a, b), std::sqrt(2.0), 1e-15);
    EXPECT_THROW(hs_distance(a, CMatrix::Zero(3, 3)), DimensionError);
}

TEST(HsDistanceTest, TriangleInequality) {
    RngStream rng(1, stream_id("hs/triangle", 0));
    for (int t = 0; t < 200; ++t) {
        auto x = flat_measure_dm({3, 3}, rng), y = flat_measure_dm({3, 3}, rng), z = flat_measure_dm({3, 3}, rng);
        EXPECT_LE(hs_distance(x, z), hs_distance(x, y) + hs_distance(y, z) + 1e-10);
        EXPECT_NEAR(hs_distance(x, y), hs_distance(y, x), 1e-15);
    }
}

TEST(ParticipationRatioTest, Examples) {
    EXPECT_NEAR(participation_ratio(DensityMatrix::maximally_mixed({3, 3})), 9.0, 1e-12);
    EXPECT_NEAR(participation_ratio(DensityMatrix::from_pure(bell())), 1.0, 1e-12);
    // Tr rho^2 = p^2 + p(1-p)/2 + (1-p)^2/4 at p = 1/3 is 1/3.
    EXPECT_NEAR(participation_ratio(werner(1.0 / 3)), 3.0, 1e-12);
}

TEST(ParticipationRatioTest, StaysInRange) {
    RngStream rng(2, stream_id("pr/range", 0));
    for (int t = 0; t < 100; ++t) {
        double r = participation_ratio(flat_measure_dm({2, 3}, rng));
        EXPECT_GE(r, 1.0 - 1e-12);
        EXPECT_LE(r, 6.0 + 1e-12);
    }
}

TEST(PartialTransposeTest, BellProjector) {
    CMatrix pt = partial_transpose(bell().projector(), {2, 2});
    RVector ev = eigenvalues(pt);
    EXPECT_NEAR(ev(0), -0.5, 1e-12);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev(i), 0.5, 1e-12);
    EigenPair mp = min_eigenpair(pt);
    EXPECT_NEAR(mp.value, -0.5, 1e-12);
    EXPECT_NEAR(std::abs(mp.vector.dot(singlet())), 1.0, 1e-12);
}

TEST(PartialTransposeTest, ProductStateTransposesSecondFactor) {
    RngStream rng(3, stream_id("pt/product", 0));
    CMatrix a = flat_measure_dm({2}, rng).matrix(), b = flat_measure_dm({3}, rng).matrix();
    CMatrix pt = partial_transpose(kron(a, b), {2, 3});
    EXPECT_LT((pt - kron(a, CMatrix(b.transpose()))).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GT(min_eigenvalue(pt), -1e-12);
    CMatrix pta = partial_transpose(kron(a, b), {2, 3}, 0);
    EXPECT_LT((pta - kron(CMatrix(a.transpose()), b)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTransposeTest, InvolutionTraceAndHermiticity) {
    RngStream rng(4, stream_id("pt/involution", 0));
    for (const Dims &d : {Dims{2, 2}, Dims{3, 3}, Dims{2, 3}, Dims{2, 2, 2}}) {
        CMatrix h = flat_measure_dm(d, rng).matrix();
        for (int k = 0; k < d.count(); ++k) {
            CMatrix pt = partial_transpose(h, d, k);
            EXPECT_EQ(partial_transpose(pt, d, k), h);
            EXPECT_NEAR(std::abs(pt.trace() - h.trace()), 0.0, 1e-15);
            EXPECT_EQ(hermitian_defect(pt), 0.0);
        }
    }
    EXPECT_THROW(partial_transpose(CMatrix::Identity(4, 4), {2, 2}, 2), DimensionError);
}

// Negative spectrum of a pure-state partial transpose is {-sqrt(a_k a_l), k < l}.
TEST(PartialTransposeTest, PureStateNegativeSpectrum) {
    RngStream rng(5, stream_id("pt/spectrum", 0));
    for (const Dims &d : {Dims{2, 2}, Dims{3, 3}, Dims{2, 3}}) {
        for (int t = 0; t < 50; ++t) {
            PureState psi = haar_pure(d, rng);
            // Oracle: singular values of the amplitude matrix.
            CMatrix amp(d[0], d[1]);
            for (int i = 0; i < d[0]; ++i)
                for (int j = 0; j < d[1]; ++j) amp(i, j) = psi.amplitudes()(i * d[1] + j);
            RVector s = Eigen::JacobiSVD<CMatrix>(amp).singularValues();
            std::vector<double> expect;
            for (int k = 0; k < s.size(); ++k)
                for (int l = k + 1; l < s.size(); ++l) expect.push_back(-s(k) * s(l));
            std::sort(expect.begin(), expect.end());
            RVector ev = eigenvalues(partial_transpose(psi.projector(), d));
            std::vector<double> neg;
            for (int i = 0; i < ev.size(); ++i)
                if (ev(i) < -1e-12) neg.push_back(ev(i));
            ASSERT_EQ(neg.size(), expect.size());
            for (size_t i = 0; i < neg.size(); ++i) EXPECT_NEAR(neg[i], expect[i], 1e-9);
        }
    }
}

TEST(EigenTest, MinEigenpair) {
    EigenPair id = min_eigenpair(CMatrix::Identity(3, 3));
    EXPECT_NEAR(id.value, 1.0, 1e-15);
    EXPECT_NEAR(id.vector.norm(), 1.0, 1e-15);
    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 0.2, -0.3, 0.1;
    EigenPair p = min_eigenpair(d);
    EXPECT_NEAR(p.value, -0.3, 1e-15);
    EXPECT_NEAR(std::abs(p.vector(1)), 1.0, 1e-15);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = 1e-6;
    EXPECT_THROW(min_eigenpair(bad), ContractError);
}

TEST(EigenTest, Residual) {
    RngStream rng(6, stream_id("eig/residual", 0));
    for (int t = 0; t < 50; ++t) {
        CMatrix h = partial_transpose(flat_measure_dm({3, 3}, rng).matrix(), {3, 3});
        EigenPair p = min_eigenpair(h);
        EXPECT_LE((h * p.vector - p.value * p.vector).norm(), 1e-9);
    }
}

TEST(SchmidtTest, Examples) {
    SchmidtForm prod = schmidt_decompose(PureState({2, 2}, basis(4, 0)));
    EXPECT_NEAR(prod.coefficients(0), 1.0, 1e-15);
    EXPECT_NEAR(prod.coefficients(1), 0.0, 1e-15);
    SchmidtForm b = schmidt_decompose(bell());
    EXPECT_NEAR(b.coefficients(0), 0.5, 1e-15);
    EXPECT_NEAR(b.coefficients(1), 0.5, 1e-15);
    EXPECT_THROW(schmidt_decompose(PureState({2, 2, 2}, basis(8, 0))), UnsupportedError);
}

TEST(SchmidtTest, ReconstructsRandomStates) {
    RngStream rng(7, stream_id("schmidt/random", 0));
    for (int t = 0; t < 50; ++t) {
        PureState psi = haar_pure(Dims{3, 3}, rng);
        SchmidtForm f = schmidt_decompose(psi);
        EXPECT_NEAR(f.coefficients.sum(), 1.0, 1e-10);
        EXPECT_LE((f.left_basis.adjoint() * f.left_basis - CMatrix::Identity(3, 3)).norm(), 1e-10);
        EXPECT_LE((f.right_basis.adjoint() * f.right_basis - CMatrix::Identity(3, 3)).norm(), 1e-10);
        CVector rec = CVector::Zero(9);
        for (int i = 0; i < 3; ++i)
            rec += std::sqrt(f.coefficients(i)) * kron(CVector(f.left_basis.col(i)), CVector(f.right_basis.col(i)));
        EXPECT_NEAR(std::abs(rec.dot(psi.amplitudes())), 1.0, 1e-9);
    }
}

TEST(ConcurrenceTest, Examples) {
    EXPECT_NEAR(concurrence_pure(PureState({2, 2}, basis(4, 0))), 0.0, 1e-15);
    EXPECT_NEAR(concurrence_pure(bell()), 1.0, 1e-12);
    CVector v = CVector::Zero(4);
    v(0) = std::sqrt(0.9);
    v(3) = std::sqrt(0.1);
    EXPECT_NEAR(concurrence_pure(PureState({2, 2}, v)), 0.6, 1e-12);
    EXPECT_THROW(concurrence_pure(PureState({3, 3}, basis(9, 0))), UnsupportedError);
}

TEST(ConcurrenceTest, MatchesReducedPurity) {
    RngStream rng(8, stream_id("concurrence/purity", 0));
    for (int t = 0; t < 100; ++t) {
        PureState psi = haar_pure(Dims{2, 2}, rng);
        const CVector &a = psi.amplitudes();
        CMatrix m(2, 2);
        m << a(0), a(1), a(2), a(3);
        CMatrix ra = m * m.adjoint();
        double tr2 = (ra * ra).trace().real();
        EXPECT_NEAR(concurrence_pure(psi), std::sqrt(2 * (1 - tr2)), 1e-9);
    }
}

TEST(FidelityTest, Examples) {
    EXPECT_NEAR(fidelity_with_pure(DensityMatrix::from_pure(bell()), bell()), 1.0, 1e-15);
    RngStream rng(10, stream_id("fidelity", 0));
    EXPECT_NEAR(fidelity_with_pure(DensityMatrix::maximally_mixed({2, 2}), haar_pure(Dims{2, 2}, rng)), 0.25, 1e-15);
    CVector m = CVector::Zero(4);
    m(0) = 1 / std::sqrt(2.0);
    m(3) = -1 / std::sqrt(2.0);
    EXPECT_NEAR(fidelity_with_pure(DensityMatrix::from_pure(PureState({2, 2}, m)), bell()), 0.0, 1e-15);
}

TEST(CompressTest, Examples) {
    RngStream rng(9, stream_id("compress", 0));
    DensityMatrix rho = flat_measure_dm({3, 3}, rng);
    Compression same = compress(rho, CMatrix::Identity(9, 9), {3, 3});
    EXPECT_LT(hs_distance(same.state, rho), 1e-14);
    EXPECT_NEAR(same.trace_before, 1.0, 1e-14);

    CMatrix p = CMatrix::Zero(3, 2);
    p(0, 0) = p(1, 1) = 1;
    Compression c = compress(DensityMatrix::maximally_mixed({3, 3}), local_isometry({3, 3}, 0, p), {2, 3});
    EXPECT_LT(hs_distance(c.state.matrix(), CMatrix::Identity(6, 6) / 6.0), 1e-14);
    EXPECT_NEAR(c.trace_before, 6.0 / 9.0, 1e-14);

    DensityMatrix prod = DensityMatrix::from_pure(PureState({3, 3}, kron(basis(3, 2), basis(3, 0))));
    EXPECT_THROW(compress(prod, local_isometry({3, 3}, 0, p), {2, 3}), DegenerateProjectionError);

    CMatrix notiso = CMatrix::Ones(9, 2);
    EXPECT_THROW(compress(rho, notiso, {2}), ContractError);
}
