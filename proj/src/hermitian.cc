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

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sepscope/error.h"

namespace sepscope {

Dims::Dims(std::initializer_list<int> d) : Dims(std::vector<int>(d)) {}

Dims::Dims(std::vector<int> d) : dims_(std::move(d)) {
    if (dims_.empty()) throw DimensionError("Dims: need at least one subsystem");
    total_ = 1;
    for (int k : dims_) {
        if (k < 2) throw DimensionError("Dims: every subsystem needs dimension >= 2");
        total_ *= k;
    }
}

Dims Dims::parse(std::string_view text) {
    std::vector<int> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw DimensionError("Dims: malformed '" + std::string(text) + "'");
        out.push_back(std::stoi(cur));
        cur.clear();
    };
    for (char ch : text) {
        if (ch == 'x' || ch == 'X' || ch == ',') {
            flush();
        } else if (ch >= '0' && ch <= '9') {
            cur.push_back(ch);
        } else {
            throw DimensionError("Dims: malformed '" + std::string(text) + "'");
        }
    }
    flush();
    return Dims(std::move(out));
}

std::string Dims::str() const {
    std::ostringstream os;
    for (size_t k = 0; k < dims_.size(); ++k) os << (k ? "x" : "") << dims_[k];
    return os.str();
}

PureState PureState::normalized(Dims dims, CVector amplitudes) {
    double n = amplitudes.norm();
    if (!(n > 0)) throw ContractError("PureState: zero vector");
    amplitudes /= n;
    return PureState(std::move(dims), std::move(amplitudes));
}

PureState::PureState(Dims dims, CVector amplitudes)
    : dims_(std::move(dims)), amp_(std::move(amplitudes)) {
    if (amp_.size() != dims_.total()) throw DimensionError("PureState: length does not match dims");
    if (std::abs(amp_.norm() - 1.0) > kHermitianTol)
        throw ContractError("PureState: amplitudes not normalized");
}

double hermitian_defect(const CMatrix &h) {
    if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(Dims dims, const CMatrix &entries) : dims_(std::move(dims)) {
    int n = dims_.total();
    if (entries.rows() != n || entries.cols() != n)
        throw DimensionError("DensityMatrix: shape does not match dims");
    asymmetry_ = hermitian_defect(entries);
    if (asymmetry_ > kHermitianRejectTol) throw ContractError("DensityMatrix: not Hermitian");
    m_ = 0.5 * (entries + entries.adjoint());
    if (std::abs(m_.trace().real() - 1.0) > kTraceTol)
        throw ContractError("DensityMatrix: trace differs from one");
    if (min_eigenvalue(m_) < -kPsdTol) throw ContractError("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::from_unnormalized(Dims dims, const CMatrix &entries) {
    double tr = entries.trace().real();
    if (!(tr > 0)) throw ContractError("DensityMatrix: non-positive trace");
    return DensityMatrix(std::move(dims), entries / tr);
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
    int n = dims.total();
    return DensityMatrix(std::move(dims), CMatrix::Identity(n, n) / double(n));
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    return DensityMatrix(psi.dims(), psi.projector());
}

double hs_distance(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("hs_distance: shape mismatch");
    // Tr[(a-b)^2] for Hermitian a-b is the squared Frobenius norm.
    return (a - b).norm();
}

double hs_distance(const DensityMatrix &a, const DensityMatrix &b) {
    return hs_distance(a.matrix(), b.matrix());
}

double purity(const DensityMatrix &rho) { return rho.matrix().squaredNorm(); }

double participation_ratio(const DensityMatrix &rho) { return 1.0 / purity(rho); }

CMatrix partial_transpose(const CMatrix &h, const Dims &dims, int subsystem) {
    int n = dims.total();
    if (h.rows() != n || h.cols() != n) throw DimensionError("partial_transpose: shape mismatch");
    if (subsystem < 0 || subsystem >= dims.count())
        throw DimensionError("partial_transpose: bad subsystem index");
    int stride = 1;
    for (int k = dims.count() - 1; k > subsystem; --k) stride *= dims[k];
    int d = dims[subsystem];
    CMatrix out(n, n);
    for (int j = 0; j < n; ++j) {
        int dj = (j / stride) % d;
        for (int i = 0; i < n; ++i) {
            int di = (i / stride) % d;
            int i2 = i + (dj - di) * stride;
            int j2 = j + (di - dj) * stride;
            out(i2, j2) = h(i, j);
        }
    }
    return out;
}

CMatrix partial_transpose(const CMatrix &h, const Dims &dims) {
    return partial_transpose(h, dims, dims.count() - 1);
}

namespace {

void require_hermitian(const CMatrix &h, const char *who) {
    if (h.rows() != h.cols()) throw DimensionError(std::string(who) + ": not square");
    if (hermitian_defect(h) > 1e-10) throw ContractError(std::string(who) + ": not Hermitian");
}

}  // namespace

RVector eigenvalues(const CMatrix &h) {
    require_hermitian(h, "eigenvalues");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

EigenPair min_eigenpair(const CMatrix &h) {
    require_hermitian(h, "min_eigenpair");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

double min_eigenvalue(const CMatrix &h) { return eigenvalues(h)(0); }

SchmidtForm schmidt_decompose(const PureState &psi) {
    const Dims &d = psi.dims();
    if (d.count() != 2) throw UnsupportedError("schmidt_decompose: needs a bipartite state");
    int da = d[0], db = d[1];
    CMatrix amp(da, db);
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b) amp(a, b) = psi.amplitudes()(a * db + b);
    Eigen::JacobiSVD<CMatrix> svd(amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtForm f;
    f.coefficients = svd.singularValues().array().square();
    f.left_basis = svd.matrixU();
    // psi = sum_i s_i u_i (x) conj(v_i)
    f.right_basis = svd.matrixV().conjugate();
    return f;
}

double concurrence_pure(const PureState &psi) {
    if (!(psi.dims() == Dims{2, 2})) throw UnsupportedError("concurrence_pure: needs two qubits");
    RVector a = schmidt_decompose(psi).coefficients;
    return 2.0 * std::sqrt(std::max(0.0, a(0) * a(1)));
}

double fidelity_with_pure(const DensityMatrix &rho, const PureState &phi) {
    if (rho.size() != phi.amplitudes().size())
        throw DimensionError("fidelity_with_pure: dimension mismatch");
    const CVector &v = phi.amplitudes();
    return v.dot(rho.matrix() * v).real();
}

Compression compress(const DensityMatrix &rho, const CMatrix &isometry, const Dims &out_dims) {
    if (isometry.rows() != rho.size() || isometry.cols() != out_dims.total())
        throw DimensionError("compress: isometry shape does not match");
    CMatrix gram = isometry.adjoint() * isometry;
    if ((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw ContractError("compress: isometry columns are not orthonormal");
    CMatrix m = isometry.adjoint() * rho.matrix() * isometry;
    double tr = m.trace().real();
    if (tr < 1e-14) throw DegenerateProjectionError("compress: projection has zero trace");
    return {DensityMatrix(out_dims, m / tr), tr};
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

CMatrix local_isometry(const Dims &dims, int subsystem, const CMatrix &local) {
    if (subsystem < 0 || subsystem >= dims.count())
        throw DimensionError("local_isometry: bad subsystem index");
    if (local.rows() != dims[subsystem]) throw DimensionError("local_isometry: row count mismatch");
    CMatrix out = CMatrix::Identity(1, 1);
    for (int k = 0; k < dims.count(); ++k)
        out = kron(out, k == subsystem ? local : CMatrix(CMatrix::Identity(dims[k], dims[k])));
    return out;
}

}  // namespace sepscope
