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

#ifndef SEPSCOPE_HERMITIAN_H
#define SEPSCOPE_HERMITIAN_H

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sepscope {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Local dimensions of a composite system, first subsystem most significant
/// in the flattened index.
class Dims {
  public:
    Dims() = default;
    Dims(std::initializer_list<int> d);
    explicit Dims(std::vector<int> d);

    /// Parses "3x3", "2x2x2".
    static Dims parse(std::string_view text);

    int total() const { return total_; }
    int count() const { return static_cast<int>(dims_.size()); }
    int operator[](int k) const { return dims_[static_cast<size_t>(k)]; }
    const std::vector<int> &values() const { return dims_; }
    std::string str() const;

    bool operator==(const Dims &o) const { return dims_ == o.dims_; }

  private:
    std::vector<int> dims_;
    int total_ = 0;
};

class PureState {
  public:
    PureState() = default;
    /// Normalizes `amplitudes`; throws if the norm is zero.
    static PureState normalized(Dims dims, CVector amplitudes);
    /// Requires unit norm within 1e-12.
    PureState(Dims dims, CVector amplitudes);

    const Dims &dims() const { return dims_; }
    const CVector &amplitudes() const { return amp_; }
    CMatrix projector() const { return amp_ * amp_.adjoint(); }

  private:
    Dims dims_;
    CVector amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over `dims`.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    /// Symmetrizes the input and validates all invariants.
    DensityMatrix(Dims dims, const CMatrix &entries);
    /// Divides by the trace before validating.
    static DensityMatrix from_unnormalized(Dims dims, const CMatrix &entries);
    static DensityMatrix maximally_mixed(Dims dims);
    static DensityMatrix from_pure(const PureState &psi);

    const Dims &dims() const { return dims_; }
    const CMatrix &matrix() const { return m_; }
    int size() const { return dims_.total(); }
    /// Max |H - H^dagger| entry seen before symmetrization.
    double asymmetry() const { return asymmetry_; }

  private:
    Dims dims_;
    CMatrix m_;
    double asymmetry_ = 0;
};

struct SchmidtForm {
    RVector coefficients;  // squared Schmidt coefficients, descending
    CMatrix left_basis;    // columns |b_i>
    CMatrix right_basis;   // columns |c_i>
};

struct EigenPair {
    double value;
    CVector vector;
};

// Tolerances shared by the validating constructors.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kHermitianRejectTol = 1e-8;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

double hs_distance(const CMatrix &a, const CMatrix &b);
double hs_distance(const DensityMatrix &a, const DensityMatrix &b);

double purity(const DensityMatrix &rho);
double participation_ratio(const DensityMatrix &rho);

/// Transposes the indices of one subsystem. Default: the last one.
CMatrix partial_transpose(const CMatrix &h, const Dims &dims, int subsystem);
CMatrix partial_transpose(const CMatrix &h, const Dims &dims);

/// Ascending eigenvalues of a Hermitian matrix.
RVector eigenvalues(const CMatrix &h);
EigenPair min_eigenpair(const CMatrix &h);
double min_eigenvalue(const CMatrix &h);

SchmidtForm schmidt_decompose(const PureState &psi);
double concurrence_pure(const PureState &psi);
double fidelity_with_pure(const DensityMatrix &rho, const PureState &phi);

struct Compression {
    DensityMatrix state;
    double trace_before = 0;
};

/// V^dagger rho V renormalized. `out_dims` describes the image space.
Compression compress(const DensityMatrix &rho, const CMatrix &isometry,
                     const Dims &out_dims);

/// Embeds `local` (d_k x r, orthonormal columns) on subsystem k, identity
/// elsewhere.
CMatrix local_isometry(const Dims &dims, int subsystem, const CMatrix &local);

CMatrix kron(const CMatrix &a, const CMatrix &b);
CVector kron(const CVector &a, const CVector &b);

/// Max entrywise |H - H^dagger|.
double hermitian_defect(const CMatrix &h);

}  // namespace sepscope

#endif
