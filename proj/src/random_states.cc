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

#include "sepscope/random_states.h"

#include <Eigen/QR>

#include "sepscope/error.h"

namespace sepscope {

MeasureSpec MeasureSpec::parse(std::string_view text) {
    MeasureSpec s;
    if (text == "flat") return s;
    constexpr std::string_view prefix = "induced:";
    if (text.substr(0, prefix.size()) != prefix)
        throw ContractError("measure spec: expected 'flat' or 'induced:K[:projected]'");
    std::string_view rest = text.substr(prefix.size());
    std::string_view kpart = rest;
    auto colon = rest.find(':');
    if (colon != std::string_view::npos) {
        kpart = rest.substr(0, colon);
        if (rest.substr(colon + 1) != "projected")
            throw ContractError("measure spec: unknown suffix in '" + std::string(text) + "'");
        s.projected = true;
    }
    if (kpart.empty() || kpart.find_first_not_of("0123456789") != std::string_view::npos)
        throw ContractError("measure spec: bad ancilla dimension in '" + std::string(text) + "'");
    s.kind = Kind::Induced;
    s.ancilla_dim = std::stoi(std::string(kpart));
    if (s.ancilla_dim < 1) throw ContractError("measure spec: ancilla dimension must be >= 1");
    return s;
}

std::string MeasureSpec::str() const {
    if (kind == Kind::Flat) return "flat";
    return "induced:" + std::to_string(ancilla_dim) + (projected ? ":projected" : "");
}

CVector ProductState::amplitudes() const {
    CVector out = factors.front();
    for (size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
    return out;
}

namespace {

CMatrix ginibre(int rows, int cols, RngStream &rng) {
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
    return g;
}

}  // namespace

CVector haar_vector(int n, RngStream &rng) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

PureState haar_pure(int n, RngStream &rng) {
    if (n < 2) throw ContractError("haar_pure: n must be >= 2");
    return PureState(Dims{n}, haar_vector(n, rng));
}

PureState haar_pure(const Dims &dims, RngStream &rng) {
    return PureState(dims, haar_vector(dims.total(), rng));
}

CMatrix haar_unitary(int n, RngStream &rng) {
    if (n < 1) throw ContractError("haar_unitary: n must be >= 1");
    CMatrix z = ginibre(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0 ? d / a : cplx(1.0));
    }
    return q;
}

RVector simplex_uniform(int n, RngStream &rng) {
    if (n < 1) throw ContractError("simplex_uniform: n must be >= 1");
    RVector p(n);
    for (int i = 0; i < n; ++i) p(i) = rng.exponential();
    return p / p.sum();
}

DensityMatrix flat_measure_dm(const Dims &dims, RngStream &rng, RVector *spectrum) {
    int n = dims.total();
    RVector p = simplex_uniform(n, rng);
    CMatrix u = haar_unitary(n, rng);
    CMatrix m = u * p.cast<cplx>().asDiagonal() * u.adjoint();
    if (spectrum) *spectrum = p;
    return DensityMatrix::from_unnormalized(dims, m);
}

DensityMatrix induced_dm(const Dims &dims, const MeasureSpec &spec, RngStream &rng) {
    if (spec.kind != MeasureSpec::Kind::Induced || spec.ancilla_dim < 1)
        throw ContractError("induced_dm: needs an induced measure spec with K >= 1");
    int n = dims.total();
    int k = spec.ancilla_dim;
    CMatrix w = ginibre(n, k, rng);
    if (spec.projected) w = w * ginibre(k, n, rng);
    return DensityMatrix::from_unnormalized(dims, w * w.adjoint());
}

DensityMatrix sample_dm(const Dims &dims, const MeasureSpec &spec, RngStream &rng) {
    if (spec.kind == MeasureSpec::Kind::Flat) return flat_measure_dm(dims, rng);
    return induced_dm(dims, spec, rng);
}

ProductState product_pure(const Dims &dims, RngStream &rng) {
    ProductState p{dims, {}};
    p.factors.reserve(static_cast<size_t>(dims.count()));
    for (int k = 0; k < dims.count(); ++k) p.factors.push_back(haar_vector(dims[k], rng));
    return p;
}

CVector perturb_vector(const CVector &v, double eta, RngStream &rng) {
    if (!(eta > 0 && eta <= 1)) throw ContractError("perturb_pure: eta must lie in (0, 1]");
    CVector g(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) g(i) = rng.complex_normal();
    CVector out = v + (eta / g.norm()) * g;
    return out / out.norm();
}

PureState perturb_pure(const PureState &psi, double eta, RngStream &rng) {
    return PureState(psi.dims(), perturb_vector(psi.amplitudes(), eta, rng));
}

ProductState perturb_pure(const ProductState &psi, double eta, RngStream &rng) {
    ProductState out{psi.dims, {}};
    out.factors.reserve(psi.factors.size());
    for (const auto &f : psi.factors) out.factors.push_back(perturb_vector(f, eta, rng));
    return out;
}

}  // namespace sepscope
