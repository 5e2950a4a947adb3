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

#include "sepscope/classifier.h"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "sepscope/error.h"

namespace sepscope {

PptReport ppt_check(const DensityMatrix &rho, double ppt_tol) {
    const Dims &dims = rho.dims();
    PptReport r;
    if (dims.count() < 2) throw DimensionError("ppt_check: needs at least two subsystems");
    const int cuts = dims.count() == 2 ? 1 : dims.count();
    for (int k = 0; k < cuts; ++k) {
        int sub = dims.count() == 2 ? 1 : k;
        r.per_cut.push_back(min_eigenvalue(partial_transpose(rho.matrix(), dims, sub)));
    }
    r.min_eig = *std::min_element(r.per_cut.begin(), r.per_cut.end());
    r.is_ppt = r.min_eig >= -ppt_tol;
    return r;
}

std::string to_string(StateTag t) {
    switch (t) {
    case StateTag::Separable: return "Separable";
    case StateTag::NPT: return "NPT";
    case StateTag::BoundEntangled: return "BoundEntangled";
    }
    return "?";
}

StateClass classify(const DensityMatrix &rho, const BsaParams &params, RngStream &rng) {
    StateClass c;
    PptReport ppt = ppt_check(rho);
    c.ppt_min_eig = ppt.min_eig;
    if (!ppt.is_ppt) {
        c.tag = StateTag::NPT;
        return c;
    }
    BsaResult r = best_separable_approximation(rho, params, rng);
    c.bsa_B = r.B;
    c.tag = r.B > r.delta_B_estimate ? StateTag::BoundEntangled : StateTag::Separable;
    c.bsa = std::move(r);
    return c;
}

SeedReport detect_seed(const BsaResult &bsa) {
    if (!bsa.rho_ent) throw ContractError("detect_seed: BSA has no entangled component");
    const Dims &dims = bsa.dims;
    SeedReport s;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(bsa.rho_sep.matrix(), dims));
    const RVector &ev = es.eigenvalues();
    CMatrix ent_pt = partial_transpose(bsa.rho_ent->matrix(), dims);
    s.min_eig_sep_pt = ev(0);
    CVector phi0 = es.eigenvectors().col(0);
    s.overlap_phi0 = phi0.dot(ent_pt * phi0).real();
    s.lemma1 = ev(0) > bsa.t0;
    if (s.lemma1) return s;

    int k = 0;
    while (k < ev.size() && ev(k) <= bsa.t0) ++k;
    s.null_space_dim = k;
    CMatrix v = es.eigenvectors().leftCols(k);
    CMatrix comp = v.adjoint() * ent_pt * v;
    comp = (0.5 * (comp + comp.adjoint())).eval();
    s.compression_min_eig = min_eigenvalue(comp);
    s.lemma2 = *s.compression_min_eig > 0;
    return s;
}

}  // namespace sepscope
