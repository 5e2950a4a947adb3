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

#include "sepscope/family.h"

#include <algorithm>
#include <cmath>

#include "sepscope/classifier.h"
#include "sepscope/error.h"
#include "sepscope/kernels.h"

namespace sepscope {

namespace {

constexpr int kSweepPoints = 20;

const DensityMatrix &entangled_part(const BsaResult &bsa, const char *who) {
    if (!bsa.rho_ent) throw ContractError(std::string(who) + ": BSA has no entangled component");
    return *bsa.rho_ent;
}

void finish(FamilyResult &r, const BsaResult &bsa) {
    r.boundary_state = family_member(bsa, r.beta_critical);
    r.depth = hs_distance(r.boundary_state, bsa.rho_sep);
}

}  // namespace

std::string to_string(FamilyKind k) { return k == FamilyKind::PptBoundary ? "ppt" : "pocu"; }

bool FamilyResult::flagged(const std::string &f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

DensityMatrix family_member(const BsaResult &bsa, double beta) {
    if (!(beta >= 0 && beta <= 1)) throw ContractError("family_member: beta outside [0, 1]");
    const DensityMatrix &ent = entangled_part(bsa, "family_member");
    if (beta == 0) return bsa.rho_sep;
    if (beta == 1) return ent;
    return DensityMatrix(bsa.dims, (1 - beta) * bsa.rho_sep.matrix() + beta * ent.matrix());
}

FamilyResult critical_beta_ppt(const BsaResult &bsa, double tol_beta) {
    if (!(tol_beta > 0)) throw ContractError("critical_beta_ppt: tolerance must be positive");
    const DensityMatrix &ent = entangled_part(bsa, "critical_beta_ppt");
    FamilyResult r;
    r.kind = FamilyKind::PptBoundary;
    const CMatrix s = partial_transpose(bsa.rho_sep.matrix(), bsa.dims);
    const CMatrix e = partial_transpose(ent.matrix(), bsa.dims);
    auto g = [&](double b) {
        double v = min_eigenvalue((1 - b) * s + b * e);
        r.trace.emplace_back(b, v);
        return v;
    };
    auto ppt = [](double v) { return v >= -kPptTol; };

    double lo, hi;
    const double gb = g(bsa.B);
    if (!ppt(gb)) {
        lo = 0;
        hi = bsa.B;
        r.g_lo = g(0);
        r.g_hi = gb;
        r.crossing = ppt(r.g_lo);
    } else {
        lo = bsa.B;
        hi = 1;
        r.g_lo = gb;
        r.g_hi = g(1);
        if (ppt(r.g_hi)) {
            r.flags.push_back("ppt_at_one");
            lo = 1;
        }
    }
    const double a = lo, b = hi;
    if (!r.crossing) {
        r.flags.push_back("no_crossing");
    } else {
        while (hi - lo > tol_beta) {
            double mid = 0.5 * (lo + hi);
            (ppt(g(mid)) ? lo : hi) = mid;
        }
    }
    r.beta_critical = lo;
    r.bracket_lo = lo;
    r.bracket_hi = hi;

    if (r.crossing && b > a) {
        for (int i = 0; i < kSweepPoints; ++i) {
            double beta = a + (i + 0.5) * (b - a) / kSweepPoints;
            if (std::abs(beta - r.beta_critical) <= tol_beta) continue;
            if (ppt(g(beta)) != (beta < r.beta_critical)) {
                r.flags.push_back("sweep_violation");
                break;
            }
        }
    }
    finish(r, bsa);
    return r;
}

ProbeBound probe_bound(const BsaResult &bsa, const CVector &phi) {
    const DensityMatrix &ent = entangled_part(bsa, "probe_bound");
    if (phi.size() != bsa.dims.total()) throw DimensionError("probe_bound: probe size does not match dims");
    if (std::abs(phi.norm() - 1) > 1e-10) throw ContractError("probe_bound: probe is not a unit vector");
    ProbeBound p;
    p.probe = phi;
    p.epsilon = phi.dot(partial_transpose(bsa.rho_sep.matrix(), bsa.dims) * phi).real();
    p.gamma = -phi.dot(partial_transpose(ent.matrix(), bsa.dims) * phi).real();
    if (p.gamma > 0) p.b_star = std::clamp(p.epsilon / (p.epsilon + p.gamma), 0.0, 1.0);
    return p;
}

FamilyResult critical_beta_pocu(const BsaResult &bsa, const DistillConfig &cfg, double tol_beta,
                                RngStream &rng) {
    if (!(tol_beta > 0)) throw ContractError("critical_beta_pocu: tolerance must be positive");
    const DensityMatrix &ent = entangled_part(bsa, "critical_beta_pocu");
    if (!(bsa.dims == Dims{3, 3})) throw DimensionError("critical_beta_pocu: needs a 3x3 state");
    FamilyResult r;
    r.kind = FamilyKind::PocuBoundary;
    r.n_proj = cfg.n_proj;

    const std::vector<ProjectorSample> set = draw_projector_set(cfg, rng);
    const std::vector<CMatrix> s = compressed_transposes(bsa.rho_sep.matrix(), set, cfg.exec);
    const std::vector<CMatrix> e = compressed_transposes(ent.matrix(), set, cfg.exec);
    auto distillable = [&](double b) {
        bool hit = kernels::first_negative_block(cfg.exec, s, e, b, cfg.neg_tol) >= 0;
        r.trace.emplace_back(b, hit ? 1.0 : 0.0);
        return hit;
    };

    double lo = 0, hi = bsa.B;
    r.g_hi = distillable(hi) ? 1 : 0;
    if (r.g_hi == 0) {
        r.flags.push_back("pocu_at_B");
        lo = hi;
    } else {
        r.g_lo = distillable(0) ? 1 : 0;
        if (r.g_lo == 1) {
            r.crossing = false;
            r.flags.push_back("no_crossing");
        } else {
            while (hi - lo > tol_beta) {
                double mid = 0.5 * (lo + hi);
                (distillable(mid) ? hi : lo) = mid;
            }
        }
    }
    r.beta_critical = lo;
    r.bracket_lo = lo;
    r.bracket_hi = hi;

    // The bisection itself cannot see a second crossing; a coarse sweep can.
    if (r.crossing && bsa.B > 0 && r.g_hi == 1) {
        for (int i = 0; i < kSweepPoints; ++i) {
            double beta = (i + 0.5) * bsa.B / kSweepPoints;
            if (std::abs(beta - r.beta_critical) <= tol_beta) continue;
            distillable(beta);
        }
    }
    auto sorted = r.trace;
    std::sort(sorted.begin(), sorted.end());
    bool seen = false;
    for (const auto &[beta, hit] : sorted) {
        if (hit == 1) seen = true;
        else if (seen) {
            r.flags.push_back("non_monotone");
            break;
        }
    }
    finish(r, bsa);
    return r;
}

}  // namespace sepscope
