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

#ifndef SEPSCOPE_FAMILY_H
#define SEPSCOPE_FAMILY_H

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sepscope/bsa.h"
#include "sepscope/distill.h"

namespace sepscope {

/// (1 - beta) rho_sep + beta rho_ent for beta in [0, 1].
DensityMatrix family_member(const BsaResult &bsa, double beta);

enum class FamilyKind { PptBoundary, PocuBoundary };
std::string to_string(FamilyKind k);

struct FamilyResult {
    FamilyKind kind = FamilyKind::PptBoundary;
    double beta_critical = 0;
    DensityMatrix boundary_state;  // family_member(bsa, beta_critical)
    double depth = 0;              // hs distance of boundary_state from rho_sep
    double bracket_lo = 0;         // final bisection bracket
    double bracket_hi = 0;
    bool crossing = true;
    /// Min PT eigenvalue (PPT kind) or 1/0 for distillable (POCU kind) at
    /// the ends of the initial bracket.
    double g_lo = 0;
    double g_hi = 0;
    std::vector<std::string> flags;
    /// Every (beta, value) evaluated, bisection and sweep alike.
    std::vector<std::pair<double, double>> trace;
    long n_proj = 0;  // projector set size for the POCU kind

    bool flagged(const std::string &f) const;
};

/// Bisects the min eigenvalue of f(beta)^T. NPT seeds search [0, B], PPT
/// seeds [B, 1]. Always returns the PPT end of the final bracket.
FamilyResult critical_beta_ppt(const BsaResult &bsa, double tol_beta = 1e-6);

struct ProbeBound {
    CVector probe;
    double epsilon = 0;  // <phi|rho_sep^T|phi>
    double gamma = 0;    // -<phi|rho_ent^T|phi>
    std::optional<double> b_star;
};

ProbeBound probe_bound(const BsaResult &bsa, const CVector &phi);

/// Two-qutrit only. One projector set is drawn up front and reused at every
/// beta, so the predicate is a deterministic function of beta. Returns the
/// POCU end of the final bracket; B itself when the state is already POCU.
FamilyResult critical_beta_pocu(const BsaResult &bsa, const DistillConfig &cfg, double tol_beta,
                                RngStream &rng);

}  // namespace sepscope

#endif
