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

#ifndef SEPSCOPE_CLASSIFIER_H
#define SEPSCOPE_CLASSIFIER_H

#include <optional>
#include <string>
#include <vector>

#include "sepscope/bsa.h"
#include "sepscope/hermitian.h"

namespace sepscope {

/// PPT decisions on exact spectra. T0 is only for BSA components.
inline constexpr double kPptTol = 1e-10;

struct PptReport {
    bool is_ppt = true;
    double min_eig = 0;
    /// Min eigenvalue under the transpose of each subsystem. Bipartite
    /// inputs report one cut (both transposes share a spectrum).
    std::vector<double> per_cut;
};

/// Multipartite inputs are PPT only if positive under every
/// single-subsystem transpose.
PptReport ppt_check(const DensityMatrix &rho, double ppt_tol = kPptTol);

enum class StateTag { Separable, NPT, BoundEntangled };
std::string to_string(StateTag t);

struct StateClass {
    StateTag tag = StateTag::Separable;
    double ppt_min_eig = 0;
    std::optional<double> bsa_B;
    std::optional<BsaResult> bsa;  // present whenever BSA ran
};

/// NPT without BSA; PPT states go through BSA and split on B vs its
/// error estimate.
StateClass classify(const DensityMatrix &rho, const BsaParams &params, RngStream &rng);

struct SeedReport {
    bool lemma1 = false;
    bool lemma2 = false;
    double min_eig_sep_pt = 0;
    int null_space_dim = 0;
    /// Min eigenvalue of rho_ent^T compressed to the (T0-)null space of rho_sep^T.
    std::optional<double> compression_min_eig;
    /// <phi0|rho_ent^T|phi0> for the lowest eigenvector phi0 of rho_sep^T.
    double overlap_phi0 = 0;

    bool seed() const { return lemma1 || lemma2; }
};

/// Requires an entangled BSA (rho_ent present). Uses bsa.t0 as threshold.
SeedReport detect_seed(const BsaResult &bsa);

}  // namespace sepscope

#endif
