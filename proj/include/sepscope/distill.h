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

#ifndef SEPSCOPE_DISTILL_H
#define SEPSCOPE_DISTILL_H

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sepscope/bsa.h"
#include "sepscope/hermitian.h"
#include "sepscope/kernels.h"
#include "sepscope/rng.h"

namespace sepscope {

enum class ProjectorMode { Angles, Haar };
enum class Side { A, B };
enum class SidePolicy { A, B, Both };

std::string to_string(ProjectorMode m);
std::string to_string(Side s);
std::string to_string(SidePolicy s);
ProjectorMode parse_projector_mode(std::string_view s);
SidePolicy parse_side_policy(std::string_view s);

/// a0 from (xi, theta, phi12, phi13); a1 = cos(chi/2) u + e^{i omega} sin(chi/2) v
/// with (u, v) a fixed orthonormal basis of the complement of a0.
struct ProjectorAngles {
    double xi, theta, phi12, phi13, chi, omega;
};

/// Rank-2 qutrit projector |a0><a0| + |a1><a1| applied on one side.
struct ProjectorSample {
    CVector a0, a1;
    std::optional<ProjectorAngles> angles;
    Side side = Side::A;

    /// 3 x 2 matrix [a0 a1].
    CMatrix local() const;
    /// 9 x 6 isometry on the chosen side of a two-qutrit space.
    CMatrix isometry() const;
    Dims out_dims() const { return side == Side::A ? Dims{2, 3} : Dims{3, 2}; }
};

/// sin(xi/2)cos(theta/2)|1> + e^{i phi12} sin(xi/2)sin(theta/2)|2> + e^{i phi13} cos(xi/2)|3>.
PureState klimov_state(double xi, double theta, double phi12, double phi13);

/// Angles (xi, theta, phi12, phi13) of a qutrit vector, global phase
/// fixed by making the first amplitude real.
std::array<double, 4> klimov_angles(const CVector &v);

/// Orthonormal basis (u, v) of the complement of klimov_state(xi, theta, phi12, phi13).
std::pair<CVector, CVector> klimov_complement(double xi, double theta, double phi12, double phi13);

ProjectorSample sample_projector(RngStream &rng, ProjectorMode mode, Side side);

struct DistillConfig {
    long n_proj = 50000;
    ProjectorMode mode = ProjectorMode::Angles;
    SidePolicy side = SidePolicy::A;
    double neg_tol = 1e-10;
    long block = 4096;  // trials drawn and tested per batch
    Exec exec = Exec::Parallel;
};

enum class DistillTag { Distillable, Pocu };
std::string to_string(DistillTag t);

struct DistillVerdict {
    DistillTag tag = DistillTag::Pocu;
    std::optional<ProjectorSample> witness;
    /// Min eigenvalue of the witness projection, recomputed on the slow path.
    double witness_min_eig = 0;
    long trials_used = 0;
    long degenerate_trials = 0;
};

/// Random local 2-dim projections of a two-qutrit state, looking for an NPT
/// 2x3 image. Trial i draws from rng.substream(i), so verdicts do not
/// depend on thread count or on n_proj beyond the first witness.
DistillVerdict one_copy_distillable(const DensityMatrix &rho, const DistillConfig &cfg, RngStream &rng);

/// Independent replay: compress, partial transpose, eigen-solve.
double verify_witness(const DensityMatrix &rho, const ProjectorSample &p);

/// n_proj samples, trial i from rng.substream(i), sides per cfg.side.
std::vector<ProjectorSample> draw_projector_set(const DistillConfig &cfg, RngStream &rng);

/// V^dagger X V for each sample, X being the partial transpose of `h`
/// on the side opposite to the projection.
std::vector<CMatrix> compressed_transposes(const CMatrix &h, const std::vector<ProjectorSample> &set,
                                           Exec exec);

struct EprFidelities {
    double f_epr = 0;        // with (|00> + |11>)/sqrt2
    double f_epr_minus = 0;  // with (|01> - |10>)/sqrt2
    double f_ent = 0;        // with the top eigenvector of rho_ent
    double c_ent = 0;        // its concurrence
};

/// Two-qubit only. Requires an entangled BSA.
EprFidelities epr_fidelities(const DensityMatrix &rho, const BsaResult &bsa);
PureState epr_state();
PureState epr_minus_state();

}  // namespace sepscope

#endif
