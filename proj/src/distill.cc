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

#include "sepscope/distill.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sepscope/error.h"
#include "sepscope/random_states.h"

namespace sepscope {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateTrace = 1e-14;
constexpr long kMaxDegenerateDraws = 1000;

Side side_for(SidePolicy p, long trial) {
    switch (p) {
    case SidePolicy::A: return Side::A;
    case SidePolicy::B: return Side::B;
    case SidePolicy::Both: return trial % 2 == 0 ? Side::A : Side::B;
    }
    return Side::A;
}

void require_two_qutrits(const Dims &d, const char *who) {
    if (!(d == Dims{3, 3})) throw DimensionError(std::string(who) + ": needs a 3x3 state");
}

}  // namespace

std::string to_string(ProjectorMode m) { return m == ProjectorMode::Angles ? "angles" : "haar"; }
std::string to_string(Side s) { return s == Side::A ? "A" : "B"; }
std::string to_string(SidePolicy s) {
    switch (s) {
    case SidePolicy::A: return "A";
    case SidePolicy::B: return "B";
    case SidePolicy::Both: return "both";
    }
    return "?";
}
std::string to_string(DistillTag t) { return t == DistillTag::Distillable ? "Distillable" : "Pocu"; }

ProjectorMode parse_projector_mode(std::string_view s) {
    if (s == "angles") return ProjectorMode::Angles;
    if (s == "haar") return ProjectorMode::Haar;
    throw ContractError("unknown projector mode '" + std::string(s) + "'");
}

SidePolicy parse_side_policy(std::string_view s) {
    if (s == "A" || s == "a") return SidePolicy::A;
    if (s == "B" || s == "b") return SidePolicy::B;
    if (s == "both") return SidePolicy::Both;
    throw ContractError("unknown side policy '" + std::string(s) + "'");
}

CMatrix ProjectorSample::local() const {
    CMatrix w(3, 2);
    w.col(0) = a0;
    w.col(1) = a1;
    return w;
}

CMatrix ProjectorSample::isometry() const {
    return side == Side::A ? kron(local(), CMatrix::Identity(3, 3)) : kron(CMatrix::Identity(3, 3), local());
}

PureState klimov_state(double xi, double theta, double phi12, double phi13) {
    CVector v(3);
    v(0) = std::sin(xi / 2) * std::cos(theta / 2);
    v(1) = std::polar(std::sin(xi / 2) * std::sin(theta / 2), phi12);
    v(2) = std::polar(std::cos(xi / 2), phi13);
    return PureState::normalized(Dims{3}, v);
}

std::array<double, 4> klimov_angles(const CVector &v) {
    if (v.size() != 3) throw DimensionError("klimov_angles: needs a qutrit vector");
    CVector u = v / v.norm();
    double r0 = std::abs(u(0)), r1 = std::abs(u(1)), r2 = std::min(1.0, std::abs(u(2)));
    double ph0 = std::arg(u(0));
    double xi = 2 * std::acos(r2);
    double theta = 2 * std::atan2(r1, r0);
    auto wrap = [](double a) { return a < 0 ? a + 2 * kPi : a; };
    return {xi, theta, wrap(std::arg(u(1)) - ph0), wrap(std::arg(u(2)) - ph0)};
}

std::pair<CVector, CVector> klimov_complement(double xi, double theta, double phi12, double phi13) {
    const double sx = std::sin(xi / 2), cx = std::cos(xi / 2), st = std::sin(theta / 2), ct = std::cos(theta / 2);
    CVector u(3), v(3);
    u << -st, std::polar(ct, phi12), 0.0;
    v << cx * ct, std::polar(cx * st, phi12), std::polar(-sx, phi13);
    return {u, v};
}

ProjectorSample sample_projector(RngStream &rng, ProjectorMode mode, Side side) {
    ProjectorSample p;
    p.side = side;
    if (mode == ProjectorMode::Haar) {
        CMatrix u = haar_unitary(3, rng);
        p.a0 = u.col(0);
        p.a1 = u.col(1);
        return p;
    }
    ProjectorAngles a;
    a.xi = rng.uniform(0, kPi);
    a.theta = rng.uniform(0, kPi);
    a.phi12 = rng.uniform(0, 2 * kPi);
    a.phi13 = rng.uniform(0, 2 * kPi);
    a.chi = rng.uniform(0, kPi);
    a.omega = rng.uniform(0, 2 * kPi);
    p.a0 = klimov_state(a.xi, a.theta, a.phi12, a.phi13).amplitudes();
    auto [u, v] = klimov_complement(a.xi, a.theta, a.phi12, a.phi13);
    p.a1 = std::cos(a.chi / 2) * u + std::polar(std::sin(a.chi / 2), a.omega) * v;
    p.angles = a;
    return p;
}

double verify_witness(const DensityMatrix &rho, const ProjectorSample &p) {
    require_two_qutrits(rho.dims(), "verify_witness");
    Compression c = compress(rho, p.isometry(), p.out_dims());
    return min_eigenvalue(partial_transpose(c.state.matrix(), c.state.dims()));
}

DistillVerdict one_copy_distillable(const DensityMatrix &rho, const DistillConfig &cfg, RngStream &rng) {
    require_two_qutrits(rho.dims(), "one_copy_distillable");
    if (cfg.n_proj < 1 || cfg.block < 1) throw ContractError("one_copy_distillable: n_proj and block must be positive");
    // Local compression commutes with the transpose of the other side.
    const CMatrix xa = partial_transpose(rho.matrix(), rho.dims(), 1);
    const CMatrix xb = partial_transpose(rho.matrix(), rho.dims(), 0);

    DistillVerdict out;
    for (long start = 0; start < cfg.n_proj; start += cfg.block) {
        const long cnt = std::min(cfg.block, cfg.n_proj - start);
        std::vector<ProjectorSample> samples(static_cast<size_t>(cnt));
        std::vector<CMatrix> blocks(static_cast<size_t>(cnt));
        std::vector<long> degenerate(static_cast<size_t>(cnt), 0);
        bool exhausted = false;
        auto draw = [&](long k) {
            const long trial = start + k;
            RngStream sub = rng.substream(static_cast<uint64_t>(trial));
            const Side side = side_for(cfg.side, trial);
            const CMatrix &x = side == Side::A ? xa : xb;
            auto ku = static_cast<size_t>(k);
            for (long d = 0; d < kMaxDegenerateDraws; ++d) {
                ProjectorSample p = sample_projector(sub, cfg.mode, side);
                CMatrix v = p.isometry();
                CMatrix m = v.adjoint() * x * v;
                if (m.trace().real() > kDegenerateTrace) {
                    samples[ku] = std::move(p);
                    blocks[ku] = std::move(m);
                    return;
                }
                ++degenerate[ku];
            }
            exhausted = true;
        };
        if (cfg.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (long k = 0; k < cnt; ++k) draw(k);
        } else {
            for (long k = 0; k < cnt; ++k) draw(k);
        }
        if (exhausted) throw DegenerateProjectionError("one_copy_distillable: every projection annihilates the state");

        long hit = kernels::first_negative_block(cfg.exec, blocks, {}, 0.0, cfg.neg_tol);
        const long upto = hit >= 0 ? hit + 1 : cnt;
        for (long k = 0; k < upto; ++k) out.degenerate_trials += degenerate[static_cast<size_t>(k)];
        out.trials_used = start + upto;
        if (hit >= 0) {
            out.tag = DistillTag::Distillable;
            out.witness = samples[static_cast<size_t>(hit)];
            out.witness_min_eig = verify_witness(rho, *out.witness);
            return out;
        }
    }
    out.tag = DistillTag::Pocu;
    return out;
}

std::vector<ProjectorSample> draw_projector_set(const DistillConfig &cfg, RngStream &rng) {
    std::vector<ProjectorSample> set(static_cast<size_t>(std::max(0L, cfg.n_proj)));
    auto draw = [&](long i) {
        RngStream sub = rng.substream(static_cast<uint64_t>(i));
        set[static_cast<size_t>(i)] = sample_projector(sub, cfg.mode, side_for(cfg.side, i));
    };
    const long n = static_cast<long>(set.size());
    if (cfg.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) draw(i);
    } else {
        for (long i = 0; i < n; ++i) draw(i);
    }
    return set;
}

std::vector<CMatrix> compressed_transposes(const CMatrix &h, const std::vector<ProjectorSample> &set, Exec exec) {
    if (h.rows() != 9 || h.cols() != 9) throw DimensionError("compressed_transposes: needs a 9x9 matrix");
    const Dims d{3, 3};
    const CMatrix xa = partial_transpose(h, d, 1), xb = partial_transpose(h, d, 0);
    std::vector<CMatrix> out(set.size());
    const long n = static_cast<long>(set.size());
    auto one = [&](long i) {
        const ProjectorSample &p = set[static_cast<size_t>(i)];
        CMatrix v = p.isometry();
        out[static_cast<size_t>(i)] = v.adjoint() * (p.side == Side::A ? xa : xb) * v;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) one(i);
    } else {
        for (long i = 0; i < n; ++i) one(i);
    }
    return out;
}

PureState epr_state() {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1 / std::sqrt(2.0);
    return PureState({2, 2}, v);
}

PureState epr_minus_state() {
    CVector v = CVector::Zero(4);
    v(1) = 1 / std::sqrt(2.0);
    v(2) = -1 / std::sqrt(2.0);
    return PureState({2, 2}, v);
}

EprFidelities epr_fidelities(const DensityMatrix &rho, const BsaResult &bsa) {
    if (!(rho.dims() == Dims{2, 2}) || !(bsa.dims == Dims{2, 2}))
        throw DimensionError("epr_fidelities: needs a two-qubit state");
    if (!bsa.rho_ent) throw ContractError("epr_fidelities: BSA has no entangled component");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(bsa.rho_ent->matrix());
    PureState ent = PureState::normalized({2, 2}, es.eigenvectors().col(3));
    EprFidelities f;
    f.f_epr = fidelity_with_pure(rho, epr_state());
    f.f_epr_minus = fidelity_with_pure(rho, epr_minus_state());
    f.f_ent = fidelity_with_pure(rho, ent);
    f.c_ent = concurrence_pure(ent);
    return f;
}

}  // namespace sepscope
