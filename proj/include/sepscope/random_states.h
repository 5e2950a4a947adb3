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

#ifndef SEPSCOPE_RANDOM_STATES_H
#define SEPSCOPE_RANDOM_STATES_H

#include <string>
#include <string_view>
#include <vector>

#include "sepscope/hermitian.h"
#include "sepscope/rng.h"

namespace sepscope {

struct MeasureSpec {
    enum class Kind { Flat, Induced };
    Kind kind = Kind::Flat;
    int ancilla_dim = 0;     // induced only
    bool projected = false;  // induced only

    /// "flat" | "induced:K" | "induced:K:projected"
    static MeasureSpec parse(std::string_view text);
    std::string str() const;
    bool operator==(const MeasureSpec &) const = default;
};

/// Pure product state with its local factors kept apart.
struct ProductState {
    Dims dims;
    std::vector<CVector> factors;

    CVector amplitudes() const;
    PureState pure() const { return PureState(dims, amplitudes()); }
};

/// i.i.d. standard complex Gaussian vector of length n, normalized.
CVector haar_vector(int n, RngStream &rng);
PureState haar_pure(int n, RngStream &rng);
PureState haar_pure(const Dims &dims, RngStream &rng);

/// QR of a complex Ginibre matrix with R's diagonal made real positive.
CMatrix haar_unitary(int n, RngStream &rng);

/// Uniform point on the (n-1)-simplex from normalized exponentials.
RVector simplex_uniform(int n, RngStream &rng);

/// U diag(p) U^dagger with p uniform on the simplex and U Haar. When
/// `spectrum` is non-null it receives p.
DensityMatrix flat_measure_dm(const Dims &dims, RngStream &rng, RVector *spectrum = nullptr);

/// Induced measure with ancilla dimension K. Plain: G G^dagger / Tr for an
/// N x K Ginibre G. Projected: the ancillas of two random pure states on
/// N (x) K and K (x) N are contracted against the maximally entangled
/// K (x) K vector, leaving W = G1 G2 and rho = W W^dagger / Tr.
DensityMatrix induced_dm(const Dims &dims, const MeasureSpec &spec, RngStream &rng);

DensityMatrix sample_dm(const Dims &dims, const MeasureSpec &spec, RngStream &rng);

ProductState product_pure(const Dims &dims, RngStream &rng);

/// Adds a complex Gaussian displacement of norm eta and renormalizes.
PureState perturb_pure(const PureState &psi, double eta, RngStream &rng);
/// Same, factor by factor, so the result stays a product.
ProductState perturb_pure(const ProductState &psi, double eta, RngStream &rng);
CVector perturb_vector(const CVector &v, double eta, RngStream &rng);

}  // namespace sepscope

#endif
