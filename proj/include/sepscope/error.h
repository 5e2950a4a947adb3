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

#ifndef SEPSCOPE_ERROR_H
#define SEPSCOPE_ERROR_H

#include <stdexcept>
#include <string>

namespace sepscope {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shapes or subsystem indices do not fit together.
struct DimensionError : Error {
    using Error::Error;
};

/// An input violates a documented precondition (non-Hermitian, not unit norm, ...).
struct ContractError : Error {
    using Error::Error;
};

/// The operation is not defined for this subsystem structure.
struct UnsupportedError : Error {
    using Error::Error;
};

/// A projection annihilated the state.
struct DegenerateProjectionError : Error {
    using Error::Error;
};

/// BSA input has an eigenvalue below the configured floor.
struct RankDeficiencyError : Error {
    using Error::Error;
};

/// The sampled pool could not represent the input even after enlargement.
struct SamplingFailureError : Error {
    SamplingFailureError(const std::string &what, long pool_size)
        : Error(what), pool_size(pool_size) {}
    long pool_size;
};

}  // namespace sepscope

#endif
