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

#ifndef SEPSCOPE_RNG_H
#define SEPSCOPE_RNG_H

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace sepscope {

/// splitmix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream id for item `index` of a task family, e.g. ("scan/state", 17).
/// FNV-1a over the kind, then mixed with the index.
constexpr uint64_t stream_id(std::string_view kind, uint64_t index) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : kind) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(h ^ mix64(index));
}

/// Reproducible random stream. The output sequence depends only on
/// (master_seed, stream_id): the engine is std::mt19937_64, whose sequence
/// is fixed by the standard, and all variates are derived from raw 64-bit
/// draws here rather than through the implementation-defined std
/// distributions.
class RngStream {
  public:
    RngStream(uint64_t master_seed, uint64_t stream)
        : master_(master_seed), stream_(stream), eng_(mix64(master_seed ^ mix64(stream))) {}

    uint64_t master_seed() const { return master_; }
    uint64_t stream() const { return stream_; }

    /// Independent child stream; does not advance this one.
    RngStream substream(uint64_t index) const { return RngStream(master_, mix64(stream_ ^ mix64(index + 1))); }

    uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    /// Re and Im independent N(0, 1/2), so E|z|^2 = 1.
    std::complex<double> complex_normal();
    /// Rate-one exponential.
    double exponential();

  private:
    uint64_t master_;
    uint64_t stream_;
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0;
};

}  // namespace sepscope

#endif
