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

#ifndef SEPSCOPE_EXPEDITION_H
#define SEPSCOPE_EXPEDITION_H

#include <filesystem>
#include <string>
#include <vector>

#include "sepscope/bsa.h"
#include "sepscope/distill.h"
#include "sepscope/io.h"
#include "sepscope/random_states.h"

namespace sepscope {

enum class StateFilter { Any, Ppt, Npt };
StateFilter parse_state_filter(std::string_view s);
std::string to_string(StateFilter f);

struct ExperimentConfig {
    std::string command;  // scan | bsa | families | pocu | distill | profile
    Dims dims{3, 3};
    std::vector<MeasureSpec> measures{MeasureSpec{}};
    long count = 2000;
    uint64_t seed = 42;
    std::filesystem::path out;
    /// families: directory holding a finished bsa run (default: out).
    std::filesystem::path seeds_dir;
    BsaParams bsa;
    DistillConfig distill;
    StateFilter filter = StateFilter::Any;  // pocu only
    double bin_width = 0;                   // 0: 0.1 for two qubits, 0.25 otherwise
    double tol_beta = 1e-6;
    bool quiet = false;

    double effective_bin_width() const;
    /// Everything that determines the outputs (the output path does not).
    io::Json to_json() const;
    std::string hash() const;
};

/// Each runner writes <out>/<command>*.csv plus <out>/<command>_summary.json
/// and returns the summary. Rows already present from an interrupted run
/// with the same config are kept and not recomputed.
io::Json run_scan(const ExperimentConfig &cfg);
io::Json run_bsa_batch(const ExperimentConfig &cfg);
io::Json run_family_stats(const ExperimentConfig &cfg);
io::Json run_pocu(const ExperimentConfig &cfg);
io::Json run_distill_stats(const ExperimentConfig &cfg);
io::Json run_profile(const ExperimentConfig &cfg);

io::Json run_experiment(const ExperimentConfig &cfg);

/// Bins of width w covering [1, n]; the last bin is closed on the right.
struct Histogram {
    double lo = 1, width = 0.25;
    std::vector<long> counts;

    Histogram(double lo, double hi, double width);
    size_t bin(double x) const;
    void add(double x) { ++counts[bin(x)]; }
};

}  // namespace sepscope

#endif
