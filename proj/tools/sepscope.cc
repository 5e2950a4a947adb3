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

// sepscope: batch experiments on random density matrices.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"

#include "sepscope/error.h"
#include "sepscope/expedition.h"

using namespace sepscope;

namespace {

std::vector<MeasureSpec> parse_measures(const std::string &text) {
    std::vector<MeasureSpec> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(MeasureSpec::parse(item));
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Best separable approximation experiments on random two-party states"};
    app.set_help_flag("-h,--help");

    std::string command, dims = "3x3", measures = "flat", side = "A", mode = "angles", filter = "any", out, seeds;
    long count = 2000, nproj = 50000;
    uint64_t seed = 42;
    std::optional<int> lambda, max_iters;
    std::optional<double> epsc, t0;
    double bin_width = 0, tol_beta = 1e-6;
    int threads = 0;
    bool quiet = false;

    app.add_option("command", command, "scan | bsa | families | pocu | distill | profile")
        ->required()
        ->check(CLI::IsMember({"scan", "bsa", "families", "pocu", "distill", "profile"}));
    app.add_option("--dims", dims, "local dimensions, e.g. 3x3")->capture_default_str();
    app.add_option("--measure", measures, "flat | induced:K | induced:K:projected, comma separated")
        ->capture_default_str();
    app.add_option("--count", count, "states per measure (NPT states for bsa and distill)")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--out", out, "output directory (default: $SEPSCOPE_OUT)");
    app.add_option("--seeds", seeds, "families: directory of a finished bsa run (default: --out)");
    app.add_option("--lambda", lambda, "BSA pool size factor, M = lambda N^4");
    app.add_option("--epsc", epsc, "BSA convergence threshold");
    app.add_option("--t0", t0, "eigenvalue threshold for ranks and kernels");
    app.add_option("--max-iters", max_iters, "BSA iteration cap");
    app.add_option("--nproj", nproj, "random local projections per distillability test")->capture_default_str();
    app.add_option("--side", side, "projected side: A | B | both")->capture_default_str();
    app.add_option("--mode", mode, "projector sampling: angles | haar")->capture_default_str();
    app.add_option("--filter", filter, "pocu: any | ppt | npt")->capture_default_str();
    app.add_option("--bin-width", bin_width, "R histogram bin (0: 0.1 for 2x2, else 0.25)");
    app.add_option("--tol-beta", tol_beta, "bisection width for critical weights")->capture_default_str();
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
    app.add_flag("-q,--quiet", quiet, "no progress on stderr");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        cfg.command = command;
        cfg.dims = Dims::parse(dims);
        cfg.measures = parse_measures(measures);
        cfg.count = count;
        cfg.seed = seed;
        if (out.empty())
            if (const char *env = std::getenv("SEPSCOPE_OUT")) out = env;
        if (out.empty()) throw ContractError("no output directory: pass --out or set SEPSCOPE_OUT");
        cfg.out = out;
        cfg.seeds_dir = seeds;
        cfg.bsa = BsaParams::defaults_for(cfg.dims);
        if (lambda) cfg.bsa.lambda = *lambda;
        if (epsc) cfg.bsa.eps_c = *epsc;
        if (t0) cfg.bsa.t0 = *t0;
        if (max_iters) cfg.bsa.max_iters = *max_iters;
        cfg.distill.n_proj = nproj;
        cfg.distill.side = parse_side_policy(side);
        cfg.distill.mode = parse_projector_mode(mode);
        cfg.filter = parse_state_filter(filter);
        cfg.bin_width = bin_width;
        cfg.tol_beta = tol_beta;
        cfg.quiet = quiet;
        if (threads > 0) omp_set_num_threads(threads);

        io::Json summary = run_experiment(cfg);
        summary.erase("config");
        std::cout << summary.dump(2) << '\n';
    } catch (const std::exception &e) {
        std::cerr << "sepscope: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
