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

#include "sepscope/expedition.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include <omp.h>

#include "sepscope/classifier.h"
#include "sepscope/error.h"
#include "sepscope/family.h"

namespace sepscope {

namespace fs = std::filesystem;
using io::fmt;
using io::Json;
using Row = std::vector<std::string>;

namespace {

constexpr int kDepthBins = 20;

// Unit of work: one index, one or more rows. Every table's first column is
// the unit index, which is how an interrupted run is picked up again.
using UnitFn = std::function<std::vector<Row>(long)>;

std::vector<Row> run_units(const fs::path &csv, const ExperimentConfig &cfg, const std::vector<std::string> &cols,
                           long total, const UnitFn &unit) {
    std::vector<Row> rows;
    io::CsvWriter w = [&] {
        std::vector<Row> kept;
        auto probe = io::read_csv(csv);
        // The last unit may have been cut short between two of its rows.
        if (probe && !probe->rows.empty() && probe->config_hash == cfg.hash()) {
            const std::string last = probe->rows.back()[0];
            while (!probe->rows.empty() && probe->rows.back()[0] == last) probe->rows.pop_back();
            // A smaller count keeps only its prefix.
            std::erase_if(probe->rows, [&](const Row &r) { return std::stol(r[0]) >= total; });
            io::write_csv(csv, probe->config_hash, probe->columns, probe->rows);
        }
        io::CsvWriter wr = io::CsvWriter::resume(csv, cfg.hash(), cols, &kept);
        rows = std::move(kept);
        return wr;
    }();
    const long done = rows.empty() ? 0 : std::stol(rows.back()[0]) + 1;
    if (done > 0 && !cfg.quiet) std::clog << cfg.command << ": resuming at " << done << "/" << total << '\n';

    const long chunk = std::max(1, 4 * omp_get_max_threads());
    long next_report = total / 10;
    for (long start = done; start < total; start += chunk) {
        const long n = std::min(chunk, total - start);
        std::vector<std::vector<Row>> buf(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
        for (long k = 0; k < n; ++k) buf[static_cast<size_t>(k)] = unit(start + k);
        for (auto &b : buf)
            for (auto &r : b) {
                w.row(r);
                rows.push_back(std::move(r));
            }
        if (!cfg.quiet && start + n >= next_report) {
            std::clog << cfg.command << ": " << start + n << "/" << total << '\n';
            next_report = start + n + std::max(1L, total / 10);
        }
    }
    return rows;
}

std::string opt(const std::optional<double> &x) { return x ? fmt(*x) : ""; }

double num(const Row &r, size_t c) { return r[c].empty() ? std::nan("") : std::stod(r[c]); }

std::string join(const std::vector<std::string> &v, char sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + v[i];
    return s;
}

std::string error_code(const std::exception &e) {
    if (dynamic_cast<const RankDeficiencyError *>(&e)) return "rank_deficient";
    if (dynamic_cast<const SamplingFailureError *>(&e)) return "sampling_failure";
    if (dynamic_cast<const DegenerateProjectionError *>(&e)) return "degenerate_projection";
    return "error";
}

void log_failure(const ExperimentConfig &cfg, long id, const std::exception &e) {
    if (cfg.quiet) return;
#pragma omp critical(sepscope_log)
    std::clog << cfg.command << ": unit " << id << " failed: " << e.what() << '\n';
}

double fraction(long a, long b) { return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

// NPT states with a usable smallest eigenvalue, drawn in candidate order.
struct Candidate {
    long index;
    DensityMatrix rho;
};

std::vector<Candidate> draw_candidates(const ExperimentConfig &cfg, const std::string &kind, StateFilter filter,
                                       double min_eig) {
    const MeasureSpec &spec = cfg.measures.front();
    std::vector<Candidate> out;
    for (long j = 0; static_cast<long>(out.size()) < cfg.count; ++j) {
        if (j > 1000 * std::max(1L, cfg.count)) throw Error(kind + ": acceptance rate too low for this measure");
        RngStream rng(cfg.seed, stream_id(kind + "/candidate/" + spec.str(), static_cast<uint64_t>(j)));
        DensityMatrix rho = sample_dm(cfg.dims, spec, rng);
        if (min_eigenvalue(rho.matrix()) < min_eig) continue;
        bool ppt = ppt_check(rho).is_ppt;
        if ((filter == StateFilter::Ppt && !ppt) || (filter == StateFilter::Npt && ppt)) continue;
        out.push_back({j, std::move(rho)});
    }
    return out;
}

Json write_summary(const ExperimentConfig &cfg, Json summary) {
    summary["config"] = cfg.to_json();
    summary["config_hash"] = cfg.hash();
    io::write_json(cfg.out / (cfg.command + "_summary.json"), summary);
    return summary;
}

void prepare(const ExperimentConfig &cfg) {
    if (cfg.out.empty()) throw ContractError("no output directory");
    if (cfg.count < 0) throw ContractError("count must be non-negative");
    if (cfg.measures.empty()) throw ContractError("no measure given");
    cfg.bsa.validate();
    fs::create_directories(cfg.out);
}

std::string edge(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Row histogram_rows(const std::string &label, const Histogram &h, size_t i, std::vector<long> extra = {}) {
    Row r{label, edge(h.lo + h.width * static_cast<double>(i)), edge(h.lo + h.width * static_cast<double>(i + 1)),
          fmt(h.counts[i])};
    for (long x : extra) r.push_back(fmt(x));
    return r;
}

}  // namespace

StateFilter parse_state_filter(std::string_view s) {
    if (s == "any") return StateFilter::Any;
    if (s == "ppt") return StateFilter::Ppt;
    if (s == "npt") return StateFilter::Npt;
    throw ContractError("unknown state filter '" + std::string(s) + "'");
}

std::string to_string(StateFilter f) {
    switch (f) {
    case StateFilter::Any: return "any";
    case StateFilter::Ppt: return "ppt";
    case StateFilter::Npt: return "npt";
    }
    return "?";
}

Histogram::Histogram(double lo_, double hi, double width_) : lo(lo_), width(width_) {
    if (!(width > 0) || !(hi > lo)) throw ContractError("histogram: bad range");
    counts.assign(static_cast<size_t>(std::ceil((hi - lo) / width - 1e-9)), 0);
}

size_t Histogram::bin(double x) const {
    double k = std::floor((x - lo) / width);
    return static_cast<size_t>(std::clamp(k, 0.0, static_cast<double>(counts.size() - 1)));
}

double ExperimentConfig::effective_bin_width() const {
    if (bin_width > 0) return bin_width;
    return dims == Dims{2, 2} ? 0.1 : 0.25;
}

Json ExperimentConfig::to_json() const {
    Json ms = Json::array();
    for (const auto &m : measures) ms.push_back(m.str());
    const BsaParams &b = bsa;
    Json j = {
        {"schema", io::kSchemaVersion},
        {"command", command},
        {"dims", dims.str()},
        {"measures", ms},
        {"count", count},
        {"seed", seed},
        {"bsa",
         {{"lambda", b.lambda},
          {"eps_c", b.eps_c},
          {"max_iters", b.max_iters},
          {"eta0", b.eta0},
          {"eta_shrink", b.eta_shrink},
          {"eta_min", b.eta_min},
          {"sep_fraction", b.sep_fraction},
          {"weight_floor", b.weight_floor},
          {"t0", b.t0},
          {"min_input_eig", b.min_input_eig},
          {"stall_patience", b.stall_patience},
          {"perturbations_per_support", b.perturbations_per_support},
          {"descent_restarts", b.descent_restarts},
          {"dual_smoothing", b.dual_smoothing},
          {"raw_descents", b.raw_descents}}},
        {"distill",
         {{"n_proj", distill.n_proj},
          {"mode", to_string(distill.mode)},
          {"side", to_string(distill.side)},
          {"neg_tol", distill.neg_tol},
          {"pocu_search", "fixed projector set shared across beta"}}},
        {"filter", to_string(filter)},
        {"bin_width", effective_bin_width()},
        {"tol_beta", tol_beta},
    };
    if (command == "families") j["seeds_dir"] = fs::absolute(seeds_dir.empty() ? out : seeds_dir).lexically_normal();
    return j;
}

// Units are drawn by index, so a single-measure table written for one count
// is a prefix of the table for a larger one; the count stays out of the hash
// so such a batch can be extended in place.
std::string ExperimentConfig::hash() const {
    Json j = to_json();
    if (measures.size() == 1) j.erase("count");
    return io::hash_hex(j.dump());
}

Json run_scan(const ExperimentConfig &cfg) {
    prepare(cfg);
    io::write_json(cfg.out / "scan_config.json", cfg.to_json());
    const std::vector<std::string> cols{"id",      "measure",    "R",      "tag",   "ppt_min_eig",
                                        "B",       "B_raw",      "delta_B", "iterations", "status",
                                        "rank_ent", "min_eig_sep_pt", "overlap_phi0", "lemma1", "lemma2",
                                        "B_C"};
    const long per = cfg.count;
    auto unit = [&](long k) -> std::vector<Row> {
        const size_t m = static_cast<size_t>(k / std::max(1L, per));
        const long i = k % std::max(1L, per);
        const MeasureSpec &spec = cfg.measures[m];
        Row r(cols.size());
        r[0] = fmt(k);
        r[1] = spec.str();
        try {
            RngStream rs(cfg.seed, stream_id("scan/state/" + spec.str(), static_cast<uint64_t>(i)));
            DensityMatrix rho = sample_dm(cfg.dims, spec, rs);
            r[2] = fmt(participation_ratio(rho));
            PptReport ppt = ppt_check(rho);
            r[4] = fmt(ppt.min_eig);
            r[9] = "ok";
            if (!ppt.is_ppt) {
                r[3] = to_string(StateTag::NPT);
                return {r};
            }
            RngStream rb(cfg.seed, stream_id("scan/bsa/" + spec.str(), static_cast<uint64_t>(i)));
            StateClass c = classify(rho, cfg.bsa, rb);
            const BsaResult &b = *c.bsa;
            r[3] = to_string(c.tag);
            r[5] = fmt(b.B);
            r[6] = fmt(b.B_raw);
            r[7] = fmt(b.delta_B_estimate);
            r[8] = fmt(static_cast<long>(b.iterations));
            if (c.tag == StateTag::BoundEntangled) {
                SeedReport s = detect_seed(b);
                r[10] = fmt(static_cast<long>(effective_rank(b.rho_ent->matrix(), b.t0)));
                r[11] = fmt(s.min_eig_sep_pt);
                r[12] = fmt(s.overlap_phi0);
                r[13] = fmt(s.lemma1);
                r[14] = fmt(s.lemma2);
                r[15] = fmt(critical_beta_ppt(b, cfg.tol_beta).beta_critical);
            }
        } catch (const std::exception &e) {
            log_failure(cfg, k, e);
            r[3] = "";
            r[9] = error_code(e);
        }
        return {r};
    };
    std::vector<Row> rows = run_units(cfg.out / "scan.csv", cfg, cols, per * static_cast<long>(cfg.measures.size()), unit);

    const int n = cfg.dims.total();
    std::vector<Row> hist_rows, be_rows;
    Json per_measure = Json::array();
    for (const MeasureSpec &spec : cfg.measures) {
        Histogram all(1, n, cfg.effective_bin_width());
        Histogram sep = all, npt = all, be = all;
        long ok = 0, failures = 0;
        for (const Row &r : rows) {
            if (r[1] != spec.str()) continue;
            if (r[9] != "ok") {
                ++failures;
                continue;
            }
            ++ok;
            double R = std::stod(r[2]);
            all.add(R);
            if (r[3] == "Separable") sep.add(R);
            else if (r[3] == "NPT") npt.add(R);
            else {
                be.add(R);
                be_rows.push_back({r[0], r[1], r[2], r[5], r[10], r[11], r[12], r[13], r[14], r[15]});
            }
        }
        long n_sep = 0, n_npt = 0, n_be = 0;
        for (size_t i = 0; i < all.counts.size(); ++i) {
            n_sep += sep.counts[i];
            n_npt += npt.counts[i];
            n_be += be.counts[i];
            Row h = histogram_rows(spec.str(), all, i, {sep.counts[i], npt.counts[i], be.counts[i]});
            for (const Histogram *x : {&sep, &npt, &be}) h.push_back(fmt(fraction(x->counts[i], all.counts[i])));
            hist_rows.push_back(std::move(h));
        }
        per_measure.push_back({{"measure", spec.str()},
                               {"count", per},
                               {"ok", ok},
                               {"failures", failures},
                               {"separable", n_sep},
                               {"npt", n_npt},
                               {"bound_entangled", n_be},
                               {"ppt_fraction", fraction(n_sep + n_be, ok)},
                               {"be_fraction", fraction(n_be, ok)}});
    }
    io::write_csv(cfg.out / "scan_hist.csv", cfg.hash(),
                  {"measure", "bin_lo", "bin_hi", "n", "n_sep", "n_npt", "n_be", "p_sep", "p_npt", "p_be"}, hist_rows);
    io::write_csv(cfg.out / "scan_be.csv", cfg.hash(),
                  {"id", "measure", "R", "B", "rank_ent", "min_eig_sep_pt", "overlap_phi0", "lemma1", "lemma2", "B_C"},
                  be_rows);
    return write_summary(cfg, {{"measures", per_measure}});
}

Json run_bsa_batch(const ExperimentConfig &cfg) {
    prepare(cfg);
    io::write_json(cfg.out / "bsa_config.json", cfg.to_json());
    const std::vector<Candidate> cand = draw_candidates(cfg, "bsa", StateFilter::Npt, cfg.bsa.min_input_eig);
    const bool qubits = cfg.dims == Dims{2, 2};
    const std::vector<std::string> cols{"id",       "candidate", "R",       "ppt_min_eig",    "B",
                                        "B_raw",    "delta_B",   "iterations", "rank_ent",    "c_ent",
                                        "min_eig_sep_pt", "overlap_phi0", "lemma1", "lemma2", "null_dim",
                                        "compression_min_eig", "status"};
    auto unit = [&](long k) -> std::vector<Row> {
        const Candidate &c = cand[static_cast<size_t>(k)];
        Row r(cols.size());
        r[0] = fmt(k);
        r[1] = fmt(c.index);
        r[2] = fmt(participation_ratio(c.rho));
        r[3] = fmt(ppt_check(c.rho).min_eig);
        try {
            RngStream rng(cfg.seed, stream_id("bsa/run/" + cfg.measures.front().str(), static_cast<uint64_t>(c.index)));
            BsaResult b = best_separable_approximation(c.rho, cfg.bsa, rng);
            r[4] = fmt(b.B);
            r[5] = fmt(b.B_raw);
            r[6] = fmt(b.delta_B_estimate);
            r[7] = fmt(static_cast<long>(b.iterations));
            io::write_json(cfg.out / "states" / (std::to_string(k) + ".json"),
                           {{"id", k}, {"candidate", c.index}, {"rho", io::to_json(c.rho)}, {"bsa", io::bsa_to_json(b)}});
            if (!b.rho_ent) {
                r[16] = "no_entangled_part";
                return {r};
            }
            r[8] = fmt(static_cast<long>(effective_rank(b.rho_ent->matrix(), b.t0)));
            if (qubits) r[9] = fmt(epr_fidelities(c.rho, b).c_ent);
            SeedReport s = detect_seed(b);
            r[10] = fmt(s.min_eig_sep_pt);
            r[11] = fmt(s.overlap_phi0);
            r[12] = fmt(s.lemma1);
            r[13] = fmt(s.lemma2);
            r[14] = fmt(static_cast<long>(s.null_space_dim));
            r[15] = opt(s.compression_min_eig);
            r[16] = "ok";
        } catch (const std::exception &e) {
            log_failure(cfg, k, e);
            r[16] = error_code(e);
        }
        return {r};
    };
    std::vector<Row> rows = run_units(cfg.out / "bsa.csv", cfg, cols, cfg.count, unit);

    long ok = 0, rank1 = 0, lemma_negative = 0, seeds = 0, c_high = 0;
    std::map<std::string, long> ranks;
    for (const Row &r : rows) {
        if (r[16] != "ok") continue;
        ++ok;
        ++ranks[r[8]];
        if (r[8] == "1") ++rank1;
        if (std::stod(r[10]) <= 1e-3 && std::stod(r[11]) < 0) ++lemma_negative;
        if (r[12] == "1" || r[13] == "1") ++seeds;
        if (qubits && std::stod(r[9]) > 0.99) ++c_high;
    }
    Json s = {{"count", cfg.count},
              {"ok", ok},
              {"failures", cfg.count - ok},
              {"rank_counts", ranks},
              {"rank1_fraction", fraction(rank1, ok)},
              {"lemma_negative_fraction", fraction(lemma_negative, ok)},
              {"seeds", seeds},
              {"seed_rate", fraction(seeds, ok)}};
    if (qubits) s["c_ent_above_099_fraction"] = fraction(c_high, ok);
    return write_summary(cfg, s);
}

Json run_family_stats(const ExperimentConfig &cfg) {
    prepare(cfg);
    io::write_json(cfg.out / "families_config.json", cfg.to_json());
    const fs::path src = cfg.seeds_dir.empty() ? cfg.out : cfg.seeds_dir;
    auto seeds_csv = io::read_csv(src / "bsa.csv");
    if (!seeds_csv) throw Error("no bsa run found in " + src.string());
    const io::CsvContents seeds = *seeds_csv;
    const size_t c_id = seeds.col("id"), c_status = seeds.col("status"), c_l1 = seeds.col("lemma1"),
                 c_l2 = seeds.col("lemma2");
    const bool qutrits = cfg.dims == Dims{3, 3};

    const std::vector<std::string> cols{"seed_id", "kind",   "lemma",  "B",       "beta_critical", "depth",
                                        "depth_identity_err", "bracket_lo", "bracket_hi", "flags", "be_B",
                                        "be_delta_B", "be_ppt", "n_proj", "status"};
    auto unit = [&](long k) -> std::vector<Row> {
        const Row &s = seeds.rows[static_cast<size_t>(k)];
        const bool lemma = s[c_l1] == "1" || s[c_l2] == "1";
        auto base = [&](const std::string &kind) {
            Row r(cols.size());
            r[0] = fmt(k);
            r[1] = kind;
            r[2] = fmt(lemma);
            return r;
        };
        if (s[c_status] != "ok") {
            Row r = base("ppt");
            r[14] = "seed_failed";
            return {r};
        }
        std::vector<Row> out;
        try {
            Json st = io::read_json(src / "states" / (s[c_id] + ".json"));
            BsaResult b = io::bsa_from_json(st.at("bsa"));
            if (!(b.dims == cfg.dims)) throw DimensionError("seed dims differ from --dims");
            const double hs = hs_distance(*b.rho_ent, b.rho_sep);
            auto fill = [&](Row &r, const FamilyResult &f) {
                r[3] = fmt(b.B);
                r[4] = fmt(f.beta_critical);
                r[5] = fmt(f.depth);
                r[6] = fmt(std::abs(f.depth - f.beta_critical * hs));
                r[7] = fmt(f.bracket_lo);
                r[8] = fmt(f.bracket_hi);
                r[9] = join(f.flags, ';');
                r[14] = "ok";
            };
            FamilyResult ppt = critical_beta_ppt(b, cfg.tol_beta);
            Row r = base("ppt");
            fill(r, ppt);
            if (lemma && ppt.crossing) {
                DensityMatrix member = family_member(b, ppt.beta_critical / 2);
                r[12] = fmt(ppt_check(member).is_ppt);
                RngStream rng(cfg.seed, stream_id("families/be", static_cast<uint64_t>(k)));
                BsaResult mb = best_separable_approximation(member, cfg.bsa, rng);
                r[10] = fmt(mb.B);
                r[11] = fmt(mb.delta_B_estimate);
            }
            out.push_back(r);
            if (qutrits) {
                RngStream rng(cfg.seed, stream_id("families/pocu", static_cast<uint64_t>(k)));
                FamilyResult pocu = critical_beta_pocu(b, cfg.distill, cfg.tol_beta, rng);
                Row q = base("pocu");
                fill(q, pocu);
                q[13] = fmt(pocu.n_proj);
                out.push_back(q);
            }
        } catch (const std::exception &e) {
            log_failure(cfg, k, e);
            out.clear();
            Row r = base("ppt");
            r[14] = error_code(e);
            out.push_back(r);
        }
        return out;
    };
    std::vector<Row> rows =
        run_units(cfg.out / "families.csv", cfg, cols, static_cast<long>(seeds.rows.size()), unit);

    // Pair the two kinds per seed.
    std::map<long, std::pair<const Row *, const Row *>> by_seed;
    for (const Row &r : rows) {
        if (r[14] != "ok") continue;
        auto &p = by_seed[std::stol(r[0])];
        (r[1] == "ppt" ? p.first : p.second) = &r;
    }
    std::vector<Row> pair_rows;
    std::vector<double> deltas, sigmas;
    long lemma_seeds = 0, be_verified = 0, pairs = 0, ordered = 0, flagged = 0;
    double worst_identity = 0;
    for (const auto &[id, p] : by_seed) {
        const Row *ppt = p.first, *pocu = p.second;
        if (!ppt) continue;
        worst_identity = std::max(worst_identity, num(*ppt, 6));
        if (!ppt->at(9).empty()) ++flagged;
        if (ppt->at(2) == "1") {
            ++lemma_seeds;
            deltas.push_back(num(*ppt, 5));
            if (ppt->at(12) == "1" && num(*ppt, 10) > num(*ppt, 11)) ++be_verified;
        }
        if (!pocu) continue;
        worst_identity = std::max(worst_identity, num(*pocu, 6));
        if (!pocu->at(9).empty()) ++flagged;
        sigmas.push_back(num(*pocu, 5));
        ++pairs;
        const bool ord = num(*ppt, 4) < num(*pocu, 4) && num(*ppt, 5) < num(*pocu, 5);
        if (ord) ++ordered;
        pair_rows.push_back({fmt(id), ppt->at(2), ppt->at(3), ppt->at(4), pocu->at(4), ppt->at(5), pocu->at(5),
                             fmt(ord)});
    }
    io::write_csv(cfg.out / "families_pairs.csv", cfg.hash(),
                  {"seed_id", "lemma", "B", "B_C", "B_c", "delta", "sigma", "ordered"}, pair_rows);

    std::vector<Row> hist_rows;
    for (const auto &[label, vals] : {std::pair{"delta", &deltas}, std::pair{"sigma", &sigmas}}) {
        if (vals->empty()) continue;
        double top = *std::max_element(vals->begin(), vals->end());
        Histogram h(0, top > 0 ? top * (1 + 1e-9) : 1, (top > 0 ? top * (1 + 1e-9) : 1) / kDepthBins);
        for (double v : *vals) h.add(v);
        for (size_t i = 0; i < h.counts.size(); ++i) hist_rows.push_back(histogram_rows(label, h, i));
    }
    io::write_csv(cfg.out / "families_hist.csv", cfg.hash(), {"quantity", "bin_lo", "bin_hi", "count"}, hist_rows);

    return write_summary(cfg, {{"seeds", static_cast<long>(seeds.rows.size())},
                               {"lemma_seeds", lemma_seeds},
                               {"be_verified", be_verified},
                               {"pairs", pairs},
                               {"ordered_pairs", ordered},
                               {"ordered_fraction", fraction(ordered, pairs)},
                               {"flagged_families", flagged},
                               {"max_depth_identity_err", worst_identity}});
}

Json run_pocu(const ExperimentConfig &cfg) {
    prepare(cfg);
    if (!(cfg.dims == Dims{3, 3})) throw DimensionError("pocu needs --dims 3x3");
    io::write_json(cfg.out / "pocu_config.json", cfg.to_json());
    const std::vector<Candidate> cand = draw_candidates(cfg, "pocu", cfg.filter, 0.0);
    const std::vector<std::string> cols{"id",     "candidate", "R",         "ppt_min_eig", "verdict",
                                        "trials_used", "degenerate", "witness_min_eig", "side", "xi",
                                        "theta", "phi12",     "phi13",     "chi",          "omega"};
    DistillConfig dc = cfg.distill;
    dc.exec = Exec::Serial;  // states already run in parallel
    auto unit = [&](long k) -> std::vector<Row> {
        const Candidate &c = cand[static_cast<size_t>(k)];
        Row r(cols.size());
        r[0] = fmt(k);
        r[1] = fmt(c.index);
        r[2] = fmt(participation_ratio(c.rho));
        r[3] = fmt(ppt_check(c.rho).min_eig);
        RngStream rng(cfg.seed, stream_id("pocu/trials", static_cast<uint64_t>(c.index)));
        DistillVerdict v = one_copy_distillable(c.rho, dc, rng);
        r[4] = to_string(v.tag);
        r[5] = fmt(v.trials_used);
        r[6] = fmt(v.degenerate_trials);
        if (v.witness) {
            r[7] = fmt(v.witness_min_eig);
            r[8] = to_string(v.witness->side);
            if (const auto &a = v.witness->angles) {
                r[9] = fmt(a->xi);
                r[10] = fmt(a->theta);
                r[11] = fmt(a->phi12);
                r[12] = fmt(a->phi13);
                r[13] = fmt(a->chi);
                r[14] = fmt(a->omega);
            }
        }
        return {r};
    };
    std::vector<Row> rows = run_units(cfg.out / "pocu.csv", cfg, cols, cfg.count, unit);

    long ppt = 0, distillable = 0, ppt_distillable = 0, npt_pocu = 0, bad_witness = 0;
    for (const Row &r : rows) {
        const bool is_ppt = std::stod(r[3]) >= -kPptTol;
        const bool d = r[4] == "Distillable";
        ppt += is_ppt;
        distillable += d;
        if (is_ppt && d) ++ppt_distillable;
        if (!is_ppt && !d) ++npt_pocu;
        if (d && !(std::stod(r[7]) < -1e-10)) ++bad_witness;
    }
    return write_summary(cfg, {{"count", cfg.count},
                               {"ppt_states", ppt},
                               {"npt_states", cfg.count - ppt},
                               {"distillable", distillable},
                               {"pocu", cfg.count - distillable},
                               {"ppt_distillable", ppt_distillable},
                               {"npt_pocu", npt_pocu},
                               {"witness_failures", bad_witness}});
}

Json run_distill_stats(const ExperimentConfig &cfg) {
    prepare(cfg);
    if (!(cfg.dims == Dims{2, 2})) throw DimensionError("distill needs --dims 2x2");
    io::write_json(cfg.out / "distill_config.json", cfg.to_json());
    const std::vector<Candidate> cand = draw_candidates(cfg, "distill", StateFilter::Npt, cfg.bsa.min_input_eig);
    const std::vector<std::string> cols{"id",    "candidate", "R",          "B",          "delta_B",
                                        "rank_ent", "f_epr",  "f_epr_minus", "f_ent",     "c_ent",
                                        "filter_epr", "filter_ent", "status"};
    auto unit = [&](long k) -> std::vector<Row> {
        const Candidate &c = cand[static_cast<size_t>(k)];
        Row r(cols.size());
        r[0] = fmt(k);
        r[1] = fmt(c.index);
        r[2] = fmt(participation_ratio(c.rho));
        try {
            RngStream rng(cfg.seed, stream_id("distill/bsa/" + cfg.measures.front().str(), static_cast<uint64_t>(c.index)));
            BsaResult b = best_separable_approximation(c.rho, cfg.bsa, rng);
            r[3] = fmt(b.B);
            r[4] = fmt(b.delta_B_estimate);
            if (!b.rho_ent) {
                r[12] = "no_entangled_part";
                return {r};
            }
            r[5] = fmt(static_cast<long>(effective_rank(b.rho_ent->matrix(), b.t0)));
            EprFidelities f = epr_fidelities(c.rho, b);
            r[6] = fmt(f.f_epr);
            r[7] = fmt(f.f_epr_minus);
            r[8] = fmt(f.f_ent);
            r[9] = fmt(f.c_ent);
            r[10] = fmt(f.f_epr < 0.5);
            r[11] = fmt(f.f_ent < 0.5);
            r[12] = "ok";
        } catch (const std::exception &e) {
            log_failure(cfg, k, e);
            r[12] = error_code(e);
        }
        return {r};
    };
    std::vector<Row> rows = run_units(cfg.out / "distill.csv", cfg, cols, cfg.count, unit);

    long ok = 0, high = 0, filt_epr = 0, filt_ent = 0, upper_left = 0;
    for (const Row &r : rows) {
        if (r[12] != "ok") continue;
        ++ok;
        if (std::stod(r[8]) > 0.5 && std::stod(r[6]) < 0.5) ++upper_left;
        if (!(std::stod(r[9]) > 0.99)) continue;
        ++high;
        filt_epr += r[10] == "1";
        filt_ent += r[11] == "1";
    }
    return write_summary(cfg, {{"count", cfg.count},
                               {"ok", ok},
                               {"c_ent_above_099", high},
                               {"c_ent_above_099_fraction", fraction(high, ok)},
                               {"filter_needed_f_epr_fraction", fraction(filt_epr, high)},
                               {"filter_needed_f_ent_fraction", fraction(filt_ent, high)},
                               {"upper_left_quartile", upper_left}});
}

Json run_profile(const ExperimentConfig &cfg) {
    prepare(cfg);
    io::write_json(cfg.out / "profile_config.json", cfg.to_json());
    const int n = cfg.dims.total();
    std::vector<Row> rows;
    Json per = Json::array();
    for (const MeasureSpec &spec : cfg.measures) {
        std::vector<double> R(static_cast<size_t>(cfg.count)), P(R.size());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < cfg.count; ++i) {
            RngStream rng(cfg.seed, stream_id("profile/" + spec.str(), static_cast<uint64_t>(i)));
            DensityMatrix rho = sample_dm(cfg.dims, spec, rng);
            P[static_cast<size_t>(i)] = purity(rho);
            R[static_cast<size_t>(i)] = 1 / P[static_cast<size_t>(i)];
        }
        Histogram h(1, n, cfg.effective_bin_width());
        double sr = 0, sp = 0;
        for (size_t i = 0; i < R.size(); ++i) {
            h.add(R[i]);
            sr += R[i];
            sp += P[i];
        }
        for (size_t i = 0; i < h.counts.size(); ++i) {
            Row r = histogram_rows(spec.str(), h, i);
            r.push_back(fmt(fraction(h.counts[i], cfg.count)));
            rows.push_back(std::move(r));
        }
        const double cnt = static_cast<double>(std::max(1L, cfg.count));
        per.push_back({{"measure", spec.str()}, {"count", cfg.count}, {"mean_R", sr / cnt}, {"mean_purity", sp / cnt}});
    }
    io::write_csv(cfg.out / "profile.csv", cfg.hash(), {"measure", "bin_lo", "bin_hi", "count", "fraction"}, rows);
    return write_summary(cfg, {{"measures", per}});
}

Json run_experiment(const ExperimentConfig &cfg) {
    if (cfg.command == "scan") return run_scan(cfg);
    if (cfg.command == "bsa") return run_bsa_batch(cfg);
    if (cfg.command == "families") return run_family_stats(cfg);
    if (cfg.command == "pocu") return run_pocu(cfg);
    if (cfg.command == "distill") return run_distill_stats(cfg);
    if (cfg.command == "profile") return run_profile(cfg);
    throw ContractError("unknown command '" + cfg.command + "'");
}

}  // namespace sepscope
