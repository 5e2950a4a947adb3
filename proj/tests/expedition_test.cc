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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "sepscope/error.h"
#include "sepscope/io.h"

using namespace sepscope;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
    fs::path p = fs::path(testing::TempDir()) / ("sepscope_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small(const std::string &command, const Dims &dims, long count, const fs::path &out) {
    ExperimentConfig c;
    c.command = command;
    c.dims = dims;
    c.count = count;
    c.out = out;
    c.bsa = BsaParams::defaults_for(dims);
    c.quiet = true;
    return c;
}

}  // namespace

TEST(IoTest, DensityMatrixJsonRoundTripIsExact) {
    RngStream rng(1, 1);
    DensityMatrix rho = flat_measure_dm({3, 3}, rng);
    io::Json j = io::to_json(rho);
    EXPECT_EQ(j["dims"], io::Json({3, 3}));
    DensityMatrix back = io::density_from_json(io::Json::parse(j.dump()));
    EXPECT_EQ(back.matrix(), rho.matrix());
    EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
}

TEST(IoTest, CsvHeaderAndTornLine) {
    fs::path dir = fresh_dir("csv");
    io::write_csv(dir / "t.csv", "abc", {"id", "x"}, {{"0", "1.5"}, {"1", "2"}});
    EXPECT_EQ(slurp(dir / "t.csv"), "# sepscope schema=1 config=abc\nid,x\n0,1.5\n1,2\n");
    std::ofstream(dir / "t.csv", std::ios::app) << "2,3";
    auto c = io::read_csv(dir / "t.csv");
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->config_hash, "abc");
    EXPECT_EQ(c->rows.size(), 2u);
    EXPECT_FALSE(io::read_csv(dir / "missing.csv").has_value());
}

TEST(HistogramTest, Bins) {
    Histogram h(1, 9, 0.25);
    EXPECT_EQ(h.counts.size(), 32u);
    EXPECT_EQ(h.bin(1.0), 0u);
    EXPECT_EQ(h.bin(1.26), 1u);
    EXPECT_EQ(h.bin(9.0), 31u);
    EXPECT_EQ(Histogram(1, 4, 0.1).counts.size(), 30u);
}

TEST(ExpeditionTest, ScanIsByteIdenticalAcrossRuns) {
    fs::path a = fresh_dir("scan_a"), b = fresh_dir("scan_b");
    run_scan(small("scan", {2, 2}, 80, a));
    io::Json s = run_scan(small("scan", {2, 2}, 80, b));
    for (const char *f : {"scan.csv", "scan_hist.csv", "scan_be.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    const auto &m = s["measures"][0];
    EXPECT_EQ(m["ok"].get<long>() + m["failures"].get<long>(), 80);
    EXPECT_EQ(m["separable"].get<long>() + m["npt"].get<long>() + m["bound_entangled"].get<long>(), m["ok"].get<long>());
    EXPECT_EQ(m["bound_entangled"].get<long>(), 0);  // PPT two-qubit states are separable
    EXPECT_EQ(slurp(a / "scan.csv").rfind("# sepscope schema=1 config=" + s["config_hash"].get<std::string>() + "\n", 0),
              0u);
}

TEST(ExpeditionTest, InterruptedBatchResumesToSameRows) {
    fs::path full = fresh_dir("resume_full"), cut = fresh_dir("resume_cut");
    ExperimentConfig cfg = small("bsa", {2, 2}, 6, full);
    run_bsa_batch(cfg);
    const std::string want = slurp(full / "bsa.csv");

    // Keep the header, two rows, and half of the third.
    fs::create_directories(cut);
    std::istringstream in(want);
    std::string line, partial;
    std::ofstream out(cut / "bsa.csv");
    for (int i = 0; i < 4 && std::getline(in, line); ++i) out << line << '\n';
    std::getline(in, line);
    out << line.substr(0, line.size() / 2);
    out.close();

    cfg.out = cut;
    run_bsa_batch(cfg);
    EXPECT_EQ(slurp(cut / "bsa.csv"), want);

    cfg.seed = 7;
    EXPECT_THROW(run_bsa_batch(cfg), Error);
}

TEST(ExpeditionTest, BatchCountCanGrowAndShrink) {
    fs::path four = fresh_dir("count_4"), grow = fresh_dir("count_grow");
    run_bsa_batch(small("bsa", {2, 2}, 4, four));
    run_bsa_batch(small("bsa", {2, 2}, 2, grow));
    run_bsa_batch(small("bsa", {2, 2}, 6, grow));
    const std::string six = slurp(grow / "bsa.csv");
    run_bsa_batch(small("bsa", {2, 2}, 4, grow));
    EXPECT_EQ(slurp(grow / "bsa.csv"), slurp(four / "bsa.csv"));
    EXPECT_EQ(six.rfind(slurp(four / "bsa.csv"), 0), 0u);
}

TEST(ExpeditionTest, FamiliesOnEmptySeedList) {
    fs::path dir = fresh_dir("families_empty");
    run_bsa_batch(small("bsa", {3, 3}, 0, dir));
    io::Json s = run_family_stats(small("families", {3, 3}, 0, dir));
    EXPECT_EQ(s["seeds"], 0);
    EXPECT_EQ(s["pairs"], 0);
    auto pairs = io::read_csv(dir / "families_pairs.csv");
    ASSERT_TRUE(pairs.has_value());
    EXPECT_TRUE(pairs->rows.empty());
}

TEST(ExpeditionTest, FamiliesNeedABsaRun) {
    EXPECT_THROW(run_family_stats(small("families", {3, 3}, 1, fresh_dir("families_none"))), Error);
}

TEST(ExpeditionTest, ProfilePureInducedMeasure) {
    fs::path dir = fresh_dir("profile");
    ExperimentConfig cfg = small("profile", {3, 3}, 200, dir);
    cfg.measures = {MeasureSpec::parse("induced:1"), MeasureSpec::parse("induced:60")};
    io::Json s = run_profile(cfg);
    EXPECT_NEAR(s["measures"][0]["mean_R"].get<double>(), 1.0, 1e-10);
    // Mean purity (N + K) / (N K + 1) for N = 9, K = 60.
    EXPECT_NEAR(s["measures"][1]["mean_purity"].get<double>(), 69.0 / 541, 2e-3);
    auto csv = io::read_csv(dir / "profile.csv");
    ASSERT_TRUE(csv.has_value());
    EXPECT_EQ(csv->rows.front()[3], "200");
}

TEST(ExpeditionTest, PocuOnPptStatesNeverDistillable) {
    fs::path dir = fresh_dir("pocu");
    ExperimentConfig cfg = small("pocu", {3, 3}, 4, dir);
    cfg.filter = StateFilter::Ppt;
    cfg.distill.n_proj = 500;
    io::Json s = run_pocu(cfg);
    EXPECT_EQ(s["ppt_states"], 4);
    EXPECT_EQ(s["ppt_distillable"], 0);
    EXPECT_THROW(run_pocu(small("pocu", {2, 2}, 1, dir)), DimensionError);
}

TEST(ExpeditionTest, DistillStatsColumns) {
    fs::path dir = fresh_dir("distill");
    io::Json s = run_distill_stats(small("distill", {2, 2}, 5, dir));
    EXPECT_EQ(s["ok"], 5);
    auto csv = io::read_csv(dir / "distill.csv");
    ASSERT_TRUE(csv.has_value());
    for (const auto &r : csv->rows) {
        double fe = std::stod(r[csv->col("f_epr")]), fm = std::stod(r[csv->col("f_epr_minus")]);
        EXPECT_LE(fe + fm, 1 + 1e-12);
        EXPECT_EQ(r[csv->col("filter_epr")], fe < 0.5 ? "1" : "0");
    }
}
