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

#include "sepscope/io.h"

#include <cstdio>
#include <sstream>

#include "sepscope/error.h"

namespace sepscope::io {

namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(long x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

std::string hash_hex(std::string_view text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json to_json(const DensityMatrix &rho) {
    const CMatrix &m = rho.matrix();
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array(), c = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j).real());
            c.push_back(m(i, j).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(c));
    }
    return {{"dims", rho.dims().values()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const Json &j) {
    Dims dims(j.at("dims").get<std::vector<int>>());
    const int n = dims.total();
    const Json &re = j.at("re"), &im = j.at("im");
    if (re.size() != static_cast<size_t>(n) || im.size() != static_cast<size_t>(n))
        throw DimensionError("density_from_json: matrix size does not match dims");
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (re[r].size() != static_cast<size_t>(n) || im[r].size() != static_cast<size_t>(n))
            throw DimensionError("density_from_json: ragged row");
        for (int c = 0; c < n; ++c) m(r, c) = {re[r][c].get<double>(), im[r][c].get<double>()};
    }
    return DensityMatrix(dims, m);
}

Json bsa_to_json(const BsaResult &r) {
    Json j = {{"dims", r.dims.values()},
              {"B", r.B},
              {"B_raw", r.B_raw},
              {"delta_B", r.delta_B_estimate},
              {"t0", r.t0},
              {"iterations", r.iterations},
              {"pool_size", r.pool_size},
              {"rho_sep", to_json(r.rho_sep)}};
    if (r.rho_ent) j["rho_ent"] = to_json(*r.rho_ent);
    return j;
}

BsaResult bsa_from_json(const Json &j) {
    BsaResult r;
    r.dims = Dims(j.at("dims").get<std::vector<int>>());
    r.B = j.at("B").get<double>();
    r.B_raw = j.at("B_raw").get<double>();
    r.delta_B_estimate = j.at("delta_B").get<double>();
    r.t0 = j.at("t0").get<double>();
    r.iterations = j.value("iterations", 0);
    r.pool_size = j.value("pool_size", 0L);
    r.rho_sep = density_from_json(j.at("rho_sep"));
    if (j.contains("rho_ent")) r.rho_ent = density_from_json(j.at("rho_ent"));
    return r;
}

Json read_json(const fs::path &p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + p.string());
    return Json::parse(in);
}

void write_json(const fs::path &p, const Json &j) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    out << j.dump(1) << '\n';
}

namespace {

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    return f;
}

std::string header_line(const std::string &hash) {
    return "# sepscope schema=" + std::to_string(kSchemaVersion) + " config=" + hash;
}

void put_row(std::ostream &out, const std::vector<std::string> &fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of(",\n") != std::string::npos) throw ContractError("csv field contains a separator");
        out << (i ? "," : "") << fields[i];
    }
    out << '\n';
}

}  // namespace

size_t CsvContents::col(std::string_view name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw Error("csv has no column '" + std::string(name) + "'");
}

std::optional<CsvContents> read_csv(const fs::path &p) {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    CsvContents c;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# sepscope schema=", 0) != 0)
        throw Error(p.string() + ": missing sepscope header");
    if (line.find("schema=" + std::to_string(kSchemaVersion) + " ") == std::string::npos)
        throw Error(p.string() + ": unsupported schema");
    auto at = line.find("config=");
    if (at != std::string::npos) c.config_hash = line.substr(at + 7);
    if (!std::getline(in, line)) return c;
    c.columns = split(line);
    while (std::getline(in, line)) {
        if (in.eof() && !line.empty()) break;  // no trailing newline: torn write
        auto f = split(line);
        if (f.size() == c.columns.size()) c.rows.push_back(std::move(f));
    }
    return c;
}

CsvWriter::CsvWriter(const fs::path &p, const std::string &config_hash, std::vector<std::string> columns)
    : width_(columns.size()) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    out_.open(p, std::ios::trunc);
    if (!out_) throw Error("cannot write " + p.string());
    out_ << header_line(config_hash) << '\n';
    put_row(out_, columns);
    out_.flush();
}

CsvWriter CsvWriter::resume(const fs::path &p, const std::string &config_hash, std::vector<std::string> columns,
                            std::vector<std::vector<std::string>> *kept) {
    kept->clear();
    if (auto old = read_csv(p)) {
        if (old->config_hash != config_hash)
            throw Error(p.string() + " was written by a different configuration; choose another output directory");
        if (old->columns != columns) throw Error(p.string() + ": column layout changed");
        *kept = std::move(old->rows);
    }
    CsvWriter w(p, config_hash, std::move(columns));
    for (const auto &r : *kept) put_row(w.out_, r);
    w.out_.flush();
    return w;
}

void CsvWriter::row(const std::vector<std::string> &fields) {
    if (fields.size() != width_) throw ContractError("csv row width does not match the header");
    put_row(out_, fields);
    out_.flush();
}

void write_csv(const fs::path &p, const std::string &config_hash, const std::vector<std::string> &columns,
               const std::vector<std::vector<std::string>> &rows) {
    CsvWriter w(p, config_hash, columns);
    for (const auto &r : rows) w.row(r);
}

}  // namespace sepscope::io
