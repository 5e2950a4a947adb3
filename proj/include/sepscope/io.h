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

#ifndef SEPSCOPE_IO_H
#define SEPSCOPE_IO_H

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sepscope/bsa.h"
#include "sepscope/hermitian.h"

namespace sepscope::io {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

/// Round-trip text for a double ("%.17g").
std::string fmt(double x);
std::string fmt(long x);
std::string fmt(bool x);

/// 16 hex digits of FNV-1a over the text.
std::string hash_hex(std::string_view text);

Json to_json(const DensityMatrix &rho);
DensityMatrix density_from_json(const Json &j);

/// Decomposition only; the support lists and histories are not stored.
Json bsa_to_json(const BsaResult &r);
BsaResult bsa_from_json(const Json &j);

Json read_json(const std::filesystem::path &p);
void write_json(const std::filesystem::path &p, const Json &j);

struct CsvContents {
    std::string config_hash;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws if absent.
    size_t col(std::string_view name) const;
};

/// nullopt when the file does not exist. Lines whose field count does not
/// match the header (a torn final write) are dropped.
std::optional<CsvContents> read_csv(const std::filesystem::path &p);

/// Header line "# sepscope schema=1 config=<hash>", then the column names.
/// Rows are flushed one by one so an interrupted run leaves a usable file.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &p, const std::string &config_hash, std::vector<std::string> columns);
    /// Reopens an existing table: rewrites the rows already there and
    /// keeps appending. Throws when the file was made by another config.
    static CsvWriter resume(const std::filesystem::path &p, const std::string &config_hash,
                            std::vector<std::string> columns, std::vector<std::vector<std::string>> *kept);

    void row(const std::vector<std::string> &fields);

  private:
    std::ofstream out_;
    size_t width_;
};

/// Write-once table with the same header convention.
void write_csv(const std::filesystem::path &p, const std::string &config_hash,
               const std::vector<std::string> &columns, const std::vector<std::vector<std::string>> &rows);

}  // namespace sepscope::io

#endif
