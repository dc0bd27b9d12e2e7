// Copyright 2026 The lightcone Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lightcone/pipeline.hpp"

namespace lightcone::cli::detail {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Header row then one line per row; doubles with 17 significant digits,
/// empty cells for monostate.
void write_csv(std::ostream &os, const Table &t);

/// {"columns": [...], "rows": [[...], ...]} with nulls for empty cells.
nlohmann::json table_json(const Table &t);

/// Writes artifacts below root/subdir and records each one for the manifest.
class ArtifactSink {
  public:
    ArtifactSink(std::filesystem::path root, std::string subdir, OutputFormat format);

    /// stem.csv or stem.json depending on the output format.
    void table(const std::string &stem, const Table &t);
    void json_file(const std::string &name, const nlohmann::json &doc);
    void stream_file(const std::string &name, const std::function<void(std::ostream &)> &body);

    const std::vector<ManifestFile> &files() const noexcept { return files_; }

  private:
    std::filesystem::path root_;
    std::string subdir_;
    OutputFormat format_;
    std::vector<ManifestFile> files_;
};

} // namespace lightcone::cli::detail
