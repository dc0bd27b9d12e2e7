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

#include <fstream>
#include <iomanip>
#include <ostream>

#include "lightcone/error.hpp"
#include "output.hpp"

namespace lightcone::cli::detail {

namespace {

struct CsvCell {
    std::ostream &os;
    void operator()(std::monostate) const {}
    void operator()(std::int64_t v) const { os << v; }
    void operator()(double v) const { os << v; }
    void operator()(const std::string &v) const { os << v; }
};

struct JsonCell {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(double v) const { return v; }
    nlohmann::json operator()(const std::string &v) const { return v; }
};

} // namespace

void write_csv(std::ostream &os, const Table &t) {
    os << std::setprecision(17);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        os << (c ? "," : "") << t.columns[c];
    }
    os << '\n';
    for (const auto &row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) {
                os << ',';
            }
            std::visit(CsvCell{os}, row[c]);
        }
        os << '\n';
    }
}

nlohmann::json table_json(const Table &t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto &cell : row) {
            r.push_back(std::visit(JsonCell{}, cell));
        }
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

ArtifactSink::ArtifactSink(std::filesystem::path root, std::string subdir, OutputFormat format)
    : root_(std::move(root)), subdir_(std::move(subdir)), format_(format) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / subdir_, ec);
    require(!ec, ErrorCode::io,
            "cannot create output directory " + (root_ / subdir_).string() + ": " + ec.message());
}

void ArtifactSink::stream_file(const std::string &name,
                               const std::function<void(std::ostream &)> &body) {
    const std::string rel = subdir_.empty() ? name : subdir_ + "/" + name;
    const auto path = root_ / rel;
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), ErrorCode::io, "cannot open " + path.string());
        body(out);
        out.flush();
        require(static_cast<bool>(out), ErrorCode::io, "failed writing " + path.string());
    }
    ManifestFile f;
    f.path = rel;
    f.bytes = std::filesystem::file_size(path);
    f.sha256 = sha256_file(path);
    files_.push_back(std::move(f));
}

void ArtifactSink::table(const std::string &stem, const Table &t) {
    if (format_ == OutputFormat::csv) {
        stream_file(stem + ".csv", [&](std::ostream &os) { write_csv(os, t); });
    } else {
        json_file(stem + ".json", table_json(t));
    }
}

void ArtifactSink::json_file(const std::string &name, const nlohmann::json &doc) {
    stream_file(name, [&](std::ostream &os) { os << doc.dump(2) << '\n'; });
}

} // namespace lightcone::cli::detail
