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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightcone/config.hpp"
#include "lightcone/error.hpp"

namespace lightcone::cli {

enum class Stage { couplings, evolve, analyze, bounds };
enum class OutputFormat { csv, json };

struct ExecuteOptions {
    Stage stage = Stage::analyze;
    OutputFormat format = OutputFormat::csv;
    std::size_t jobs = 1;
};

struct ManifestFile {
    std::string path; // relative to the output directory, '/' separated
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::string config_hash; // sha256 of the canonical effective config
    std::string version;
    double wall_clock_seconds = 0.0;
    nlohmann::json effective_config;
    std::vector<ManifestFile> files;
    std::vector<std::string> warnings;
};

/// Runs couplings -> evolution (or the closed-form Ising route) -> requested
/// analyses, writes every artifact under cfg.output_dir and finishes with
/// manifest.json, which lists all other files with their checksums.
RunManifest execute(const RunConfig &cfg, const ExecuteOptions &opts = {});

nlohmann::json to_json(const RunManifest &m);

/// Recomputes checksums of every file listed in <dir>/manifest.json and
/// returns the paths that are missing or differ.
std::vector<std::string> verify_manifest(const std::filesystem::path &dir);

std::string sha256_hex(std::span<const unsigned char> bytes);
std::string sha256_file(const std::filesystem::path &path);

/// 0 success, 2 configuration, 3 numerical, 4 I/O.
int exit_code(ErrorCode code) noexcept;

std::string_view software_version() noexcept;

} // namespace lightcone::cli
