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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lightcone/analysis.hpp"
#include "lightcone/evolution.hpp"
#include "lightcone/model.hpp"

namespace lightcone::cli {

struct TimeGrid {
    double t_max = 1.5;          // units of 1 / J_max
    std::size_t n_points = 60;
    /// Sample at multiples of the field rephasing period 2 pi / B instead of
    /// on [0, t_max]. Only valid for ising_field.
    bool stroboscopic = false;
};

struct ShotConfig {
    std::size_t n_shots = 0;
    std::uint64_t seed = 0;
};

struct AnalysisFlags {
    bool cone = true;
    bool boundary_fit = true;
    bool velocity = true;
    bool decay_fit = false;
    bool bounds = false;
    bool perturbative = false;
    bool revivals = false;
};

struct DecayConfig {
    double threshold = 0.15;
    std::vector<double> times; // empty means {t_max / 2}
};

struct RevivalConfig {
    double window_lo = 2.0;
    double window_hi = 3.0;
    double prominence = 0.1;
    std::size_t n_points = 401; // samples on [window_lo, window_hi]
};

/// One physical scenario, fully validated and with defaults applied. All
/// energies and frequencies are stored in angular units.
struct RunConfig {
    std::size_t n_spins = 0;
    CouplingSource source;
    /// Power-law exponents; more than one expands into independent sub-runs.
    std::vector<double> alphas;
    SpinModel model = SpinModel::ising;
    double field = 0.0; // B, same units as the couplings
    TimeGrid time;
    std::vector<double> thresholds{0.04};
    analysis::PairReduce reduce = analysis::PairReduce::max;
    DecayConfig decay;
    RevivalConfig revivals;
    std::optional<ShotConfig> shots;
    bool write_trajectory = false;
    std::filesystem::path output_dir = "lightcone_out";
    AnalysisFlags analyses;
};

/// Throws config_parse (with line and column) or config_validation (naming
/// the offending key path).
RunConfig parse_config(const std::filesystem::path &path);
RunConfig parse_config_text(std::string_view text);
RunConfig config_from_json(const nlohmann::json &doc);

/// Effective configuration in canonical form (angular units, every default
/// spelled out). Parsing it back yields an identical RunConfig.
nlohmann::json to_json(const RunConfig &cfg);

/// Splits an alpha sweep into single-alpha configs; other configs pass through.
std::vector<RunConfig> expand_sweep(const RunConfig &cfg);

/// Times 2 pi n / B, n = 1..count, at which the fast field precession of the
/// ising_field model completes full periods.
std::vector<double> rephasing_times(double field, std::size_t count);

/// Canned scenarios: fig2 (Ising cones), fig3 (XY cones), fig4 (XY decay
/// outside the cone), figS1 (22-spin XY cone).
RunConfig recipe(std::string_view id);
std::vector<std::string_view> recipe_ids();

} // namespace lightcone::cli
