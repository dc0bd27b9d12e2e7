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

#include "lightcone/config.hpp"
#include "lightcone/error.hpp"

namespace lightcone::cli {

using nlohmann::json;

namespace {

const json kAlphas = {0.63, 0.83, 1.00, 1.19};

json fig2() {
    return {
        {"chain", {{"n", 11}, {"couplings", {{"type", "power_law"}, {"J0", 1.0}, {"alpha", kAlphas}}}}},
        {"model", "ising"},
        {"time", {{"t_max", 1.5}, {"n_points", 60}}},
        {"thresholds", {0.04}},
        {"outputs", "lightcone_fig2"},
        {"analyses", {{"cone", true}, {"boundary_fit", true}, {"velocity", true},
                      {"bounds", true}, {"revivals", true}}},
    };
}

json fig3() {
    return {
        {"chain", {{"n", 11}, {"couplings", {{"type", "power_law"}, {"J0", 1.0}, {"alpha", kAlphas}}}}},
        {"model", "xy"},
        {"time", {{"t_max", 1.5}, {"n_points", 60}}},
        {"thresholds", {0.04}},
        {"outputs", "lightcone_fig3"},
        {"analyses", {{"cone", true}, {"boundary_fit", true}, {"velocity", true},
                      {"perturbative", true}}},
    };
}

json fig4() {
    return {
        {"chain", {{"n", 11}, {"couplings", {{"type", "power_law"}, {"J0", 1.0}, {"alpha", kAlphas}}}}},
        {"model", "xy"},
        {"time", {{"t_max", 1.0}, {"n_points", 101}}},
        {"thresholds", {0.04}},
        {"decay", {{"threshold", 0.15}, {"times", {0.1, 0.2, 0.3}}}},
        {"outputs", "lightcone_fig4"},
        {"analyses", {{"cone", true}, {"boundary_fit", false}, {"velocity", false},
                      {"decay_fit", true}, {"perturbative", true}}},
    };
}

json figS1() {
    return {
        {"chain", {{"n", 22}, {"couplings", {{"type", "power_law"}, {"J0", 1.0}, {"alpha", 1.19}}}}},
        {"model", "xy"},
        {"time", {{"t_max", 1.5}, {"n_points", 60}}},
        {"thresholds", {0.04}},
        {"outputs", "lightcone_figS1"},
        {"analyses", {{"cone", true}, {"boundary_fit", true}, {"velocity", true}}},
    };
}

} // namespace

std::vector<std::string_view> recipe_ids() { return {"fig2", "fig3", "fig4", "figS1"}; }

RunConfig recipe(std::string_view id) {
    if (id == "fig2") {
        return config_from_json(fig2());
    }
    if (id == "fig3") {
        return config_from_json(fig3());
    }
    if (id == "fig4") {
        return config_from_json(fig4());
    }
    if (id == "figS1") {
        return config_from_json(figS1());
    }
    fail(ErrorCode::invalid_argument,
         "unknown recipe \"" + std::string(id) + "\" (expected fig2, fig3, fig4 or figS1)");
}

} // namespace lightcone::cli
