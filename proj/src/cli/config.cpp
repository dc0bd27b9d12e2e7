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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lightcone/config.hpp"
#include "lightcone/error.hpp"
#include "lightcone/ions.hpp"

namespace lightcone::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string &key, const std::string &msg) {
    fail(ErrorCode::config_validation, key + ": " + msg);
}

std::string join(const std::string &prefix, const std::string &key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Rejects keys outside `allowed` so typos do not silently fall back to defaults.
void check_keys(const json &obj, const std::string &prefix,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        invalid(prefix.empty() ? "<root>" : prefix, "expected an object");
    }
    for (const auto &item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            invalid(join(prefix, item.key()), "unknown key");
        }
    }
}

double get_number(const json &obj, const std::string &prefix, const std::string &key,
                  double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number()) {
        invalid(join(prefix, key), "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        invalid(join(prefix, key), "must be finite");
    }
    return x;
}

std::uint64_t get_unsigned(const json &obj, const std::string &prefix, const std::string &key,
                           std::uint64_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        invalid(join(prefix, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool get_bool(const json &obj, const std::string &prefix, const std::string &key, bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_boolean()) {
        invalid(join(prefix, key), "expected true or false");
    }
    return v.get<bool>();
}

std::string get_string(const json &obj, const std::string &prefix, const std::string &key,
                       const std::string &fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_string()) {
        invalid(join(prefix, key), "expected a string");
    }
    return v.get<std::string>();
}

// A number or a non-empty list of numbers.
std::vector<double> get_number_list(const json &obj, const std::string &prefix,
                                    const std::string &key) {
    const auto &v = obj.at(key);
    const std::string path = join(prefix, key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_number()) {
                invalid(path + "[" + std::to_string(k) + "]", "expected a number");
            }
            out.push_back(v[k].get<double>());
        }
    } else {
        invalid(path, "expected a number or a non-empty list of numbers");
    }
    for (double x : out) {
        if (!std::isfinite(x)) {
            invalid(path, "must be finite");
        }
    }
    return out;
}

SpinModel parse_model(const std::string &s) {
    if (s == "ising") {
        return SpinModel::ising;
    }
    if (s == "xy") {
        return SpinModel::xy;
    }
    if (s == "ising_field") {
        return SpinModel::ising_field;
    }
    invalid("model", "expected one of ising, xy, ising_field (got \"" + s + "\")");
}

void parse_couplings(const json &c, double unit, RunConfig &cfg) {
    const std::string prefix = "chain.couplings";
    if (!c.is_object()) {
        invalid(prefix, "expected an object");
    }
    const std::string type = get_string(c, prefix, "type", "");
    if (type == "power_law") {
        check_keys(c, prefix, {"type", "J0", "alpha"});
        const double J0 = get_number(c, prefix, "J0", 1.0) * unit;
        if (!(J0 > 0.0)) {
            invalid(prefix + ".J0", "must be > 0");
        }
        if (!c.contains("alpha")) {
            invalid(prefix + ".alpha", "required for power_law couplings");
        }
        cfg.alphas = get_number_list(c, prefix, "alpha");
        for (double a : cfg.alphas) {
            if (a < 0.0) {
                invalid(prefix + ".alpha", "must be >= 0");
            }
        }
        cfg.source = PowerLawSource{J0, cfg.alphas.front()};
    } else if (type == "nearest_neighbor") {
        check_keys(c, prefix, {"type", "J"});
        const double J = get_number(c, prefix, "J", 1.0) * unit;
        if (!(J > 0.0)) {
            invalid(prefix + ".J", "must be > 0");
        }
        cfg.source = NearestNeighborSource{J};
    } else if (type == "explicit") {
        check_keys(c, prefix, {"type", "matrix"});
        if (!c.contains("matrix") || !c.at("matrix").is_array()) {
            invalid(prefix + ".matrix", "expected a list of rows");
        }
        const auto &m = c.at("matrix");
        if (m.size() != cfg.n_spins) {
            invalid(prefix + ".matrix", "expected " + std::to_string(cfg.n_spins) + " rows");
        }
        ExplicitSource src;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string row = prefix + ".matrix[" + std::to_string(i) + "]";
            if (!m[i].is_array() || m[i].size() != cfg.n_spins) {
                invalid(row, "expected " + std::to_string(cfg.n_spins) + " entries");
            }
            std::vector<double> r;
            for (const auto &x : m[i]) {
                if (!x.is_number()) {
                    invalid(row, "expected numbers");
                }
                r.push_back(x.get<double>() * unit);
            }
            src.matrix.push_back(std::move(r));
        }
        try {
            build_couplings({cfg.n_spins, src});
        } catch (const Error &e) {
            invalid(prefix + ".matrix", e.what());
        }
        cfg.source = std::move(src);
    } else if (type == "ion_trap") {
        check_keys(c, prefix,
                   {"type", "axial_freq", "transverse_freq", "rabi_freq", "recoil_freq",
                    "detuning", "guard_band"});
        IonTrapParams p;
        p.n_ions = cfg.n_spins;
        p.axial_freq = get_number(c, prefix, "axial_freq", 0.0) * unit;
        p.transverse_freq = get_number(c, prefix, "transverse_freq", 0.0) * unit;
        p.rabi_freq = get_number(c, prefix, "rabi_freq", 0.0) * unit;
        p.recoil_freq = get_number(c, prefix, "recoil_freq", 0.0) * unit;
        p.detuning = get_number(c, prefix, "detuning", 0.0) * unit;
        if (c.contains("guard_band")) {
            p.guard_band = get_number(c, prefix, "guard_band", 0.0) * unit;
        }
        try {
            validate(p);
        } catch (const Error &e) {
            invalid(prefix, e.what());
        }
        cfg.source = p;
    } else {
        invalid(prefix + ".type",
                "expected one of power_law, nearest_neighbor, explicit, ion_trap (got \"" +
                    type + "\")");
    }
}

} // namespace

RunConfig config_from_json(const json &doc) {
    check_keys(doc, "",
               {"chain", "model", "B", "units", "time", "thresholds", "reduce", "decay",
                "revivals", "shots", "trajectory", "outputs", "analyses"});
    RunConfig cfg;

    const std::string units = get_string(doc, "", "units", "angular");
    double unit = 1.0;
    if (units == "cyclic") {
        unit = 2.0 * std::numbers::pi;
    } else if (units != "angular") {
        invalid("units", "expected angular or cyclic");
    }

    if (!doc.contains("chain")) {
        invalid("chain", "required");
    }
    const auto &chain = doc.at("chain");
    check_keys(chain, "chain", {"n", "couplings"});
    if (!chain.contains("n")) {
        invalid("chain.n", "required");
    }
    cfg.n_spins = get_unsigned(chain, "chain", "n", 0);
    if (cfg.n_spins < 2) {
        invalid("chain.n", "need at least 2 spins");
    }
    if (!chain.contains("couplings")) {
        invalid("chain.couplings", "required");
    }
    parse_couplings(chain.at("couplings"), unit, cfg);

    cfg.model = parse_model(get_string(doc, "", "model", "ising"));
    cfg.field = get_number(doc, "", "B", 0.0) * unit;
    if (cfg.model != SpinModel::ising_field && cfg.field != 0.0) {
        invalid("B", "a transverse field is only valid with model ising_field");
    }

    if (doc.contains("time")) {
        const auto &t = doc.at("time");
        check_keys(t, "time", {"t_max", "n_points", "stroboscopic"});
        cfg.time.t_max = get_number(t, "time", "t_max", cfg.time.t_max);
        cfg.time.n_points = get_unsigned(t, "time", "n_points", cfg.time.n_points);
        cfg.time.stroboscopic = get_bool(t, "time", "stroboscopic", false);
    }
    if (!(cfg.time.t_max > 0.0)) {
        invalid("time.t_max", "must be > 0");
    }
    if (cfg.time.n_points < 2) {
        invalid("time.n_points", "must be >= 2");
    }
    if (cfg.time.stroboscopic &&
        (cfg.model != SpinModel::ising_field || cfg.field == 0.0)) {
        invalid("time.stroboscopic", "requires model ising_field with B != 0");
    }

    if (doc.contains("thresholds")) {
        cfg.thresholds = get_number_list(doc, "", "thresholds");
    }
    for (double th : cfg.thresholds) {
        if (!(th > 0.0 && th < 1.0)) {
            invalid("thresholds", "each threshold must lie in (0, 1)");
        }
    }

    const std::string reduce = get_string(doc, "", "reduce", "max");
    if (reduce == "max") {
        cfg.reduce = analysis::PairReduce::max;
    } else if (reduce == "mean") {
        cfg.reduce = analysis::PairReduce::mean;
    } else {
        invalid("reduce", "expected max or mean");
    }

    if (doc.contains("decay")) {
        const auto &d = doc.at("decay");
        check_keys(d, "decay", {"threshold", "times"});
        cfg.decay.threshold = get_number(d, "decay", "threshold", cfg.decay.threshold);
        if (d.contains("times")) {
            cfg.decay.times = get_number_list(d, "decay", "times");
        }
    }
    if (!(cfg.decay.threshold > 0.0 && cfg.decay.threshold < 1.0)) {
        invalid("decay.threshold", "must lie in (0, 1)");
    }
    for (double t : cfg.decay.times) {
        if (t < 0.0) {
            invalid("decay.times", "times must be >= 0");
        }
    }

    if (doc.contains("revivals")) {
        const auto &r = doc.at("revivals");
        check_keys(r, "revivals", {"window", "prominence", "n_points"});
        if (r.contains("window")) {
            const auto w = get_number_list(r, "revivals", "window");
            if (w.size() != 2) {
                invalid("revivals.window", "expected [lo, hi]");
            }
            cfg.revivals.window_lo = w[0];
            cfg.revivals.window_hi = w[1];
        }
        cfg.revivals.prominence = get_number(r, "revivals", "prominence", cfg.revivals.prominence);
        cfg.revivals.n_points = get_unsigned(r, "revivals", "n_points", cfg.revivals.n_points);
    }
    if (!(cfg.revivals.window_lo >= 0.0 && cfg.revivals.window_hi > cfg.revivals.window_lo)) {
        invalid("revivals.window", "need 0 <= lo < hi");
    }
    if (cfg.revivals.prominence < 0.0) {
        invalid("revivals.prominence", "must be >= 0");
    }
    if (cfg.revivals.n_points < 3) {
        invalid("revivals.n_points", "must be >= 3");
    }

    if (doc.contains("shots") && !doc.at("shots").is_null()) {
        const auto &s = doc.at("shots");
        check_keys(s, "shots", {"n_shots", "seed"});
        ShotConfig sc;
        sc.n_shots = get_unsigned(s, "shots", "n_shots", 0);
        sc.seed = get_unsigned(s, "shots", "seed", 0);
        if (sc.n_shots < 2) {
            invalid("shots.n_shots", "need at least 2 shots");
        }
        cfg.shots = sc;
    }
    cfg.write_trajectory = get_bool(doc, "", "trajectory", false);
    cfg.output_dir = get_string(doc, "", "outputs", cfg.output_dir.string());
    if (cfg.output_dir.empty()) {
        invalid("outputs", "must not be empty");
    }

    if (doc.contains("analyses")) {
        const auto &a = doc.at("analyses");
        check_keys(a, "analyses",
                   {"cone", "boundary_fit", "velocity", "decay_fit", "bounds", "perturbative",
                    "revivals"});
        auto &f = cfg.analyses;
        f.cone = get_bool(a, "analyses", "cone", f.cone);
        f.boundary_fit = get_bool(a, "analyses", "boundary_fit", f.boundary_fit);
        f.velocity = get_bool(a, "analyses", "velocity", f.velocity);
        f.decay_fit = get_bool(a, "analyses", "decay_fit", f.decay_fit);
        f.bounds = get_bool(a, "analyses", "bounds", f.bounds);
        f.perturbative = get_bool(a, "analyses", "perturbative", f.perturbative);
        f.revivals = get_bool(a, "analyses", "revivals", f.revivals);
    }
    if (cfg.analyses.boundary_fit && !cfg.analyses.cone) {
        invalid("analyses.boundary_fit", "requires analyses.cone");
    }
    if (cfg.analyses.velocity && !cfg.analyses.boundary_fit) {
        invalid("analyses.velocity", "requires analyses.boundary_fit");
    }

    const bool needs_state_vector =
        cfg.model != SpinModel::ising || cfg.shots.has_value() || cfg.write_trajectory;
    if (needs_state_vector && cfg.n_spins > kMaxStateVectorSpins) {
        fail(ErrorCode::memory_cap,
             "chain.n: " + std::to_string(cfg.n_spins) + " spins exceeds the state-vector cap of " +
                 std::to_string(kMaxStateVectorSpins) + " for model " +
                 std::string(to_string(cfg.model)));
    }
    return cfg;
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) {
            what = what.substr(pos);
        }
        fail(ErrorCode::config_parse, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": " + what);
    }
    return config_from_json(doc);
}

RunConfig parse_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const RunConfig &cfg) {
    json doc;
    json couplings;
    std::visit(
        [&](const auto &src) {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, PowerLawSource>) {
                couplings["type"] = "power_law";
                couplings["J0"] = src.J0;
                if (cfg.alphas.size() == 1) {
                    couplings["alpha"] = cfg.alphas.front();
                } else {
                    couplings["alpha"] = cfg.alphas;
                }
            } else if constexpr (std::is_same_v<T, NearestNeighborSource>) {
                couplings["type"] = "nearest_neighbor";
                couplings["J"] = src.J;
            } else if constexpr (std::is_same_v<T, ExplicitSource>) {
                couplings["type"] = "explicit";
                couplings["matrix"] = src.matrix;
            } else {
                couplings["type"] = "ion_trap";
                couplings["axial_freq"] = src.axial_freq;
                couplings["transverse_freq"] = src.transverse_freq;
                couplings["rabi_freq"] = src.rabi_freq;
                couplings["recoil_freq"] = src.recoil_freq;
                couplings["detuning"] = src.detuning;
                couplings["guard_band"] = src.guard_band;
            }
        },
        cfg.source);
    doc["chain"] = {{"n", cfg.n_spins}, {"couplings", couplings}};
    doc["model"] = std::string(to_string(cfg.model));
    doc["B"] = cfg.field;
    doc["units"] = "angular";
    doc["time"] = {{"t_max", cfg.time.t_max},
                   {"n_points", cfg.time.n_points},
                   {"stroboscopic", cfg.time.stroboscopic}};
    doc["thresholds"] = cfg.thresholds;
    doc["reduce"] = std::string(analysis::to_string(cfg.reduce));
    doc["decay"] = {{"threshold", cfg.decay.threshold}};
    if (!cfg.decay.times.empty()) {
        doc["decay"]["times"] = cfg.decay.times;
    }
    doc["revivals"] = {{"window", {cfg.revivals.window_lo, cfg.revivals.window_hi}},
                       {"prominence", cfg.revivals.prominence},
                       {"n_points", cfg.revivals.n_points}};
    if (cfg.shots) {
        doc["shots"] = {{"n_shots", cfg.shots->n_shots}, {"seed", cfg.shots->seed}};
    } else {
        doc["shots"] = nullptr;
    }
    doc["trajectory"] = cfg.write_trajectory;
    doc["outputs"] = cfg.output_dir.generic_string();
    const auto &f = cfg.analyses;
    doc["analyses"] = {{"cone", f.cone},
                       {"boundary_fit", f.boundary_fit},
                       {"velocity", f.velocity},
                       {"decay_fit", f.decay_fit},
                       {"bounds", f.bounds},
                       {"perturbative", f.perturbative},
                       {"revivals", f.revivals}};
    return doc;
}

std::vector<RunConfig> expand_sweep(const RunConfig &cfg) {
    if (cfg.alphas.size() <= 1) {
        return {cfg};
    }
    std::vector<RunConfig> out;
    for (double a : cfg.alphas) {
        RunConfig sub = cfg;
        sub.alphas = {a};
        std::get<PowerLawSource>(sub.source).alpha = a;
        out.push_back(std::move(sub));
    }
    return out;
}

std::vector<double> rephasing_times(double field, std::size_t count) {
    require(field != 0.0 && std::isfinite(field), ErrorCode::invalid_argument,
            "rephasing_times: field must be non-zero");
    std::vector<double> t(count);
    const double period = 2.0 * std::numbers::pi / std::abs(field);
    for (std::size_t n = 0; n < count; ++n) {
        t[n] = static_cast<double>(n + 1) * period;
    }
    return t;
}

} // namespace lightcone::cli
