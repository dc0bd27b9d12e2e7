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

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "lightcone/analysis.hpp"
#include "lightcone/evolution.hpp"
#include "lightcone/ions.hpp"
#include "lightcone/ising.hpp"
#include "lightcone/pipeline.hpp"
#include "output.hpp"

namespace lightcone::cli {

using nlohmann::json;
using detail::Cell;
using detail::Table;

namespace {

std::string label(double x) {
    std::ostringstream ss;
    ss << x;
    return ss.str();
}

Cell index_cell(std::size_t i) { return static_cast<std::int64_t>(i + 1); }

bool is_nearest_neighbor(const CouplingMatrix &J) {
    for (std::size_t i = 0; i < J.size(); ++i) {
        for (std::size_t j = i + 2; j < J.size(); ++j) {
            if (J(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

bool soft_failure(const Error &e) {
    return e.code() == ErrorCode::insufficient_data || e.code() == ErrorCode::degenerate_fit;
}

json fit_json(const analysis::FitResult &f) {
    return {{"form", std::string(analysis::to_string(f.form))},
            {"params", f.params},
            {"sigmas", f.sigmas},
            {"residual", f.rms_residual},
            {"window", {f.window_lo, f.window_hi}},
            {"n_points", f.n_points}};
}

class SubRun {
  public:
    SubRun(const RunConfig &cfg, std::string subdir, const ExecuteOptions &opts)
        : cfg_(cfg), subdir_(std::move(subdir)), opts_(opts),
          sink_(cfg.output_dir, subdir_, opts.format) {}

    void run() {
        couplings();
        if (opts_.stage != Stage::couplings) {
            evolve();
            if (opts_.stage == Stage::evolve || opts_.stage == Stage::analyze) {
                correlations_output();
            }
            if (opts_.stage == Stage::bounds || (opts_.stage == Stage::analyze && cfg_.analyses.bounds)) {
                bounds();
            }
            if (opts_.stage == Stage::analyze) {
                analyze();
            }
        }
        summary_["warnings"] = warnings_;
        sink_.json_file("summary.json", summary_);
    }

    std::vector<ManifestFile> files() const { return sink_.files(); }
    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        for (const auto &w : warnings_) {
            out.push_back(subdir_.empty() ? w : subdir_ + ": " + w);
        }
        return out;
    }

  private:
    void warn(std::string msg) { warnings_.push_back(std::move(msg)); }

    void couplings() {
        const CouplingMatrix phys = build_couplings({cfg_.n_spins, cfg_.source});
        j_max_ = phys.max_abs();
        J_ = phys.scaled(1.0 / j_max_);

        Table t{{"i", "j", "J"}, {}};
        for (std::size_t i = 0; i < phys.size(); ++i) {
            for (std::size_t j = 0; j < phys.size(); ++j) {
                t.rows.push_back({index_cell(i), index_cell(j), phys(i, j)});
            }
        }
        sink_.table("couplings", t);

        if (const auto *ion = std::get_if<IonTrapParams>(&cfg_.source)) {
            const auto pos = equilibrium_positions(ion->n_ions);
            const auto modes = transverse_modes(pos, ion->anisotropy(), ion->axial_freq);
            Table p{{"ion", "u"}, {}};
            for (std::size_t i = 0; i < pos.u.size(); ++i) {
                p.rows.push_back({index_cell(i), pos.u[i]});
            }
            sink_.table("positions", p);
            Table m{{"mode", "omega", "ion", "b"}, {}};
            for (std::size_t k = 0; k < modes.n; ++k) {
                for (std::size_t i = 0; i < modes.n; ++i) {
                    m.rows.push_back({index_cell(k), modes.omega[k], index_cell(i), modes(i, k)});
                }
            }
            sink_.table("modes", m);
        }

        summary_["n_spins"] = cfg_.n_spins;
        summary_["model"] = std::string(to_string(cfg_.model));
        if (cfg_.alphas.size() == 1) {
            summary_["alpha"] = cfg_.alphas.front();
        }
        summary_["j_max"] = j_max_;
        summary_["time_unit"] = "1/J_max";
        summary_["field"] = cfg_.field / j_max_;
        json fit = nullptr;
        if (cfg_.n_spins >= 3) {
            try {
                const auto pf = fit_power_law(phys);
                fit = {{"J0", pf.J0_hat}, {"alpha", pf.alpha_hat}, {"rms_log_residual", pf.rms_log_residual}};
            } catch (const Error &e) {
                if (e.code() != ErrorCode::non_positive_coupling) {
                    throw;
                }
            }
        }
        summary_["coupling_fit"] = fit;
    }

    void evolve() {
        const double field = cfg_.field / j_max_;
        if (cfg_.time.stroboscopic) {
            const double period = 2.0 * std::numbers::pi / std::abs(field);
            times_.resize(cfg_.time.n_points);
            for (std::size_t k = 0; k < times_.size(); ++k) {
                times_[k] = static_cast<double>(k) * period;
            }
        } else {
            times_ = uniform_grid(cfg_.time.t_max, cfg_.time.n_points);
        }

        const bool state_vector =
            cfg_.model != SpinModel::ising || cfg_.shots.has_value() || cfg_.write_trajectory;
        summary_["route"] = state_vector ? "state_vector" : "closed_form";
        if (!state_vector) {
            field_ = ising_correlation_field(J_, times_);
            return;
        }

        const Hamiltonian H = build_hamiltonian(J_, cfg_.model, field);
        field_ = CorrelationField(J_.size(), times_);
        std::optional<ShotSampler> sampler;
        if (cfg_.shots) {
            sampler.emplace(J_.size(), cfg_.shots->n_shots, cfg_.shots->seed);
        }
        StateTrajectory traj;
        if (cfg_.write_trajectory) {
            const double bytes = static_cast<double>(times_.size()) *
                                 static_cast<double>(H.dimension()) * sizeof(cplx);
            require(bytes <= static_cast<double>(EvolveOptions{}.max_trajectory_bytes),
                    ErrorCode::memory_cap, "trajectory: stored states would exceed 2 GiB");
            traj.n_spins = J_.size();
        }
        evolve_streaming(
            H, times_,
            [&](std::size_t k, double t, std::span<const cplx> psi) {
                field_.set_slice(k, correlation_matrix(psi, H.n_spins(), H.kernels()));
                if (sampler) {
                    sampler->sample(t, psi, H.kernels());
                }
                if (cfg_.write_trajectory) {
                    traj.times.push_back(t);
                    traj.states.emplace_back(psi.begin(), psi.end());
                    double norm = 0.0;
                    for (const auto &a : psi) {
                        norm += std::norm(a);
                    }
                    traj.norms.push_back(std::sqrt(norm));
                }
            });
        if (sampler) {
            shots_field_ = correlations_from_shots(sampler->record());
            summary_["shots"] = {{"n_shots", cfg_.shots->n_shots}, {"seed", cfg_.shots->seed}};
        }
        if (cfg_.write_trajectory) {
            sink_.stream_file("trajectory.bin", [&](std::ostream &os) { write_trajectory(os, traj); });
        }
    }

    static Table correlation_table(const CorrelationField &f) {
        Table t{{"t", "i", "j", "C", "stderr"}, {}};
        for (std::size_t k = 0; k < f.n_times(); ++k) {
            for (std::size_t i = 0; i < f.n_spins(); ++i) {
                for (std::size_t j = i + 1; j < f.n_spins(); ++j) {
                    t.rows.push_back({f.times()[k], index_cell(i), index_cell(j), f(i, j, k),
                                      f.has_stderr() ? Cell{f.stderr_at(i, j, k)} : Cell{}});
                }
            }
        }
        return t;
    }

    void correlations_output() {
        sink_.table("correlations", correlation_table(field_));
        if (shots_field_) {
            sink_.table("correlations_shots", correlation_table(*shots_field_));
        }
    }

    void bounds() {
        const bool commuting = cfg_.model == SpinModel::ising;
        const bool lr = is_nearest_neighbor(J_);
        if (!commuting && !lr) {
            warn("bounds: neither the commuting bound (Ising only) nor the nearest-neighbour "
                 "bound applies to this model");
            return;
        }
        Table t{{"t", "i", "j", "abs_C", "commuting_bound", "lr_bound"}, {}};
        std::size_t commuting_violations = 0, lr_violations = 0;
        for (std::size_t k = 0; k < times_.size(); ++k) {
            const double time = times_[k];
            for (std::size_t i = 0; i < J_.size(); ++i) {
                for (std::size_t j = i + 1; j < J_.size(); ++j) {
                    const double c = std::abs(field_(i, j, k));
                    Cell cb, lb;
                    if (commuting) {
                        const double b = ising::commuting_bound(J_, i, j, time);
                        commuting_violations += c > b ? 1 : 0;
                        cb = b;
                    }
                    if (lr) {
                        const double b =
                            ising::lr_correlation_bound(static_cast<double>(j - i), time, 1.0);
                        lr_violations += c > b ? 1 : 0;
                        lb = b;
                    }
                    t.rows.push_back({time, index_cell(i), index_cell(j), c, cb, lb});
                }
            }
        }
        sink_.table("bounds", t);
        json b;
        b["commuting_violations"] = commuting ? json(commuting_violations) : json(nullptr);
        b["lr_violations"] = lr ? json(lr_violations) : json(nullptr);
        summary_["bounds"] = b;
    }

    void analyze() {
        const auto &a = cfg_.analyses;
        if (a.cone) {
            cones();
        }
        if (a.decay_fit) {
            decay();
        }
        if (a.perturbative) {
            perturbative();
        }
        if (a.revivals) {
            revivals();
        }
    }

    void cones() {
        json fits = json::array();
        for (double th : cfg_.thresholds) {
            const auto b = analysis::extract_light_cone(field_, th, cfg_.reduce);
            Table t{{"r", "t_star", "i", "j", "threshold", "reduce"}, {}};
            for (const auto &arr : b.arrivals) {
                Cell ci, cj;
                if (arr.source_pair) {
                    ci = index_cell(arr.source_pair->first);
                    cj = index_cell(arr.source_pair->second);
                }
                t.rows.push_back({static_cast<std::int64_t>(arr.r), arr.time, ci, cj, th,
                                  std::string(analysis::to_string(cfg_.reduce))});
            }
            sink_.table("boundary_" + label(th), t);
            if (b.empty()) {
                warn("no signal: contour " + label(th) + " is never reached");
            }
            if (!cfg_.analyses.boundary_fit) {
                continue;
            }
            json entry = {{"threshold", th},
                          {"reduce", std::string(analysis::to_string(cfg_.reduce))},
                          {"v_lr", ising::lieb_robinson_velocity(1.0)}};
            try {
                const auto fit = analysis::fit_boundary_power_law(b);
                entry.update(fit_json(fit));
                if (cfg_.analyses.velocity) {
                    const auto v = analysis::propagation_velocity(fit, b, 1.0);
                    Table vt{{"r", "v", "v_lr"}, {}};
                    double vmax = 0.0;
                    for (std::size_t k = 0; k < v.r.size(); ++k) {
                        vt.rows.push_back({v.r[k], v.v[k], v.v_lr});
                        vmax = std::max(vmax, v.v[k]);
                    }
                    sink_.table("velocity_" + label(th), vt);
                    entry["max_velocity"] = vmax;
                    entry["exceeds_v_lr"] = vmax > v.v_lr;
                }
            } catch (const Error &e) {
                if (!soft_failure(e)) {
                    throw;
                }
                warn("boundary fit at contour " + label(th) + ": " + e.what());
                entry["form"] = nullptr;
            }
            fits.push_back(std::move(entry));
        }
        summary_["fits"] = fits;
    }

    void decay() {
        const auto b = analysis::extract_light_cone(field_, cfg_.decay.threshold, cfg_.reduce);
        std::vector<double> ts = cfg_.decay.times;
        if (ts.empty()) {
            ts.push_back(times_.back() / 2.0);
        }
        Table t{{"t", "r", "C", "exponential", "power_law"}, {}};
        json entries = json::array();
        for (double time : ts) {
            const auto profile = analysis::outside_cone_profile(field_, time, b);
            json entry = {{"t", time}, {"threshold", cfg_.decay.threshold},
                          {"exponential", nullptr}, {"power_law", nullptr}};
            std::optional<analysis::FitResult> fe, fp;
            try {
                fe = analysis::fit_exponential(profile.r, profile.c);
                entry["exponential"] = fit_json(*fe);
            } catch (const Error &e) {
                if (!soft_failure(e)) {
                    throw;
                }
                warn("decay fit at t = " + label(time) + ": " + e.what());
            }
            try {
                fp = analysis::fit_power_decay(profile.r, profile.c);
                entry["power_law"] = fit_json(*fp);
            } catch (const Error &e) {
                if (!soft_failure(e)) {
                    throw;
                }
            }
            for (std::size_t k = 0; k < profile.r.size(); ++k) {
                const double r = profile.r[k];
                Cell ce, cp;
                if (fe) {
                    ce = fe->params[0] * std::exp(-r / fe->params[1]);
                }
                if (fp) {
                    cp = fp->params[0] * std::pow(r, -fp->params[1]);
                }
                t.rows.push_back({time, static_cast<std::int64_t>(r), profile.c[k], ce, cp});
            }
            entries.push_back(std::move(entry));
        }
        sink_.table("decay", t);
        summary_["decay"] = entries;
    }

    void perturbative() {
        Table t{{"t", "i", "j", "C", "perturbative"}, {}};
        for (std::size_t k = 0; k < times_.size(); ++k) {
            for (std::size_t i = 0; i < J_.size(); ++i) {
                for (std::size_t j = i + 1; j < J_.size(); ++j) {
                    if (J_(i, j) == 0.0) {
                        continue;
                    }
                    t.rows.push_back({times_[k], index_cell(i), index_cell(j), field_(i, j, k),
                                      analysis::perturbative_xy(J_, i, j, times_[k])});
                }
            }
        }
        sink_.table("perturbative", t);
    }

    void revivals() {
        const auto &rc = cfg_.revivals;
        std::vector<double> ts, series;
        if (cfg_.model == SpinModel::ising) {
            const double dt = (rc.window_hi - rc.window_lo) / static_cast<double>(rc.n_points - 1);
            for (std::size_t k = 0; k < rc.n_points; ++k) {
                const double t = rc.window_lo + static_cast<double>(k) * dt;
                ts.push_back(t);
                series.push_back(ising::mean_nearest_neighbor_correlation(J_, t));
            }
        } else {
            for (std::size_t k = 0; k < times_.size(); ++k) {
                if (times_[k] < rc.window_lo || times_[k] > rc.window_hi) {
                    continue;
                }
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < J_.size(); ++i) {
                    sum += std::abs(field_(i, i + 1, k));
                }
                ts.push_back(times_[k]);
                series.push_back(sum / static_cast<double>(J_.size() - 1));
            }
            if (ts.size() < 3) {
                warn("revivals: the simulated grid does not cover the revival window");
                return;
            }
        }
        Table s{{"t", "mean_nn_abs_C"}, {}};
        for (std::size_t k = 0; k < ts.size(); ++k) {
            s.rows.push_back({ts[k], series[k]});
        }
        sink_.table("revival_series", s);
        const auto found = ising::find_revivals(ts, series, rc.window_lo, rc.window_hi,
                                                {rc.prominence});
        Table r{{"time", "amplitude", "prominence"}, {}};
        json list = json::array();
        for (const auto &v : found) {
            r.rows.push_back({v.time, v.amplitude, v.prominence});
            list.push_back({{"time", v.time}, {"amplitude", v.amplitude}, {"prominence", v.prominence}});
        }
        sink_.table("revivals", r);
        if (found.empty()) {
            warn("revivals: no peak with prominence >= " + label(rc.prominence) + " in the window");
        }
        summary_["revivals"] = list;
    }

    const RunConfig &cfg_;
    std::string subdir_;
    ExecuteOptions opts_;
    detail::ArtifactSink sink_;
    json summary_ = json::object();
    std::vector<std::string> warnings_;
    double j_max_ = 0.0;
    CouplingMatrix J_;
    std::vector<double> times_;
    CorrelationField field_;
    std::optional<CorrelationField> shots_field_;
};

} // namespace

RunManifest execute(const RunConfig &cfg, const ExecuteOptions &opts) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.version = std::string(software_version());
    manifest.effective_config = to_json(cfg);
    const std::string canonical = manifest.effective_config.dump();
    manifest.config_hash = sha256_hex(
        {reinterpret_cast<const unsigned char *>(canonical.data()), canonical.size()});

    detail::ArtifactSink top(cfg.output_dir, "", opts.format);
    top.json_file("config.json", manifest.effective_config);

    const auto subs = expand_sweep(cfg);
    std::vector<std::string> names(subs.size());
    if (subs.size() > 1) {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            names[k] = "alpha_" + label(subs[k].alphas.front());
        }
    }
    std::vector<std::unique_ptr<SubRun>> runs(subs.size());
    std::vector<std::exception_ptr> errors(subs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < subs.size(); k = next++) {
            try {
                runs[k] = std::make_unique<SubRun>(subs[k], names[k], opts);
                runs[k]->run();
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(opts.jobs, subs.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_threads; ++w) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    manifest.files = top.files();
    for (const auto &r : runs) {
        const auto f = r->files();
        manifest.files.insert(manifest.files.end(), f.begin(), f.end());
        const auto w = r->warnings();
        manifest.warnings.insert(manifest.warnings.end(), w.begin(), w.end());
    }
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::ArtifactSink tail(cfg.output_dir, "", opts.format);
    tail.json_file("manifest.json", to_json(manifest));
    return manifest;
}

} // namespace lightcone::cli
