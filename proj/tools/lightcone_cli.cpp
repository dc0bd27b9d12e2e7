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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lightcone/config.hpp"
#include "lightcone/error.hpp"
#include "lightcone/pipeline.hpp"

namespace {

using namespace lightcone;

struct GlobalFlags {
    std::string config;
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

int run(const cli::RunConfig &base, const GlobalFlags &g, cli::Stage stage) {
    cli::RunConfig cfg = base;
    if (!g.out.empty()) {
        cfg.output_dir = g.out;
    }
    if (g.seed) {
        if (cfg.shots) {
            cfg.shots->seed = *g.seed;
        } else {
            std::cerr << "warning: --seed has no effect without a shots section\n";
        }
    }
    cli::ExecuteOptions opts;
    opts.stage = stage;
    opts.jobs = g.jobs;
    opts.format = g.format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;
    const auto manifest = cli::execute(cfg, opts);
    for (const auto &w : manifest.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << "wrote " << manifest.files.size() << " files to " << cfg.output_dir.string()
              << " (config " << manifest.config_hash.substr(0, 12) << ", "
              << manifest.wall_clock_seconds << " s)\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Correlation light cones in long-range spin chains"};
    app.set_version_flag("--version", std::string(cli::software_version()));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--config", g.config, "Run configuration (JSON)");
    app.add_option("--jobs", g.jobs, "Concurrent sub-runs of an alpha sweep")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Override the shot-sampling seed");
    app.add_option("--out", g.out, "Output directory (overrides the config)");
    app.add_option("--format", g.format, "Tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));

    struct Command {
        const char *name;
        const char *help;
        cli::Stage stage;
    };
    const Command commands[] = {
        {"couplings", "Build the coupling matrix (and ion positions/modes)", cli::Stage::couplings},
        {"evolve", "Quench dynamics and connected correlations", cli::Stage::evolve},
        {"analyze", "Evolve, then extract cones, fits and the requested analyses",
         cli::Stage::analyze},
        {"bounds", "Compare correlations with the commuting and Lieb-Robinson bounds",
         cli::Stage::bounds},
    };
    std::optional<cli::Stage> chosen;
    for (const auto &c : commands) {
        auto *sub = app.add_subcommand(c.name, c.help);
        sub->callback([&chosen, stage = c.stage] { chosen = stage; });
    }
    std::string figure;
    auto *reproduce = app.add_subcommand("reproduce", "Run a canned scenario");
    reproduce->add_option("figure", figure, "fig2, fig3, fig4 or figS1")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "figS1"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (reproduce->parsed()) {
            return run(cli::recipe(figure), g, cli::Stage::analyze);
        }
        if (g.config.empty()) {
            std::cerr << "error: --config is required\n";
            return 2;
        }
        return run(cli::parse_config(g.config), g, *chosen);
    } catch (const Error &e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return cli::exit_code(e.code());
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error [io]: " << e.what() << '\n';
        return 4;
    } catch (const std::bad_alloc &) {
        std::cerr << "error [memory_cap]: out of memory\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
