// SPDX-License-Identifier: Apache-2.0
//
// simkit: link-level simulation library for IRS-assisted OFDM uplinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: runs the MSE and rate experiments from a config
// file and writes CSV (and optionally SVG) into an output directory.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "simkit/simkit.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int realizations = 0;
    bool svg = false;
};

void add_common(CLI::App *sub, CommonArgs &args) {
    sub->add_option("--config", args.config_path, "configuration file (key = value)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory")->required();
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--realizations", args.realizations,
                    "override the config Monte Carlo realization count");
    sub->add_flag("--svg", args.svg, "also write an SVG chart");
}

simkit::SystemConfig load_with_overrides(const CLI::App *sub, const CommonArgs &args) {
    simkit::SystemConfig cfg = simkit::load_config(args.config_path);
    if (sub->count("--seed"))
        cfg.seed = args.seed;
    if (sub->count("--realizations"))
        cfg.realizations = args.realizations;
    simkit::validate_config(cfg);
    return cfg;
}

void write_outputs(const simkit::ExperimentResult &result, const CommonArgs &args) {
    fs::create_directories(args.out_dir);
    const fs::path csv_path = fs::path(args.out_dir) / (result.experiment + ".csv");
    simkit::emit_csv(result, csv_path.string());
    std::cout << "wrote " << result.rows.size() << " rows to " << csv_path.string() << "\n";
    if (args.svg) {
        const fs::path svg_path = fs::path(args.out_dir) / (result.experiment + ".svg");
        simkit::emit_svg(result, svg_path.string());
        std::cout << "wrote chart to " << svg_path.string() << "\n";
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"simkit: link-level simulator for an IRS-assisted OFDM uplink"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App *mse = app.add_subcommand("mse", "channel estimation MSE versus transmit power");
    CLI::App *dist =
        app.add_subcommand("rate-distance", "achievable rate versus user-AP distance");
    CLI::App *group =
        app.add_subcommand("rate-grouping", "effective rate versus grouping ratio");
    add_common(mse, args);
    add_common(dist, args);
    add_common(group, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mse->parsed()) {
            const auto cfg = load_with_overrides(mse, args);
            write_outputs(simkit::run_mse_vs_power(cfg, simkit::default_power_sweep()), args);
        } else if (dist->parsed()) {
            const auto cfg = load_with_overrides(dist, args);
            write_outputs(simkit::run_rate_vs_distance(cfg, simkit::default_distance_sweep()),
                          args);
        } else if (group->parsed()) {
            const auto cfg = load_with_overrides(group, args);
            write_outputs(
                simkit::run_rate_vs_grouping(cfg, simkit::default_grouping_sweep(cfg.layout)),
                args);
        }
    } catch (const simkit::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
