// SPDX-License-Identifier: Apache-2.0
//
// afarq: optimal power allocation for amplify-and-forward Type-I ARQ
// Copyright (C) 2026 afarq contributors
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
// ------------------------------------------------------------------------

#include <CLI11.hpp>

#include <iostream>

#include "afarq/cli/commands.hpp"
#include "afarq/error.hpp"

namespace {

using namespace afarq;
using namespace afarq::cli;

struct Options {
    std::string config_path;
    std::string method = "opa";
    std::string variant;
    std::string eps_grid = "1e-1:1e-9:1";
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> trials;
    std::optional<unsigned> workers;
    std::vector<int> rounds;
    std::vector<double> etas;
    std::vector<std::string> methods;
    std::vector<std::string> variants;
    bool no_monte_carlo = false;
};

RunConfig build_config(const Options& o) {
    RunConfig cfg = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
    if (!o.variant.empty()) cfg.solver.recursion_variant = parse_recursion_variant(o.variant);
    if (!o.out.empty()) cfg.output_path = o.out;
    if (o.seed) cfg.sim.seed = *o.seed;
    if (o.trials) {
        if (!(*o.trials >= 1.0 && *o.trials == std::floor(*o.trials))) {
            throw InvalidArgument("--trials", "must be a positive integer");
        }
        cfg.sim.trials = static_cast<std::uint64_t>(*o.trials);
    }
    if (o.workers) cfg.sim.workers = *o.workers;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "YAML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output file (CSV, or JSON for validate)");
    sub->add_option("--variant", o.variant, "recursion variant: kkt or paper");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--workers", o.workers, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal power allocation for amplify-and-forward Type-I ARQ"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "compute a power schedule and print its breakdown");
    add_common(solve, o);
    solve->add_option("--method", o.method, "opa or epa");

    auto* sweep = app.add_subcommand("sweep", "solve over a target-outage grid and emit CSV");
    add_common(sweep, o);
    sweep->add_option("--eps-grid", o.eps_grid, "start:stop:points-per-decade");
    sweep->add_option("--method", o.methods, "methods to include (default: opa epa)");
    sweep->add_option("--rounds", o.rounds, "values of M to sweep (default: config M)");
    sweep->add_option("--eta", o.etas, "uniform eta values to sweep (default: config eta)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the full protocol");
    add_common(simulate, o);
    simulate->add_option("--method", o.method, "opa or epa");

    auto* validate = app.add_subcommand("validate", "run the numerical self-checks");
    add_common(validate, o);
    validate->add_flag("--no-monte-carlo", o.no_monte_carlo, "skip the simulation checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        const RunConfig cfg = build_config(o);
        if (solve->parsed()) return cmd_solve(cfg, parse_method(o.method), std::cout, std::cerr);
        if (simulate->parsed()) return cmd_simulate(cfg, parse_method(o.method), std::cout, std::cerr);
        if (sweep->parsed()) {
            SweepOptions so;
            so.eps = EpsGrid::parse(o.eps_grid).values();
            if (!o.methods.empty()) {
                so.methods.clear();
                for (const auto& m : o.methods) so.methods.push_back(parse_method(m));
            }
            if (!o.variant.empty()) so.variants = {cfg.solver.recursion_variant};
            so.rounds = o.rounds;
            so.etas = o.etas;
            for (int M : so.rounds) detail::require(M >= 1, "--rounds", "must be >= 1");
            for (double e : so.etas) detail::require(e > 0.0, "--eta", "must be > 0");
            so.workers = cfg.sim.workers;
            return cmd_sweep(cfg, so, std::cout, std::cerr);
        }
        ValidationGrid grid;
        grid.monte_carlo = !o.no_monte_carlo;
        return cmd_validate(cfg, grid, std::cout, std::cerr);
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
}
