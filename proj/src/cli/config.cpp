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

#include "afarq/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "afarq/error.hpp"

namespace afarq::cli {

namespace {

template <class T>
T read(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw InvalidArgument(field, "cannot parse value '" + YAML::Dump(node) + "'");
    }
}

void reject_unknown(const YAML::Node& node, const std::string& prefix,
                    std::initializer_list<std::string_view> known) {
    if (!node.IsMap()) throw InvalidArgument(prefix.empty() ? "config" : prefix, "expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InvalidArgument(prefix.empty() ? key : prefix + "." + key, "unknown key");
        }
    }
}

void parse_scenario(const YAML::Node& n, Scenario& s) {
    reject_unknown(n, "scenario", {"M", "R_npcu", "eta", "target_eps", "rate_schedule"});
    if (n["M"]) s.rounds = read<int>(n["M"], "scenario.M");
    if (n["R_npcu"]) s.rate = read<double>(n["R_npcu"], "scenario.R_npcu");
    if (n["target_eps"]) s.target_eps = read<double>(n["target_eps"], "scenario.target_eps");
    if (n["rate_schedule"]) {
        s.rate_schedule =
            parse_rate_schedule(read<std::string>(n["rate_schedule"], "scenario.rate_schedule"));
    }
    const auto rounds = static_cast<std::size_t>(std::max(s.rounds, 0));
    if (const auto eta = n["eta"]) {
        if (eta.IsSequence()) {
            s.eta = read<std::vector<double>>(eta, "scenario.eta");
        } else {
            s.eta.assign(rounds, read<double>(eta, "scenario.eta"));
        }
    } else if (s.eta.size() != rounds) {
        s.eta.assign(rounds, s.eta.empty() ? 1.0 : s.eta.front());
    }
}

void parse_stats(const YAML::Node& n, ChannelStats& s) {
    reject_unknown(n, "stats", {"sigma2_sd", "sigma2_sr", "sigma2_rd"});
    if (n["sigma2_sd"]) s.sigma2_sd = read<double>(n["sigma2_sd"], "stats.sigma2_sd");
    if (n["sigma2_sr"]) s.sigma2_sr = read<double>(n["sigma2_sr"], "stats.sigma2_sr");
    if (n["sigma2_rd"]) s.sigma2_rd = read<double>(n["sigma2_rd"], "stats.sigma2_rd");
}

void parse_solver(const YAML::Node& n, SolverConfig& s) {
    reject_unknown(n, "solver",
                   {"bisection_tol", "kkt_tol", "oracle_grad_tol", "max_iters", "recursion_variant"});
    if (n["bisection_tol"]) s.bisection_tol = read<double>(n["bisection_tol"], "solver.bisection_tol");
    if (n["kkt_tol"]) s.kkt_tol = read<double>(n["kkt_tol"], "solver.kkt_tol");
    if (n["oracle_grad_tol"]) {
        s.oracle_grad_tol = read<double>(n["oracle_grad_tol"], "solver.oracle_grad_tol");
    }
    if (n["max_iters"]) s.max_iters = read<int>(n["max_iters"], "solver.max_iters");
    if (n["recursion_variant"]) {
        s.recursion_variant = parse_recursion_variant(
            read<std::string>(n["recursion_variant"], "solver.recursion_variant"));
    }
}

void parse_sim(const YAML::Node& n, SimConfig& s) {
    reject_unknown(n, "sim", {"trials", "seed", "workers"});
    if (n["trials"]) {
        // yaml-cpp rejects "1e7" for integers; accept it through double.
        const double t = read<double>(n["trials"], "sim.trials");
        if (!(t >= 1.0 && t < 1.8e19 && t == std::floor(t))) {
            throw InvalidArgument("sim.trials", "must be a positive integer");
        }
        s.trials = static_cast<std::uint64_t>(t);
    }
    if (n["seed"]) s.seed = read<std::uint64_t>(n["seed"], "sim.seed");
    if (n["workers"]) s.workers = read<unsigned>(n["workers"], "sim.workers");
}

}  // namespace

void RunConfig::validate() const {
    scenario.validate();
    stats.validate();
    solver.validate();
    sim.validate();
    if (schedule) schedule->validate(scenario);
}

bool RunConfig::operator==(const RunConfig& o) const {
    const auto sched = [](const std::optional<PowerSchedule>& s) {
        return s ? s->p : std::vector<double>{};
    };
    return scenario == o.scenario && stats == o.stats && solver == o.solver && sim == o.sim &&
           output_path == o.output_path && schedule.has_value() == o.schedule.has_value() &&
           sched(schedule) == sched(o.schedule);
}

RunConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw InvalidArgument("config", std::string("malformed YAML: ") + e.what());
    }
    RunConfig cfg;
    if (root.IsNull()) {
        cfg.validate();
        return cfg;
    }
    reject_unknown(root, "", {"scenario", "stats", "solver", "sim", "output_path", "schedule"});
    if (root["scenario"]) parse_scenario(root["scenario"], cfg.scenario);
    if (root["stats"]) parse_stats(root["stats"], cfg.stats);
    if (root["solver"]) parse_solver(root["solver"], cfg.solver);
    if (root["sim"]) parse_sim(root["sim"], cfg.sim);
    if (root["output_path"]) cfg.output_path = read<std::string>(root["output_path"], "output_path");
    if (root["schedule"]) {
        cfg.schedule = PowerSchedule{read<std::vector<double>>(root["schedule"], "schedule")};
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("--config", "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;

    e << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "M" << YAML::Value << c.scenario.rounds;
    e << YAML::Key << "R_npcu" << YAML::Value << c.scenario.rate;
    e << YAML::Key << "eta" << YAML::Value << YAML::Flow << c.scenario.eta;
    e << YAML::Key << "target_eps" << YAML::Value << c.scenario.target_eps;
    e << YAML::Key << "rate_schedule" << YAML::Value
      << std::string(to_string(c.scenario.rate_schedule));
    e << YAML::EndMap;

    e << YAML::Key << "stats" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "sigma2_sd" << YAML::Value << c.stats.sigma2_sd;
    e << YAML::Key << "sigma2_sr" << YAML::Value << c.stats.sigma2_sr;
    e << YAML::Key << "sigma2_rd" << YAML::Value << c.stats.sigma2_rd;
    e << YAML::EndMap;

    e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "bisection_tol" << YAML::Value << c.solver.bisection_tol;
    e << YAML::Key << "kkt_tol" << YAML::Value << c.solver.kkt_tol;
    e << YAML::Key << "oracle_grad_tol" << YAML::Value << c.solver.oracle_grad_tol;
    e << YAML::Key << "max_iters" << YAML::Value << c.solver.max_iters;
    e << YAML::Key << "recursion_variant" << YAML::Value
      << std::string(to_string(c.solver.recursion_variant));
    e << YAML::EndMap;

    e << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "trials" << YAML::Value << c.sim.trials;
    e << YAML::Key << "seed" << YAML::Value << c.sim.seed;
    e << YAML::Key << "workers" << YAML::Value << c.sim.workers;
    e << YAML::EndMap;

    if (!c.output_path.empty()) e << YAML::Key << "output_path" << YAML::Value << c.output_path;
    if (c.schedule) e << YAML::Key << "schedule" << YAML::Value << YAML::Flow << c.schedule->p;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}  // namespace afarq::cli
