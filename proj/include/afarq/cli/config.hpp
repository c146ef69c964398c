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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "afarq/fading.hpp"
#include "afarq/monte_carlo.hpp"
#include "afarq/opa.hpp"
#include "afarq/outage.hpp"

namespace afarq::cli {

/// Everything a CLI run needs. Defaults reproduce the reference setup:
/// R = 1 npcu, sigma2_sd = 2, sigma2_sr = sigma2_rd = 1.
struct RunConfig {
    Scenario scenario = Scenario::uniform(2, 1.0, 1e-5);
    ChannelStats stats;
    SolverConfig solver;
    SimConfig sim;
    std::string output_path;
    /// Optional explicit schedule, checked by `validate`.
    std::optional<PowerSchedule> schedule;

    void validate() const;

    bool operator==(const RunConfig&) const;
};

/// Parses the YAML config format:
///
///   scenario: { M, R_npcu, eta (scalar or list), target_eps, rate_schedule }
///   stats:    { sigma2_sd, sigma2_sr, sigma2_rd }
///   solver:   { bisection_tol, kkt_tol, oracle_grad_tol, max_iters, recursion_variant }
///   sim:      { trials, seed, workers }
///   output_path: PATH
///   schedule: [P_1, ..., P_M]
///
/// Missing keys keep their defaults. Throws InvalidArgument naming the
/// offending key on unknown keys, bad types or failed validation.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Emits a config that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

}  // namespace afarq::cli
