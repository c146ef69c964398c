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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "afarq/cli/config.hpp"

namespace afarq::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitConfigError = 2,
    kExitSolverFailure = 3,
};

/// Validates the config, printing "config error: ..." to err on failure.
bool config_usable(const RunConfig& config, std::ostream& err);

enum class Method { Opa, Epa };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view text);

/// Decreasing, log-spaced target grid given as "start:stop:points-per-decade".
struct EpsGrid {
    double start = 1e-1;
    double stop = 1e-9;
    int per_decade = 1;

    static EpsGrid parse(std::string_view text);
    std::vector<double> values() const;
};

/// A schedule together with everything `solve` reports about it.
struct SolveOutcome {
    PowerSchedule schedule;
    OutageBreakdown breakdown;
    KktReport kkt;
};

/// Runs the chosen allocation method. Throws SolverError on failure.
SolveOutcome solve(const RunConfig& config, Method method);

int cmd_solve(const RunConfig& config, Method method, std::ostream& out, std::ostream& err);

struct SweepOptions {
    std::vector<double> eps;
    std::vector<Method> methods{Method::Opa, Method::Epa};
    std::vector<RecursionVariant> variants{RecursionVariant::KktDerived,
                                           RecursionVariant::PaperLiteral};
    std::vector<int> rounds;   // empty: use the config's M
    std::vector<double> etas;  // empty: use the config's eta vector
    unsigned workers = 1;
};

struct SweepRow {
    double eps = 0.0;
    Method method = Method::Opa;
    std::string variant;  // "kkt", "paper", or "-" for EPA
    int rounds = 0;
    std::string eta;
    std::vector<double> powers;
    double p_avg = 0.0;
    double total_outage = 0.0;
    double kkt_max_residual = 0.0;
    std::string error;  // empty on success
};

/// Rows in grid order (M, eta, eps, method, variant) regardless of
/// how they were scheduled across workers.
std::vector<SweepRow> run_sweep(const RunConfig& config, const SweepOptions& options);

/// Header: eps,method,variant,M,eta,P_1..P_K,P_avg,E_M,kkt_max_residual,error
/// where K is the largest M in the sweep.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

int cmd_sweep(const RunConfig& config, const SweepOptions& options, std::ostream& out,
              std::ostream& err);

int cmd_simulate(const RunConfig& config, Method method, std::ostream& out, std::ostream& err);

/// Axes of the validation grid; defaults match the acceptance grid.
struct ValidationGrid {
    std::vector<int> rounds{1, 2, 3, 4};
    std::vector<double> eps{1e-3, 1e-5, 1e-7, 1e-9};
    std::vector<double> etas{0.5, 1.0, 2.0};
    std::vector<RateSchedule> schedules{RateSchedule::PaperLiteral, RateSchedule::TypeIConstant};
    bool monte_carlo = true;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    nlohmann::json document;

    bool passed() const noexcept;
};

ValidationReport run_validation(const RunConfig& config, const ValidationGrid& grid = {});

int cmd_validate(const RunConfig& config, const ValidationGrid& grid, std::ostream& out,
                 std::ostream& err);

}  // namespace afarq::cli
