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

#include <span>
#include <vector>

#include "afarq/opa.hpp"

namespace afarq {

/// Outage-weighted average power as a function of y = (ln P_1, ..., ln P_{M-1}).
/// ln P_M is eliminated through the constraint sum_m (ln kappa_m - 2 ln P_m) = ln eps,
/// which leaves (1/M) sum_m exp(b_m + a_m . y): convex in y.
class GpObjective {
public:
    GpObjective(std::span<const double> kappas, double eps);

    std::size_t dimension() const noexcept { return rounds_ - 1; }

    double value(std::span<const double> y) const;
    std::vector<double> gradient(std::span<const double> y) const;
    /// Row-major dimension() x dimension() Hessian.
    std::vector<double> hessian(std::span<const double> y) const;

    /// ln P_1..ln P_M for the reduced point y.
    std::vector<double> log_powers(std::span<const double> y) const;

    /// Reduced coordinates of the equal-power schedule.
    std::vector<double> equal_power_point() const;

private:
    std::vector<double> term_weights(std::span<const double> y) const;

    std::size_t rounds_;
    double log_anchor_sum_;           // ln P_M + sum_{m<M} ln P_m at feasibility
    std::vector<double> offset_;      // b_m
    std::vector<double> coeff_;       // a_m, row-major rounds_ x (rounds_-1)
};

struct GpResult {
    PowerSchedule schedule;
    double objective = 0.0;
    double grad_norm = 0.0;  // ||grad ln F|| at the returned point
    int iterations = 0;
};

/// Minimizes the average power subject to E_M = eps by damped Newton descent
/// in log variables, independent of the closed-form recursion. Each step
/// uses Armijo backtracking so the objective decreases monotonically.
/// Throws SolverError(NoConvergence) after config.max_iters steps.
GpResult gp_oracle_solve(const Scenario& scenario, const ChannelStats& stats,
                         const SolverConfig& config = {});

inline PowerSchedule gp_oracle(const Scenario& scenario, const ChannelStats& stats,
                               const SolverConfig& config = {}) {
    return gp_oracle_solve(scenario, stats, config).schedule;
}

}  // namespace afarq
