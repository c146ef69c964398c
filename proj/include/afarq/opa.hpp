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
#include <string_view>
#include <vector>

#include "afarq/fading.hpp"
#include "afarq/outage.hpp"

namespace afarq {

/// Which backward recursion links P_m to P_{m+1}.
enum class RecursionVariant {
    KktDerived,    ///< P_m = (3 kappa_m P_{m+1})^{1/3}, from the stationarity conditions
    PaperLiteral,  ///< P_m = (3 kappa_m P_{m+1})^{1/2}
};

std::string_view to_string(RecursionVariant v) noexcept;
RecursionVariant parse_recursion_variant(std::string_view text);

struct SolverConfig {
    double bisection_tol = 1e-12;   // relative width of the anchor bracket
    double kkt_tol = 1e-8;          // absolute bound on |dL/dP_m|
    double oracle_grad_tol = 1e-10; // ||grad ln F|| stop for the GP oracle
    int max_iters = 500;
    RecursionVariant recursion_variant = RecursionVariant::KktDerived;

    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// First-order optimality diagnostics for
///   L = sum_m P_m E_{m-1} + sum_m mu_m P_m + lambda (E_M - eps).
/// The 1/M of the objective is absorbed into lambda; mu is held at zero.
struct KktReport {
    double lambda = 0.0;
    std::vector<double> mu;
    std::vector<double> stationarity_residual;  // dL/dP_m
    double constraint_residual = 0.0;           // E_M - eps

    double max_abs_stationarity() const noexcept;
};

struct OpaResult {
    PowerSchedule schedule;
    KktReport kkt;
    OutageBreakdown breakdown;
    int bisection_iterations = 0;
};

/// Applies the selected recursion backward from P_M = anchor.
PowerSchedule backward_recursion(double anchor, std::span<const double> kappas,
                                 RecursionVariant variant);

/// ln E_M of the schedule produced by backward_recursion(anchor, ...).
double log_total_outage_from_anchor(double anchor, std::span<const double> kappas,
                                    RecursionVariant variant);

/// Samples ln E_M(anchor) on `samples` log-spaced points in [lo, hi] and
/// reports whether it is strictly decreasing there.
bool anchor_map_strictly_decreasing(std::span<const double> kappas, RecursionVariant variant,
                                    double lo, double hi, int samples = 65);

/// lambda implied by the last-round stationarity condition: P_M^3 / (2 kappa_M).
double lambda_from_anchor(double p_last, double kappa_last);

/// Closed-form optimal allocation. The anchor P_M is found by bisection so
/// that E_M hits the target; the rest follows from the recursion.
///
/// Throws SolverError(InfeasibleBracket) if no bracket is found,
/// SolverError(NonMonotone) if the anchor map fails the monotonicity probe,
/// and SolverError(ValidityRegion) if some eps_m >= 1 at the solution.
OpaResult opa_closed_form(const Scenario& scenario, const ChannelStats& stats,
                          const SolverConfig& config = {});

/// Same as opa_closed_form but returns solutions whose per-round outages
/// leave the validity region; check result.breakdown.valid().
OpaResult opa_closed_form_unchecked(const Scenario& scenario, const ChannelStats& stats,
                                    const SolverConfig& config = {});

/// Evaluates dL/dP_m = E_{m-1} - (2/P_m) sum_{j>m} P_j E_{j-1} - (2 lambda / P_m) E_M.
KktReport kkt_residuals(const PowerSchedule& schedule, double lambda, const Scenario& scenario,
                        const ChannelStats& stats);

/// The published closed-form expression for lambda, evaluated as printed
/// (outer exponent sum_m -2/3^{M-m+1}). Diagnostic only; compare against
/// lambda_from_anchor of the bisection solution.
double lambda_closed_form(const Scenario& scenario, const ChannelStats& stats);

}  // namespace afarq
