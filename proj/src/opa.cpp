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

#include "afarq/opa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "afarq/bisection.hpp"
#include "afarq/error.hpp"

namespace afarq {

std::string_view to_string(RecursionVariant v) noexcept {
    return v == RecursionVariant::KktDerived ? "kkt" : "paper";
}

RecursionVariant parse_recursion_variant(std::string_view text) {
    if (text == "kkt") return RecursionVariant::KktDerived;
    if (text == "paper") return RecursionVariant::PaperLiteral;
    throw InvalidArgument("solver.recursion_variant",
                          "expected kkt or paper (got '" + std::string(text) + "')");
}

void SolverConfig::validate() const {
    detail::require(bisection_tol > 0.0, "solver.bisection_tol", "must be positive");
    detail::require(kkt_tol > 0.0, "solver.kkt_tol", "must be positive");
    detail::require(oracle_grad_tol > 0.0, "solver.oracle_grad_tol", "must be positive");
    detail::require(max_iters >= 1, "solver.max_iters", "must be >= 1");
}

double KktReport::max_abs_stationarity() const noexcept {
    double worst = 0.0;
    for (double r : stationarity_residual) worst = std::max(worst, std::abs(r));
    return worst;
}

PowerSchedule backward_recursion(double anchor, std::span<const double> kappas,
                                 RecursionVariant variant) {
    PowerSchedule s{std::vector<double>(kappas.size())};
    if (kappas.empty()) return s;
    s.p.back() = anchor;
    for (std::size_t m = kappas.size() - 1; m-- > 0;) {
        const double base = 3.0 * kappas[m] * s.p[m + 1];
        s.p[m] = variant == RecursionVariant::KktDerived ? std::cbrt(base) : std::sqrt(base);
    }
    return s;
}

double log_total_outage_from_anchor(double anchor, std::span<const double> kappas,
                                    RecursionVariant variant) {
    const auto s = backward_recursion(anchor, kappas, variant);
    double acc = 0.0;
    for (std::size_t m = 0; m < kappas.size(); ++m) {
        acc += std::log(kappas[m]) - 2.0 * std::log(s.p[m]);
    }
    return acc;
}

bool anchor_map_strictly_decreasing(std::span<const double> kappas, RecursionVariant variant,
                                    double lo, double hi, int samples) {
    const double step = std::log(hi / lo) / (samples - 1);
    double prev = log_total_outage_from_anchor(lo, kappas, variant);
    for (int i = 1; i < samples; ++i) {
        const double cur = log_total_outage_from_anchor(lo * std::exp(step * i), kappas, variant);
        if (!(cur < prev)) return false;
        prev = cur;
    }
    return true;
}

double lambda_from_anchor(double p_last, double kappa_last) {
    return p_last * p_last * p_last / (2.0 * kappa_last);
}

OpaResult opa_closed_form_unchecked(const Scenario& scenario, const ChannelStats& stats,
                                    const SolverConfig& config) {
    config.validate();
    const auto kappa = outage_coefficients(scenario, stats);
    const double eps = scenario.target_eps;

    OpaResult result;
    if (scenario.rounds == 1) {
        // The constraint alone fixes P_1.
        result.schedule.p = {uniform_power_for_target(kappa, eps)};
    } else {
        const double log_eps = std::log(eps);
        const auto log_outage = [&](double anchor) {
            return log_total_outage_from_anchor(anchor, kappa, config.recursion_variant);
        };
        const double p_epa = uniform_power_for_target(kappa, eps);
        const auto bracket = bracket_decreasing(log_outage, log_eps, p_epa * 1e-3, p_epa * 1e3,
                                                10.0, 40);
        if (!bracket) {
            throw SolverError(SolverErrorKind::InfeasibleBracket,
                              "could not bracket the anchor power for target " +
                                  std::to_string(eps));
        }
        if (!anchor_map_strictly_decreasing(kappa, config.recursion_variant, bracket->first,
                                            bracket->second)) {
            throw SolverError(SolverErrorKind::NonMonotone,
                              "total outage is not strictly decreasing in the anchor power");
        }
        const auto root = bisect_decreasing_geometric(log_outage, log_eps, bracket->first,
                                                      bracket->second, config.bisection_tol,
                                                      config.max_iters);
        if (!root.converged) {
            throw SolverError(SolverErrorKind::NoConvergence,
                              "anchor bisection did not reach tolerance within max_iters");
        }
        result.bisection_iterations = root.iterations;
        result.schedule = backward_recursion(root.root, kappa, config.recursion_variant);
    }

    result.breakdown = cumulative_outage(result.schedule, scenario, stats);
    const double lambda = lambda_from_anchor(result.schedule.p.back(), kappa.back());
    result.kkt = kkt_residuals(result.schedule, lambda, scenario, stats);
    return result;
}

OpaResult opa_closed_form(const Scenario& scenario, const ChannelStats& stats,
                          const SolverConfig& config) {
    auto result = opa_closed_form_unchecked(scenario, stats, config);
    if (!result.breakdown.valid()) {
        std::string rounds;
        for (int m : result.breakdown.flagged_rounds) {
            rounds += (rounds.empty() ? "" : ",") + std::to_string(m);
        }
        throw SolverError(SolverErrorKind::ValidityRegion,
                          "per-round outage >= 1 at the solution (rounds " + rounds + ")");
    }
    return result;
}

KktReport kkt_residuals(const PowerSchedule& schedule, double lambda, const Scenario& scenario,
                        const ChannelStats& stats) {
    const auto b = cumulative_outage(schedule, scenario, stats);
    const std::size_t M = schedule.size();

    KktReport r;
    r.lambda = lambda;
    r.mu.assign(M, 0.0);
    r.stationarity_residual.resize(M);
    r.constraint_residual = b.total() - scenario.target_eps;

    // tail = sum_{j>m} P_j E_{j-1}, accumulated from the back.
    double tail = 0.0;
    for (std::size_t m = M; m-- > 0;) {
        const double pm = schedule.p[m];
        r.stationarity_residual[m] =
            b.cumulative[m] - 2.0 * tail / pm - 2.0 * lambda * b.total() / pm;
        tail += pm * b.cumulative[m];
    }
    return r;
}

double lambda_closed_form(const Scenario& scenario, const ChannelStats& stats) {
    const auto kappa = outage_coefficients(scenario, stats);
    const int M = scenario.rounds;
    const auto p_exp = [M](int m) { return std::pow(3.0, -(M - m + 1)); };
    const auto o_exp = [M](int m) {
        double s = 0.0;
        for (int i = 1; i <= M - m; ++i) s += std::pow(3.0, -i);
        return s;
    };

    double log_num = -std::log(scenario.target_eps);
    for (double k : kappa) log_num += std::log(k);

    double log_den = 0.0;
    double outer = 0.0;
    for (int m = 1; m <= M; ++m) {
        log_den += 2.0 * p_exp(m) * std::log(2.0) + 2.0 * o_exp(m) * std::log(3.0);
        double inner = 0.0;
        for (int i = m; i <= M; ++i) inner += std::pow(3.0, -(i - m + 1)) * std::log(kappa[i - 1]);
        log_den += 2.0 * inner;
        outer += -2.0 * p_exp(m);
    }
    return std::exp(outer * (log_num - log_den));
}

}  // namespace afarq
