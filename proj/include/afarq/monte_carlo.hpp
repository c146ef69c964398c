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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "afarq/fading.hpp"
#include "afarq/outage.hpp"

namespace afarq {

struct SimConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

struct SimResult {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double eps_hat = 0.0;
    double ci_halfwidth = 0.0;   // 95%
    double avg_power_hat = 0.0;  // protocol mode only
    // Entry m-1 counts packets delivered in round m; the last entry counts failures.
    std::vector<std::uint64_t> attempts_histogram;

    /// sqrt(eps_hat (1 - eps_hat) / trials).
    double std_error() const noexcept;

    bool operator==(const SimResult&) const = default;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;

    double halfwidth() const noexcept { return 0.5 * (upper - lower); }
};

/// 95% interval for a binomial proportion: normal approximation when at
/// least 30 failures were seen, Wilson score interval otherwise.
ConfidenceInterval binomial_ci95(std::uint64_t failures, std::uint64_t trials);

/// Trials are split into fixed-size blocks; block b always draws from
/// substream(seed, b), so results do not depend on the worker count.
inline constexpr std::uint64_t kTrialsPerBlock = std::uint64_t{1} << 16;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t block);

/// Empirical outage of a single round with fresh gains per trial.
SimResult estimate_round_outage(const RoundPowers& powers, double rate, const ChannelStats& stats,
                                const SimConfig& sim);

struct AsymptoticPoint {
    double power = 0.0;
    double eps_formula = 0.0;
    bool formula_valid = true;  // eps_formula < 1
    SimResult sim;
    double ratio = 0.0;         // eps_hat / eps_formula
    double ratio_std_error = 0.0;
};

/// Compares empirical and closed-form round outage along an increasing
/// grid of source powers, with relay power eta * P and threshold e^{2R} - 1.
/// Each valid point uses max(sim.trials, ceil(100 / eps_formula)) trials.
std::vector<AsymptoticPoint> validate_asymptotic(std::span<const double> p_grid, double eta,
                                                 double rate, const ChannelStats& stats,
                                                 const SimConfig& sim);

struct ConvergenceVerdict {
    bool trend_decreasing = false;
    double final_abs_error = 0.0;  // |ratio - 1| at the last valid point
    bool final_within_tolerance = false;
    std::size_t valid_points = 0;
};

/// "Decreasing in trend": |ratio - 1| never rises between consecutive
/// valid points by more than two combined standard errors, and ends below
/// where it started.
ConvergenceVerdict assess_convergence(std::span<const AsymptoticPoint> points,
                                      double final_tolerance = 0.05);

/// Simulates the full M-round Type-I protocol. Each round draws fresh gains,
/// transmits (P_m, eta_m P_m) and succeeds when the mutual information
/// reaches the round's decoding rate (see round_decoding_rate). Failed copies
/// are discarded. avg_power_hat is the mean of sum_{used rounds} P_m / M.
SimResult simulate_protocol(const PowerSchedule& schedule, const Scenario& scenario,
                            const ChannelStats& stats, const SimConfig& sim);

struct SlopeEstimate {
    double ratio = 0.0;  // P^(X < g) / g
    double std_error = 0.0;
};

/// Small-argument slope of the exponential CDF: estimates P(X < g) / g for
/// X ~ Exp(rate_lambda), which tends to rate_lambda as g -> 0.
SlopeEstimate exponential_cdf_slope(double rate_lambda, double g, const SimConfig& sim);

}  // namespace afarq
