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

namespace afarq {

/// How the per-round SNR threshold phi_m depends on the round index.
enum class RateSchedule {
    PaperLiteral,   ///< phi_m = e^{2R/m} - 1
    TypeIConstant,  ///< phi_m = e^{2R} - 1 in every round
};

std::string_view to_string(RateSchedule s) noexcept;
RateSchedule parse_rate_schedule(std::string_view text);

struct Scenario {
    int rounds = 1;                 // M
    double rate = 1.0;              // R, nats per channel use
    std::vector<double> eta{1.0};   // relay/source power ratio, one per round
    double target_eps = 1e-3;
    RateSchedule rate_schedule = RateSchedule::PaperLiteral;

    static Scenario uniform(int rounds, double eta, double target_eps,
                            RateSchedule schedule = RateSchedule::PaperLiteral,
                            double rate = 1.0);

    void validate() const;

    bool operator==(const Scenario&) const = default;
};

/// Source powers P_1..P_M. Relay powers follow as eta_m * P_m.
struct PowerSchedule {
    std::vector<double> p;

    void validate(const Scenario& scenario) const;
    std::size_t size() const noexcept { return p.size(); }
};

struct OutageBreakdown {
    std::vector<double> eps_round;    // eps_1..eps_M
    std::vector<double> cumulative;   // E_0..E_M, E_0 = 1
    double p_avg = 0.0;
    std::vector<int> flagged_rounds;  // 1-based rounds with eps_m >= 1

    bool valid() const noexcept { return flagged_rounds.empty(); }
    double total() const noexcept { return cumulative.back(); }
};

/// psi(eta) = (sigma2_sr / eta + sigma2_rd) / (2 sigma2_sd sigma2_sr sigma2_rd).
double psi_factor(double eta, const ChannelStats& stats);

/// SNR threshold of round m (1-based) under the given schedule.
double phi_factor(int m, double rate, RateSchedule schedule);

/// Rate r_m whose outage threshold is phi_m, i.e. e^{2 r_m} - 1 = phi_m.
/// Equals R for TypeIConstant and R/m for PaperLiteral.
double round_decoding_rate(int m, double rate, RateSchedule schedule);

struct RoundOutage {
    double value = 0.0;
    bool valid = true;  // false when value >= 1 (outside the asymptotic regime)
};

/// High-SNR per-round outage psi(eta) * (phi / p_source)^2. Values >= 1 are
/// returned unclamped and flagged invalid.
RoundOutage round_outage_closed_form(double p_source, double eta, double phi,
                                     const ChannelStats& stats);

/// kappa_m = psi(eta_m) * phi_m^2, so that eps_m = kappa_m / P_m^2.
std::vector<double> outage_coefficients(const Scenario& scenario, const ChannelStats& stats);

OutageBreakdown cumulative_outage(const PowerSchedule& schedule, const Scenario& scenario,
                                  const ChannelStats& stats);

/// (1/M) sum_m P_m E_{m-1}. `reach` holds E_0..E_{M-1}, the probabilities
/// that round m is attempted.
double average_power(std::span<const double> powers, std::span<const double> reach);

/// Uniform power P with prod_m kappa_m / P^2 = eps.
double uniform_power_for_target(std::span<const double> kappas, double eps);

/// Equal power allocation meeting the target exactly.
PowerSchedule epa_power(const Scenario& scenario, const ChannelStats& stats);

}  // namespace afarq
