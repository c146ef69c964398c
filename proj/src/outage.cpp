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

#include "afarq/outage.hpp"

#include <cmath>
#include <string>

#include "afarq/error.hpp"

namespace afarq {

std::string_view to_string(RateSchedule s) noexcept {
    return s == RateSchedule::PaperLiteral ? "paper_literal" : "type1_constant";
}

RateSchedule parse_rate_schedule(std::string_view text) {
    if (text == "paper_literal") return RateSchedule::PaperLiteral;
    if (text == "type1_constant") return RateSchedule::TypeIConstant;
    throw InvalidArgument("scenario.rate_schedule",
                          "expected paper_literal or type1_constant (got '" +
                              std::string(text) + "')");
}

Scenario Scenario::uniform(int rounds, double eta, double target_eps, RateSchedule schedule,
                           double rate) {
    Scenario s;
    s.rounds = rounds;
    s.rate = rate;
    s.eta.assign(rounds > 0 ? static_cast<std::size_t>(rounds) : 0u, eta);
    s.target_eps = target_eps;
    s.rate_schedule = schedule;
    return s;
}

void Scenario::validate() const {
    detail::require(rounds >= 1, "scenario.M", "must be >= 1 (got " + std::to_string(rounds) + ")");
    detail::require(std::isfinite(rate) && rate > 0.0, "scenario.R_npcu",
                    "must be positive and finite (got " + std::to_string(rate) + ")");
    detail::require(eta.size() == static_cast<std::size_t>(rounds), "scenario.eta",
                    "expected " + std::to_string(rounds) + " entries (got " +
                        std::to_string(eta.size()) + ")");
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (!(std::isfinite(eta[i]) && eta[i] > 0.0)) {
            throw InvalidArgument("scenario.eta[" + std::to_string(i) + "]",
                                  "must be > 0 (got " + std::to_string(eta[i]) + ")");
        }
    }
    detail::require(target_eps > 0.0 && target_eps < 1.0, "scenario.target_eps",
                    "must lie in (0, 1) (got " + std::to_string(target_eps) + ")");
}

void PowerSchedule::validate(const Scenario& scenario) const {
    detail::require(p.size() == static_cast<std::size_t>(scenario.rounds), "schedule",
                    "expected " + std::to_string(scenario.rounds) + " powers (got " +
                        std::to_string(p.size()) + ")");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(std::isfinite(p[i]) && p[i] > 0.0)) {
            throw InvalidArgument("schedule[" + std::to_string(i) + "]",
                                  "must be positive and finite (got " + std::to_string(p[i]) + ")");
        }
    }
}

double psi_factor(double eta, const ChannelStats& stats) {
    detail::require(std::isfinite(eta) && eta > 0.0, "eta", "must be > 0");
    stats.validate();
    return (stats.sigma2_sr / eta + stats.sigma2_rd) /
           (2.0 * stats.sigma2_sd * stats.sigma2_sr * stats.sigma2_rd);
}

double phi_factor(int m, double rate, RateSchedule schedule) {
    detail::require(m >= 1, "m", "round index must be >= 1");
    detail::require(std::isfinite(rate) && rate > 0.0, "rate", "must be positive");
    return std::expm1(2.0 * round_decoding_rate(m, rate, schedule));
}

double round_decoding_rate(int m, double rate, RateSchedule schedule) {
    return schedule == RateSchedule::PaperLiteral ? rate / m : rate;
}

RoundOutage round_outage_closed_form(double p_source, double eta, double phi,
                                     const ChannelStats& stats) {
    detail::require(std::isfinite(p_source) && p_source > 0.0, "p_source", "must be positive");
    detail::require(std::isfinite(phi) && phi > 0.0, "phi", "must be positive");
    const double ratio = phi / p_source;
    const double value = psi_factor(eta, stats) * ratio * ratio;
    return {value, value < 1.0};
}

std::vector<double> outage_coefficients(const Scenario& scenario, const ChannelStats& stats) {
    scenario.validate();
    std::vector<double> kappa(scenario.eta.size());
    for (int m = 1; m <= scenario.rounds; ++m) {
        const double phi = phi_factor(m, scenario.rate, scenario.rate_schedule);
        kappa[m - 1] = psi_factor(scenario.eta[m - 1], stats) * phi * phi;
    }
    return kappa;
}

OutageBreakdown cumulative_outage(const PowerSchedule& schedule, const Scenario& scenario,
                                  const ChannelStats& stats) {
    scenario.validate();
    schedule.validate(scenario);

    OutageBreakdown out;
    out.eps_round.reserve(schedule.size());
    out.cumulative.reserve(schedule.size() + 1);
    out.cumulative.push_back(1.0);
    for (int m = 1; m <= scenario.rounds; ++m) {
        const double phi = phi_factor(m, scenario.rate, scenario.rate_schedule);
        const auto r = round_outage_closed_form(schedule.p[m - 1], scenario.eta[m - 1], phi, stats);
        if (!r.valid) out.flagged_rounds.push_back(m);
        out.eps_round.push_back(r.value);
        out.cumulative.push_back(out.cumulative.back() * r.value);
    }
    out.p_avg = average_power(schedule.p, std::span(out.cumulative).first(schedule.size()));
    return out;
}

double average_power(std::span<const double> powers, std::span<const double> reach) {
    detail::require(!powers.empty(), "powers", "must not be empty");
    detail::require(powers.size() == reach.size(), "reach", "length must match powers");
    double acc = 0.0;
    for (std::size_t m = 0; m < powers.size(); ++m) acc += powers[m] * reach[m];
    return acc / static_cast<double>(powers.size());
}

double uniform_power_for_target(std::span<const double> kappas, double eps) {
    double prod = 1.0;
    for (double k : kappas) prod *= k;
    return std::pow(prod / eps, 1.0 / (2.0 * static_cast<double>(kappas.size())));
}

PowerSchedule epa_power(const Scenario& scenario, const ChannelStats& stats) {
    const auto kappa = outage_coefficients(scenario, stats);
    const double p = uniform_power_for_target(kappa, scenario.target_eps);
    return PowerSchedule{std::vector<double>(kappa.size(), p)};
}

}  // namespace afarq
