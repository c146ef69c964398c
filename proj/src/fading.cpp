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

#include "afarq/fading.hpp"

#include <cmath>
#include <string>

#include "afarq/error.hpp"

namespace afarq {

const char* to_string(SolverErrorKind kind) noexcept {
    switch (kind) {
        case SolverErrorKind::InfeasibleBracket: return "infeasible-bracket";
        case SolverErrorKind::ValidityRegion: return "validity-region";
        case SolverErrorKind::NonMonotone: return "non-monotone";
        case SolverErrorKind::NoConvergence: return "no-convergence";
    }
    return "unknown";
}

namespace {

void require_positive(double v, const char* field) {
    detail::require(std::isfinite(v) && v > 0.0, field,
                    "must be positive and finite (got " + std::to_string(v) + ")");
}

void require_nonnegative(double v, const char* field) {
    detail::require(std::isfinite(v) && v >= 0.0, field,
                    "must be non-negative and finite (got " + std::to_string(v) + ")");
}

}  // namespace

void ChannelStats::validate() const {
    require_positive(sigma2_sd, "stats.sigma2_sd");
    require_positive(sigma2_sr, "stats.sigma2_sr");
    require_positive(sigma2_rd, "stats.sigma2_rd");
}

void LinkGains::validate() const {
    require_nonnegative(g_sd, "gains.g_sd");
    require_nonnegative(g_sr, "gains.g_sr");
    require_nonnegative(g_rd, "gains.g_rd");
}

void RoundPowers::validate() const {
    require_positive(source, "powers.source");
    require_positive(relay, "powers.relay");
}

double relay_combining_term(double x, double y) {
    require_nonnegative(x, "x");
    require_nonnegative(y, "y");
    return x * y / (x + y + 1.0);
}

double af_mutual_information(const LinkGains& gains, const RoundPowers& powers) {
    gains.validate();
    powers.validate();
    return 0.5 * std::log1p(combined_snr(gains, powers));
}

bool outage_indicator(const LinkGains& gains, const RoundPowers& powers, double rate) {
    detail::require(std::isfinite(rate) && rate > 0.0, "rate", "must be positive");
    return af_mutual_information(gains, powers) < rate;
}

GainSampler::GainSampler(const ChannelStats& stats)
    : sd_((stats.validate(), 1.0 / stats.sigma2_sd)),
      sr_(1.0 / stats.sigma2_sr),
      rd_(1.0 / stats.sigma2_rd) {}

}  // namespace afarq
