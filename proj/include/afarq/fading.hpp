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

#include <random>

namespace afarq {

/// Variances of the three Rayleigh links, normalized by the noise power
/// (noise at relay and destination is fixed to 1, so powers act as SNRs).
struct ChannelStats {
    double sigma2_sd = 2.0;
    double sigma2_sr = 1.0;
    double sigma2_rd = 1.0;

    /// Throws InvalidArgument unless all three variances are positive and finite.
    void validate() const;

    bool operator==(const ChannelStats&) const = default;
};

/// One realization of the channel power gains |h|^2 for a single ARQ round.
struct LinkGains {
    double g_sd = 0.0;
    double g_sr = 0.0;
    double g_rd = 0.0;

    void validate() const;
};

/// Source and relay transmit powers for one round (noise-normalized).
struct RoundPowers {
    double source = 1.0;
    double relay = 1.0;

    void validate() const;
};

/// f(x, y) = xy / (x + y + 1): effective SNR of the amplified relay path.
double relay_combining_term(double x, double y);

/// Instantaneous SNR seen after combining the direct and relayed copies,
/// i.e. P_s g_sd + f(P_s g_sr, P_r g_rd). Inputs are not validated.
inline double combined_snr(const LinkGains& g, const RoundPowers& p) noexcept {
    const double x = p.source * g.g_sr;
    const double y = p.relay * g.g_rd;
    return p.source * g.g_sd + x * y / (x + y + 1.0);
}

/// Mutual information of one AF round in nats per channel use:
/// 0.5 * ln(1 + combined_snr). The factor 1/2 accounts for the two phases.
double af_mutual_information(const LinkGains& gains, const RoundPowers& powers);

/// True iff af_mutual_information(gains, powers) < rate.
bool outage_indicator(const LinkGains& gains, const RoundPowers& powers, double rate);

/// Draws the three link gains independently. Each gain is exponential with
/// mean sigma2 (rate 1/sigma2).
class GainSampler {
public:
    explicit GainSampler(const ChannelStats& stats);

    template <class Urbg>
    LinkGains operator()(Urbg& rng) {
        return LinkGains{sd_(rng), sr_(rng), rd_(rng)};
    }

private:
    std::exponential_distribution<double> sd_;
    std::exponential_distribution<double> sr_;
    std::exponential_distribution<double> rd_;
};

template <class Urbg>
LinkGains sample_gains(const ChannelStats& stats, Urbg& rng) {
    GainSampler sampler(stats);
    return sampler(rng);
}

}  // namespace afarq
