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

#include "afarq/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "afarq/error.hpp"

namespace afarq {

namespace {

struct Tally {
    std::uint64_t failures = 0;
    double power_sum = 0.0;
    std::vector<std::uint64_t> histogram;
};

// Runs fn(rng, n) over every block and returns the per-block tallies in
// block order. Which thread ran a block has no effect on its tally.
template <class BlockFn>
std::vector<Tally> run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                              BlockFn fn) {
    const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<Tally> tallies(blocks);
    std::atomic<std::uint64_t> next{0};
    const auto work = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= blocks) return;
            const std::uint64_t n = std::min(kTrialsPerBlock, trials - b * kTrialsPerBlock);
            auto rng = substream(seed, b);
            tallies[b] = fn(rng, n);
        }
    };
    const auto threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
    }
    return tallies;
}

SimResult summarize(const std::vector<Tally>& tallies, std::uint64_t trials, std::size_t bins,
                    double power_scale) {
    SimResult r;
    r.trials = trials;
    r.attempts_histogram.assign(bins, 0);
    double power = 0.0;
    for (const auto& t : tallies) {
        r.failures += t.failures;
        power += t.power_sum;
        for (std::size_t i = 0; i < bins; ++i) r.attempts_histogram[i] += t.histogram[i];
    }
    r.eps_hat = static_cast<double>(r.failures) / static_cast<double>(trials);
    r.ci_halfwidth = binomial_ci95(r.failures, trials).halfwidth();
    r.avg_power_hat = power * power_scale / static_cast<double>(trials);
    return r;
}

}  // namespace

void SimConfig::validate() const {
    detail::require(trials >= 1, "sim.trials", "must be >= 1");
    detail::require(workers >= 1, "sim.workers", "must be >= 1");
}

double SimResult::std_error() const noexcept {
    if (trials == 0) return 0.0;
    return std::sqrt(eps_hat * (1.0 - eps_hat) / static_cast<double>(trials));
}

ConfidenceInterval binomial_ci95(std::uint64_t failures, std::uint64_t trials) {
    detail::require(trials >= 1, "trials", "must be >= 1");
    detail::require(failures <= trials, "failures", "cannot exceed trials");
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    if (failures >= 30) {
        const double h = z * std::sqrt(p * (1.0 - p) / n);
        return {std::max(0.0, p - h), std::min(1.0, p + h)};
    }
    // Wilson score interval.
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double h = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - h), std::min(1.0, centre + h)};
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

SimResult estimate_round_outage(const RoundPowers& powers, double rate, const ChannelStats& stats,
                                const SimConfig& sim) {
    powers.validate();
    sim.validate();
    detail::require(std::isfinite(rate) && rate > 0.0, "rate", "must be positive");
    const double threshold = std::expm1(2.0 * rate);
    const GainSampler proto(stats);

    const auto tallies = run_blocks(sim.trials, sim.seed, sim.workers,
                                    [&](std::mt19937_64& rng, std::uint64_t n) {
                                        GainSampler sample = proto;
                                        Tally t;
                                        for (std::uint64_t i = 0; i < n; ++i) {
                                            if (combined_snr(sample(rng), powers) < threshold) {
                                                ++t.failures;
                                            }
                                        }
                                        t.histogram = {n - t.failures, t.failures};
                                        t.power_sum = powers.source * static_cast<double>(n);
                                        return t;
                                    });
    return summarize(tallies, sim.trials, 2, 1.0);
}

std::vector<AsymptoticPoint> validate_asymptotic(std::span<const double> p_grid, double eta,
                                                 double rate, const ChannelStats& stats,
                                                 const SimConfig& sim) {
    sim.validate();
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        detail::require(p_grid[i] > p_grid[i - 1], "p_grid", "must be strictly increasing");
    }
    const double phi = std::expm1(2.0 * rate);

    std::vector<AsymptoticPoint> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        AsymptoticPoint pt;
        pt.power = p;
        const auto formula = round_outage_closed_form(p, eta, phi, stats);
        pt.eps_formula = formula.value;
        pt.formula_valid = formula.valid;

        SimConfig cfg = sim;
        if (formula.valid) {
            cfg.trials = std::max<std::uint64_t>(
                sim.trials, static_cast<std::uint64_t>(std::ceil(100.0 / formula.value)));
        }
        pt.sim = estimate_round_outage(RoundPowers{p, eta * p}, rate, stats, cfg);
        pt.ratio = pt.sim.eps_hat / pt.eps_formula;
        pt.ratio_std_error = pt.sim.std_error() / pt.eps_formula;
        out.push_back(pt);
    }
    return out;
}

ConvergenceVerdict assess_convergence(std::span<const AsymptoticPoint> points,
                                      double final_tolerance) {
    ConvergenceVerdict v;
    const AsymptoticPoint* first = nullptr;
    const AsymptoticPoint* prev = nullptr;
    bool no_significant_rise = true;
    for (const auto& pt : points) {
        if (!pt.formula_valid) continue;
        ++v.valid_points;
        if (!first) first = &pt;
        if (prev) {
            const double rise = std::abs(pt.ratio - 1.0) - std::abs(prev->ratio - 1.0);
            const double se = std::hypot(pt.ratio_std_error, prev->ratio_std_error);
            if (rise > 2.0 * se) no_significant_rise = false;
        }
        prev = &pt;
    }
    if (!prev) return v;
    v.final_abs_error = std::abs(prev->ratio - 1.0);
    v.final_within_tolerance = v.final_abs_error < final_tolerance;
    v.trend_decreasing = v.valid_points >= 2 && no_significant_rise &&
                         v.final_abs_error < std::abs(first->ratio - 1.0);
    return v;
}

SimResult simulate_protocol(const PowerSchedule& schedule, const Scenario& scenario,
                            const ChannelStats& stats, const SimConfig& sim) {
    scenario.validate();
    schedule.validate(scenario);
    sim.validate();
    const std::size_t M = schedule.size();

    std::vector<RoundPowers> powers(M);
    std::vector<double> threshold(M);
    for (std::size_t m = 0; m < M; ++m) {
        powers[m] = RoundPowers{schedule.p[m], scenario.eta[m] * schedule.p[m]};
        threshold[m] = phi_factor(static_cast<int>(m) + 1, scenario.rate, scenario.rate_schedule);
    }
    const GainSampler proto(stats);

    const auto tallies = run_blocks(
        sim.trials, sim.seed, sim.workers, [&](std::mt19937_64& rng, std::uint64_t n) {
            GainSampler sample = proto;
            Tally t;
            t.histogram.assign(M + 1, 0);
            for (std::uint64_t i = 0; i < n; ++i) {
                std::size_t m = 0;
                for (; m < M; ++m) {
                    t.power_sum += powers[m].source;
                    if (!(combined_snr(sample(rng), powers[m]) < threshold[m])) break;
                }
                ++t.histogram[m];
                if (m == M) ++t.failures;
            }
            return t;
        });
    return summarize(tallies, sim.trials, M + 1, 1.0 / static_cast<double>(M));
}

SlopeEstimate exponential_cdf_slope(double rate_lambda, double g, const SimConfig& sim) {
    sim.validate();
    detail::require(rate_lambda > 0.0, "rate_lambda", "must be positive");
    detail::require(g > 0.0, "g", "must be positive");
    const std::exponential_distribution<double> proto(rate_lambda);
    const auto tallies = run_blocks(sim.trials, sim.seed, sim.workers,
                                    [&](std::mt19937_64& rng, std::uint64_t n) {
                                        auto draw = proto;
                                        Tally t;
                                        for (std::uint64_t i = 0; i < n; ++i) {
                                            if (draw(rng) < g) ++t.failures;
                                        }
                                        t.histogram = {n - t.failures, t.failures};
                                        return t;
                                    });
    const auto r = summarize(tallies, sim.trials, 2, 0.0);
    return {r.eps_hat / g, r.std_error() / g};
}

}  // namespace afarq
