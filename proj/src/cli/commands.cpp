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

#include "afarq/cli/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "afarq/error.hpp"
#include "afarq/gp_oracle.hpp"

namespace afarq::cli {

namespace {

double to_db(double p) { return 10.0 * std::log10(p); }

std::string eta_label(const std::vector<double>& eta) {
    if (std::all_of(eta.begin(), eta.end(), [&](double e) { return e == eta.front(); })) {
        return fmt::format("{:g}", eta.front());
    }
    std::string s;
    for (double e : eta) s += (s.empty() ? "" : ";") + fmt::format("{:g}", e);
    return s;
}

// Writes to config.output_path if set. Returns false when the file cannot be opened.
template <class Fn>
bool write_output(const RunConfig& config, std::ostream& err, Fn fn) {
    if (config.output_path.empty()) return true;
    std::ofstream f(config.output_path);
    if (!f) {
        fmt::print(err, "error: cannot write '{}'\n", config.output_path);
        return false;
    }
    fn(f);
    return true;
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::Opa ? "opa" : "epa"; }

Method parse_method(std::string_view text) {
    if (text == "opa") return Method::Opa;
    if (text == "epa") return Method::Epa;
    throw InvalidArgument("--method", "expected opa or epa (got '" + std::string(text) + "')");
}

EpsGrid EpsGrid::parse(std::string_view text) {
    EpsGrid g;
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos) {
        throw InvalidArgument("--eps-grid", "expected start:stop:points-per-decade");
    }
    try {
        g.start = std::stod(std::string(text.substr(0, a)));
        g.stop = std::stod(std::string(text.substr(a + 1, b - a - 1)));
        g.per_decade = std::stoi(std::string(text.substr(b + 1)));
    } catch (const std::exception&) {
        throw InvalidArgument("--eps-grid", "cannot parse '" + std::string(text) + "'");
    }
    detail::require(g.start < 1.0 && g.stop > 0.0 && g.stop <= g.start, "--eps-grid",
                    "need 1 > start >= stop > 0");
    detail::require(g.per_decade >= 1, "--eps-grid", "points-per-decade must be >= 1");
    return g;
}

std::vector<double> EpsGrid::values() const {
    const double hi = std::log10(start);
    const double span = (hi - std::log10(stop)) * per_decade;
    const auto n = static_cast<int>(std::floor(span + 1e-9));
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) v.push_back(std::pow(10.0, hi - static_cast<double>(k) / per_decade));
    return v;
}

SolveOutcome solve(const RunConfig& config, Method method) {
    if (method == Method::Opa) {
        auto r = opa_closed_form(config.scenario, config.stats, config.solver);
        return {std::move(r.schedule), std::move(r.breakdown), std::move(r.kkt)};
    }
    SolveOutcome s;
    s.schedule = epa_power(config.scenario, config.stats);
    s.breakdown = cumulative_outage(s.schedule, config.scenario, config.stats);
    const auto kappa = outage_coefficients(config.scenario, config.stats);
    s.kkt = kkt_residuals(s.schedule, lambda_from_anchor(s.schedule.p.back(), kappa.back()),
                          config.scenario, config.stats);
    return s;
}

bool config_usable(const RunConfig& config, std::ostream& err) {
    try {
        config.validate();
        return true;
    } catch (const InvalidArgument& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return false;
    }
}

int cmd_solve(const RunConfig& config, Method method, std::ostream& out, std::ostream& err) {
    if (!config_usable(config, err)) return kExitConfigError;
    SolveOutcome s;
    try {
        s = solve(config, method);
    } catch (const SolverError& e) {
        fmt::print(err, "solver failure ({}): {}\n", to_string(e.kind()), e.what());
        return kExitSolverFailure;
    }
    const auto& sc = config.scenario;

    fmt::print(out, "method={} variant={} M={} R={:g} eps={:g} rate_schedule={}\n",
               to_string(method),
               method == Method::Opa ? to_string(config.solver.recursion_variant) : "-", sc.rounds,
               sc.rate, sc.target_eps, to_string(sc.rate_schedule));
    fmt::print(out, "{:>5} {:>16} {:>10} {:>16} {:>14} {:>14} {:>12}\n", "round", "P_source",
               "P_dB", "P_relay", "eps_round", "E_cumulative", "dL/dP");
    for (int m = 0; m < sc.rounds; ++m) {
        const double p = s.schedule.p[m];
        fmt::print(out, "{:>5} {:>16.9g} {:>10.4f} {:>16.9g} {:>14.6e} {:>14.6e} {:>12.3e}\n",
                   m + 1, p, to_db(p), sc.eta[m] * p, s.breakdown.eps_round[m],
                   s.breakdown.cumulative[m + 1], s.kkt.stationarity_residual[m]);
    }
    fmt::print(out, "E_M={:.9e} P_avg={:.9g} ({:.4f} dB) lambda={:.9g}\n", s.breakdown.total(),
               s.breakdown.p_avg, to_db(s.breakdown.p_avg), s.kkt.lambda);
    fmt::print(out, "max|dL/dP|={:.3e} constraint_residual={:.3e}\n", s.kkt.max_abs_stationarity(),
               s.kkt.constraint_residual);
    if (!s.breakdown.valid()) {
        std::string rounds;
        for (int m : s.breakdown.flagged_rounds) rounds += (rounds.empty() ? "" : ",") + std::to_string(m);
        fmt::print(out, "warning: per-round outage formula outside its validity region in rounds {}\n",
                   rounds);
    }

    const bool ok = write_output(config, err, [&](std::ostream& f) {
        fmt::print(f, "round,p_source,p_source_db,p_relay,eps_round,cumulative_outage,kkt_residual,warning\n");
        for (int m = 0; m < sc.rounds; ++m) {
            const double p = s.schedule.p[m];
            const bool flagged = s.breakdown.eps_round[m] >= 1.0;
            fmt::print(f, "{},{:.12g},{:.9g},{:.12g},{:.12g},{:.12g},{:.6g},{}\n", m + 1, p, to_db(p),
                       sc.eta[m] * p, s.breakdown.eps_round[m], s.breakdown.cumulative[m + 1],
                       s.kkt.stationarity_residual[m], flagged ? "outside_validity" : "");
        }
    });
    return ok ? kExitOk : kExitConfigError;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, const SweepOptions& options) {
    struct Job {
        RunConfig cfg;
        Method method;
        std::string variant;
    };
    const std::vector<int> rounds =
        options.rounds.empty() ? std::vector<int>{config.scenario.rounds} : options.rounds;

    std::vector<Job> jobs;
    for (int M : rounds) {
        std::vector<std::vector<double>> eta_sets;
        if (options.etas.empty()) {
            auto eta = config.scenario.eta;
            if (static_cast<int>(eta.size()) != M) eta.assign(M, eta.front());
            eta_sets.push_back(eta);
        } else {
            for (double e : options.etas) eta_sets.emplace_back(M, e);
        }
        for (const auto& eta : eta_sets) {
            for (double eps : options.eps) {
                RunConfig cfg = config;
                cfg.scenario.rounds = M;
                cfg.scenario.eta = eta;
                cfg.scenario.target_eps = eps;
                for (Method method : options.methods) {
                    if (method == Method::Epa) {
                        jobs.push_back({cfg, method, "-"});
                        continue;
                    }
                    for (auto v : options.variants) {
                        cfg.solver.recursion_variant = v;
                        jobs.push_back({cfg, method, std::string(to_string(v))});
                    }
                }
            }
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            const auto& job = jobs[i];
            SweepRow& row = rows[i];
            row.eps = job.cfg.scenario.target_eps;
            row.method = job.method;
            row.variant = job.variant;
            row.rounds = job.cfg.scenario.rounds;
            row.eta = eta_label(job.cfg.scenario.eta);
            try {
                const auto s = solve(job.cfg, job.method);
                row.powers = s.schedule.p;
                row.p_avg = s.breakdown.p_avg;
                row.total_outage = s.breakdown.total();
                row.kkt_max_residual = s.kkt.max_abs_stationarity();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.workers,
                                                             static_cast<unsigned>(jobs.size())));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    int max_rounds = 0;
    for (const auto& r : rows) max_rounds = std::max(max_rounds, r.rounds);

    fmt::print(out, "eps,method,variant,M,eta");
    for (int m = 1; m <= max_rounds; ++m) fmt::print(out, ",P_{}", m);
    fmt::print(out, ",P_avg,E_M,kkt_max_residual,error\n");

    for (const auto& r : rows) {
        fmt::print(out, "{:.6g},{},{},{},{}", r.eps, to_string(r.method), r.variant, r.rounds, r.eta);
        for (int m = 0; m < max_rounds; ++m) {
            if (r.error.empty() && m < static_cast<int>(r.powers.size())) {
                fmt::print(out, ",{:.12g}", r.powers[m]);
            } else {
                out << ',';
            }
        }
        if (r.error.empty()) {
            fmt::print(out, ",{:.12g},{:.12g},{:.6g},\n", r.p_avg, r.total_outage, r.kkt_max_residual);
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            fmt::print(out, ",,,,\"{}\"\n", msg);
        }
    }
}

int cmd_sweep(const RunConfig& config, const SweepOptions& options, std::ostream& out,
              std::ostream& err) {
    if (!config_usable(config, err)) return kExitConfigError;
    const auto rows = run_sweep(config, options);
    if (config.output_path.empty()) {
        write_sweep_csv(rows, out);
        return kExitOk;
    }
    const bool ok = write_output(config, err, [&](std::ostream& f) { write_sweep_csv(rows, f); });
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.error.empty(); });
    fmt::print(out, "wrote {} rows ({} with solver errors) to {}\n", rows.size(), failed,
               config.output_path);
    return ok ? kExitOk : kExitConfigError;
}

int cmd_simulate(const RunConfig& config, Method method, std::ostream& out, std::ostream& err) {
    if (!config_usable(config, err)) return kExitConfigError;
    SolveOutcome s;
    try {
        s = solve(config, method);
    } catch (const SolverError& e) {
        fmt::print(err, "solver failure ({}): {}\n", to_string(e.kind()), e.what());
        return kExitSolverFailure;
    }
    const auto r = simulate_protocol(s.schedule, config.scenario, config.stats, config.sim);
    const auto ci = binomial_ci95(r.failures, r.trials);

    fmt::print(out, "method={} M={} trials={} seed={} workers={}\n", to_string(method),
               config.scenario.rounds, r.trials, config.sim.seed, config.sim.workers);
    fmt::print(out, "E_M analytic={:.6e} simulated={:.6e} 95% CI [{:.6e}, {:.6e}] failures={}\n",
               s.breakdown.total(), r.eps_hat, ci.lower, ci.upper, r.failures);
    fmt::print(out, "P_avg analytic={:.9g} simulated={:.9g}\n", s.breakdown.p_avg, r.avg_power_hat);
    for (std::size_t m = 0; m < r.attempts_histogram.size(); ++m) {
        const bool fail_bin = m + 1 == r.attempts_histogram.size();
        fmt::print(out, "  {:>8} {:>14}\n", fail_bin ? std::string("fail") : fmt::format("round {}", m + 1),
                   r.attempts_histogram[m]);
    }

    const bool ok = write_output(config, err, [&](std::ostream& f) {
        fmt::print(f, "outcome,count,fraction\n");
        for (std::size_t m = 0; m < r.attempts_histogram.size(); ++m) {
            const bool fail_bin = m + 1 == r.attempts_histogram.size();
            fmt::print(f, "{},{},{:.12g}\n", fail_bin ? std::string("fail") : std::to_string(m + 1),
                       r.attempts_histogram[m],
                       static_cast<double>(r.attempts_histogram[m]) / static_cast<double>(r.trials));
        }
    });
    return ok ? kExitOk : kExitConfigError;
}

}  // namespace afarq::cli
