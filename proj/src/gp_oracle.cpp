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

#include "afarq/gp_oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <string>

#include "afarq/error.hpp"

namespace afarq {

namespace {

using Vec = Eigen::VectorXd;

Eigen::Map<const Vec> as_vec(std::span<const double> y) {
    return {y.data(), static_cast<Eigen::Index>(y.size())};
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

GpObjective::GpObjective(std::span<const double> kappas, double eps)
    : rounds_(kappas.size()), offset_(kappas.size(), 0.0) {
    detail::require(rounds_ >= 1, "kappas", "must not be empty");
    detail::require(eps > 0.0 && eps < 1.0, "eps", "must lie in (0, 1)");
    const std::size_t n = rounds_ - 1;
    coeff_.assign(rounds_ * n, 0.0);

    double sum_log_kappa = 0.0;
    for (double k : kappas) {
        detail::require(k > 0.0 && std::isfinite(k), "kappas", "entries must be positive and finite");
        sum_log_kappa += std::log(k);
    }
    log_anchor_sum_ = 0.5 * (sum_log_kappa - std::log(eps));

    // Term m: ln P_m + ln E_{m-1} = x_m + sum_{i<m} (ln kappa_i - 2 x_i).
    double prefix = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        offset_[m] = prefix;
        coeff_[m * n + m] = 1.0;
        for (std::size_t i = 0; i < m; ++i) coeff_[m * n + i] = -2.0;
        prefix += std::log(kappas[m]);
    }
    // Last term, with x_M = C - sum y: C + sum_{i<M} ln kappa_i - 3 sum y.
    offset_[n] = log_anchor_sum_ + prefix;
    for (std::size_t i = 0; i < n; ++i) coeff_[n * n + i] = -3.0;
}

std::vector<double> GpObjective::term_weights(std::span<const double> y) const {
    const std::size_t n = dimension();
    std::vector<double> w(rounds_);
    for (std::size_t m = 0; m < rounds_; ++m) {
        double e = offset_[m];
        for (std::size_t i = 0; i < n; ++i) e += coeff_[m * n + i] * y[i];
        w[m] = std::exp(e) / static_cast<double>(rounds_);
    }
    return w;
}

double GpObjective::value(std::span<const double> y) const {
    double f = 0.0;
    for (double w : term_weights(y)) f += w;
    return f;
}

std::vector<double> GpObjective::gradient(std::span<const double> y) const {
    const std::size_t n = dimension();
    const auto w = term_weights(y);
    std::vector<double> g(n, 0.0);
    for (std::size_t m = 0; m < rounds_; ++m) {
        for (std::size_t i = 0; i < n; ++i) g[i] += w[m] * coeff_[m * n + i];
    }
    return g;
}

std::vector<double> GpObjective::hessian(std::span<const double> y) const {
    const std::size_t n = dimension();
    const auto w = term_weights(y);
    std::vector<double> h(n * n, 0.0);
    for (std::size_t m = 0; m < rounds_; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                h[i * n + j] += w[m] * coeff_[m * n + i] * coeff_[m * n + j];
            }
        }
    }
    return h;
}

std::vector<double> GpObjective::log_powers(std::span<const double> y) const {
    std::vector<double> x(y.begin(), y.end());
    double s = 0.0;
    for (double v : y) s += v;
    x.push_back(log_anchor_sum_ - s);
    return x;
}

std::vector<double> GpObjective::equal_power_point() const {
    return std::vector<double>(dimension(), log_anchor_sum_ / static_cast<double>(rounds_));
}

GpResult gp_oracle_solve(const Scenario& scenario, const ChannelStats& stats,
                         const SolverConfig& config) {
    config.validate();
    const auto kappa = outage_coefficients(scenario, stats);
    const GpObjective obj(kappa, scenario.target_eps);
    const auto n = static_cast<Eigen::Index>(obj.dimension());

    Vec y = as_vec(obj.equal_power_point());
    double f = obj.value(to_std(y));
    GpResult out;

    for (int iter = 0;; ++iter) {
        const Vec g = as_vec(obj.gradient(to_std(y)));
        out.grad_norm = n > 0 ? g.norm() / f : 0.0;
        out.iterations = iter;
        if (out.grad_norm < config.oracle_grad_tol) break;
        if (iter >= config.max_iters) {
            throw SolverError(SolverErrorKind::NoConvergence,
                              "GP oracle stopped at max_iters with relative gradient norm " +
                                  std::to_string(out.grad_norm));
        }

        const auto hess = obj.hessian(to_std(y));
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>
            H(hess.data(), n, n);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Vec dir = ldlt.info() == Eigen::Success ? Vec(-ldlt.solve(g)) : Vec(-g);
        if (!(dir.dot(g) < 0.0)) dir = -g;

        // Armijo backtracking keeps the objective monotonically decreasing.
        // Once the predicted decrease is below the rounding level of f the
        // test cannot discriminate; the full step is then taken as long as f
        // does not rise beyond rounding.
        const double slope = dir.dot(g);
        constexpr double kUlp = std::numeric_limits<double>::epsilon();
        bool accepted = false;
        if (-slope < 16.0 * kUlp * f) {
            const Vec trial = y + dir;
            const double ft = obj.value(to_std(trial));
            if (ft <= f * (1.0 + 4.0 * kUlp)) {
                y = trial;
                f = std::min(f, ft);
                accepted = true;
            }
        }
        double t = 1.0;
        for (int k = 0; k < 80 && !accepted; ++k, t *= 0.5) {
            const Vec trial = y + t * dir;
            const double ft = obj.value(to_std(trial));
            if (std::isfinite(ft) && ft <= f + 1e-4 * t * slope) {
                y = trial;
                f = ft;
                accepted = true;
            }
        }
        if (!accepted) {
            throw SolverError(SolverErrorKind::NoConvergence,
                              "GP oracle line search stalled at relative gradient norm " +
                                  std::to_string(out.grad_norm));
        }
    }

    const auto x = obj.log_powers(to_std(y));
    out.schedule.p.resize(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) out.schedule.p[m] = std::exp(x[m]);
    out.objective = f;
    return out;
}

}  // namespace afarq
