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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "afarq/error.hpp"
#include "afarq/gp_oracle.hpp"
#include "oracles.hpp"

using namespace afarq;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> kappas_for(const Scenario& sc)
{
    return outage_coefficients(sc, ChannelStats{});
}

}  // namespace

TEST_CASE("reduced point always satisfies the constraint", "[gp]")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.5);
    for (int M : {1, 2, 3, 5}) {
        const auto sc = Scenario::uniform(M, 1.3, 1e-6);
        const auto k = kappas_for(sc);
        const GpObjective obj(k, 1e-6);
        REQUIRE(obj.dimension() == static_cast<std::size_t>(M - 1));
        for (int t = 0; t < 50; ++t) {
            std::vector<double> y(M - 1);
            for (auto& v : y) v = 3.0 + n(rng);
            const auto x = obj.log_powers(y);
            double log_e = 0.0;
            for (int m = 0; m < M; ++m) log_e += std::log(k[m]) - 2.0 * x[m];
            REQUIRE_THAT(log_e, WithinRel(std::log(1e-6), 1e-12));

            ref::Problem pr{sc.eta, 1.0, true, 1e-6};
            std::vector<double> p(M);
            for (int m = 0; m < M; ++m) p[m] = std::exp(x[m]);
            REQUIRE_THAT(obj.value(y), WithinRel(pr.p_avg(p), 1e-12));
        }
    }
}

TEST_CASE("gradient and Hessian match central differences", "[gp][property]")
{
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int M : {2, 3, 4}) {
        for (auto sched : {RateSchedule::PaperLiteral, RateSchedule::TypeIConstant}) {
            const auto sc = Scenario::uniform(M, 0.8, 1e-5, sched);
            const GpObjective obj(kappas_for(sc), 1e-5);
            const std::size_t d = obj.dimension();
            for (int t = 0; t < 20; ++t) {
                auto y = obj.equal_power_point();
                for (auto& v : y) v += 0.5 * n(rng);
                const auto g = obj.gradient(y);
                const auto H = obj.hessian(y);
                for (std::size_t i = 0; i < d; ++i) {
                    const double h = 1e-5;
                    auto yp = y, ym = y;
                    yp[i] += h;
                    ym[i] -= h;
                    const double fd = (obj.value(yp) - obj.value(ym)) / (2 * h);
                    REQUIRE(std::abs(fd - g[i]) <= 1e-6 * std::max(std::abs(g[i]), 1e-3 * obj.value(y)));

                    const auto gp = obj.gradient(yp), gm = obj.gradient(ym);
                    for (std::size_t j = 0; j < d; ++j) {
                        const double fdh = (gp[j] - gm[j]) / (2 * h);
                        REQUIRE(std::abs(fdh - H[i * d + j]) <= 1e-6 * std::max(std::abs(H[i * d + j]), 1e-3 * obj.value(y)));
                    }
                }
            }
        }
    }
}

TEST_CASE("single round is constraint determined", "[gp]")
{
    const auto sc = Scenario::uniform(1, 1.0, 1e-3);
    const auto r = gp_oracle_solve(sc, ChannelStats{});
    const double phi = ref::phi(1, 1.0, true);
    CHECK_THAT(r.schedule.p[0], WithinRel(phi * std::sqrt(ref::psi(1.0) / 1e-3), 1e-10));
    CHECK(r.iterations == 0);
}

TEST_CASE("oracle agrees with the closed form", "[gp][oracle]")
{
    const ChannelStats s;
    for (int M : {2, 3}) {
        for (double eps : {1e-3, 1e-6, 1e-9}) {
            for (double eta : {1.0, 2.0}) {
                const auto sc = Scenario::uniform(M, eta, eps);
                const auto gp = gp_oracle_solve(sc, s);
                const auto cf = opa_closed_form(sc, s);
                INFO("M=" << M << " eps=" << eps << " eta=" << eta);
                CHECK(ref::max_rel_diff(gp.schedule.p, cf.schedule.p) < 1e-6);
                CHECK(gp.grad_norm < SolverConfig{}.oracle_grad_tol);
                // beats the equal split
                const double epa = cumulative_outage(epa_power(sc, s), sc, s).p_avg;
                CHECK(gp.objective < epa);
            }
        }
    }
}

TEST_CASE("oracle reports non-convergence", "[gp]")
{
    SolverConfig c;
    c.max_iters = 1;
    c.oracle_grad_tol = 1e-15;
    try {
        (void)gp_oracle_solve(Scenario::uniform(3, 1.0, 1e-9), ChannelStats{}, c);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.kind() == SolverErrorKind::NoConvergence);
    }
}

TEST_CASE("oracle input validation", "[gp]")
{
    const std::vector<double> k{1.0, -2.0};
    CHECK_THROWS_AS(GpObjective(k, 1e-3), InvalidArgument);
    const std::vector<double> ok{1.0, 2.0};
    CHECK_THROWS_AS(GpObjective(ok, 0.0), InvalidArgument);
    CHECK_THROWS_AS(GpObjective(std::vector<double>{}, 1e-3), InvalidArgument);
}
