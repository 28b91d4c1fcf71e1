// Copyright 2026 The wcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "wcl/analytic.hpp"
#include "wcl/error.hpp"
#include "wcl/functionals.hpp"
#include "wcl/rng.hpp"
#include "wcl/stats.hpp"

namespace wcl {
namespace {

TEST(Functionals, ZeroPathValues) {
  const Path zero(TimeGrid(64), 1);
  EXPECT_NEAR(eval_functional(EndpointKernel{1.0}, zero), 0.3989422804, 1e-10);
  EXPECT_NEAR(eval_functional(LocalTime{0.01}, zero), oracle::gaussian(0.01, 0.0), 1e-12);
  EXPECT_NEAR(eval_functional(OffsetLocalTime{0.1, {0.3}}, zero), oracle::gaussian(0.1, 0.3), 1e-12);
  EXPECT_NEAR(eval_functional(SelfIntersection{0.1, {0.5}}, zero), 0.5 * oracle::gaussian(0.1, 0.5), 1e-12);
}

TEST(Functionals, Validation) {
  const Path p2(TimeGrid(16), 2);
  EXPECT_THROW(eval_functional(LocalTime{0.0}, Path(TimeGrid(16), 1)), DomainError);
  EXPECT_THROW(eval_functional(LocalTime{0.1}, p2), ConfigError);
  EXPECT_THROW(eval_functional(SelfIntersection{0.1, {0.5}}, p2), ConfigError);
  EXPECT_TRUE(spec_warning(SelfIntersection{0.1, {0.0, 0.0}}, 2).has_value());
  EXPECT_FALSE(spec_warning(SelfIntersection{0.1, {0.1, 0.0}}, 2).has_value());
  EXPECT_EQ(spec_name(OffsetLocalTime{}), "offset_local_time");
  EXPECT_DOUBLE_EQ(spec_eps(with_eps(EndpointKernel{1.0}, 0.25)), 0.25);
}

TEST(Functionals, TrapezoidWeightsSumToOne) {
  const std::vector<double> w = trapezoid_node_weights(TimeGrid(10));
  double s = 0.0;
  for (double v : w) s += v;
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(w.front(), 0.05);
}

TEST(Functionals, FamilyMatchesSingleEvaluations) {
  const TimeGrid g(64);
  const Path p = sample(BrownianMotion{2}, g, 9);
  const std::vector<double> eps = {1.0, 0.1, 0.01};
  const FunctionalSpec base = SelfIntersection{1.0, {0.4, 0.3}};
  const std::vector<double> fam = eval_functional_family(base, eps, p);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    EXPECT_NEAR(fam[i], eval_functional(with_eps(base, eps[i]), p), 1e-12 * std::abs(fam[i]));
  }
}

TEST(Functionals, InterpolatedRuleOnLinearPath) {
  // f(t) = a t, so f is exactly piecewise linear and int_0^1 p_eps(a t) dt is closed form.
  const TimeGrid g(32);
  Path p(g, 1);
  const double a = 1.3, eps = 0.01;
  for (std::size_t k = 0; k <= 32; ++k) p(k, 0) = a * g.node(k);
  const double exact = 0.5 * std::erf(a / std::sqrt(2.0 * eps)) / a;
  EXPECT_NEAR(eval_functional(LocalTime{eps}, p, QuadratureRule::gauss_legendre(400)), exact, 1e-10);
  std::vector<double> out(1);
  interpolate(p, 0.3, out);
  EXPECT_NEAR(out[0], 0.39, 1e-14);
}

TEST(Functionals, OffsetLocalTimeMeanUnderBrownianMotion) {
  const TimeGrid g(128);
  const FunctionalSpec spec = OffsetLocalTime{0.05, {0.4}};
  std::vector<double> v(4000);
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = eval_functional(spec, sample(BrownianMotion{1}, g, replica_seed(3, r)));
  const Estimate e = mean_estimate(v);
  // Node-level expectation sum c_k p_{t_k + eps}(u).
  const std::vector<double> c = trapezoid_node_weights(g);
  double exact = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) exact += c[k] * oracle::gaussian(g.node(k) + 0.05, 0.4);
  EXPECT_NEAR(e.value, exact, 4.0 * e.std_error);
}

TEST(IndicatorLocalTime, ConstantPath) {
  const Path zero(TimeGrid(256), 1);
  EXPECT_NEAR(indicator_local_time(zero, 0.0, 0.01), 50.0, 1e-9);
  EXPECT_NEAR(indicator_local_time(zero, 0.0, 1.0, TimeResolution::bridge_conditional), 0.5, 1e-12);
  EXPECT_EQ(indicator_local_time(zero, 5.0, 0.01, TimeResolution::bridge_conditional), 0.0);
  // Narrow band: the bridge leaves it, so the occupation drops below 1 / (2 eps).
  const double narrow = indicator_local_time(zero, 0.0, 0.001, TimeResolution::bridge_conditional);
  EXPECT_GT(narrow, 0.0);
  EXPECT_LT(narrow, 500.0);
  EXPECT_THROW(indicator_local_time(zero, 0.0, 0.0), DomainError);
}

TEST(IndicatorLocalTime, BridgeConditionalIsUnbiasedForBand) {
  // E of the continuous band occupation at eps: int_0^1 P(|w_t| <= eps) / (2 eps) dt.
  const double eps = 0.02;
  const double exact = oracle::midpoint(
      [eps](double t) { return std::erf(eps / std::sqrt(2.0 * t)) / (2.0 * eps); }, 0.0, 1.0, 200000);
  const TimeGrid g(256);
  std::vector<double> v(4000);
  for (std::size_t r = 0; r < v.size(); ++r) {
    v[r] = indicator_local_time(sample(BrownianMotion{1}, g, replica_seed(17, r)), 0.0, eps,
                                TimeResolution::bridge_conditional);
  }
  const Estimate e = mean_estimate(v);
  EXPECT_NEAR(e.value, exact, 4.0 * e.std_error);
}

TEST(LocalTimeField, IntegratesToOne) {
  const Path p = sample(BrownianMotion{1}, TimeGrid(256), 4);
  std::vector<double> x;
  const double dx = 0.001;
  for (double v = -4.0; v <= 4.0; v += dx) x.push_back(v);
  const std::vector<double> l = local_time_field(p, 0.05, x);
  double s = 0.0;
  for (double v : l) s += v * dx;
  EXPECT_NEAR(s, 1.0, 1e-3);
}

TEST(OccupationIdentity, ExactAtSharedDiscretization) {
  const TimeGrid g(128);
  const double coeffs[] = {0.3, -1.0, 0.5, 0.25, -0.1};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const OccupationCheck c = occupation_identity(sample(BrownianMotion{1}, g, s), 0.05, coeffs);
    EXPECT_NEAR(c.lhs, c.rhs, 1e-12 * std::abs(c.rhs));
  }
  const double too_long[6] = {};
  EXPECT_THROW(occupation_identity(Path(g, 1), 0.1, too_long), DomainError);
}

TEST(SelfIntersectionMean, MatchesMidpointOracle) {
  for (double eps : {0.1, 0.01}) {
    const double u1[] = {0.5};
    const double u2[] = {0.4, 0.3};
    EXPECT_NEAR(self_intersection_mean_bm(eps, u1), oracle::self_intersection_mean(eps, 0.25, 1), 1e-7);
    EXPECT_NEAR(self_intersection_mean_bm(eps, u2), oracle::self_intersection_mean(eps, 0.25, 2), 1e-7);
  }
}

}  // namespace
}  // namespace wcl
