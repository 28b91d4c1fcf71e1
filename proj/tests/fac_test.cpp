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
#include <sstream>
#include <vector>

#include "json.hpp"
#include "support/oracles.hpp"
#include "wcl/error.hpp"
#include "wcl/fac.hpp"
#include "wcl/quadrature.hpp"

namespace wcl {
namespace {

TEST(PolyFunctional, ConstructionAndValidation) {
  const PolyFunctional h = PolyFunctional::hermite(4);
  EXPECT_EQ(h.degree(), 4);
  EXPECT_EQ(h.evaluations().size(), 1u);
  EXPECT_THROW(PolyFunctional::hermite(9), DomainError);
  EXPECT_THROW(PolyFunctional({Evaluation{}}, {Monomial{{1, 1}, 1.0}}), DomainError);
  EXPECT_THROW(PolyFunctional({Evaluation{}}, {Monomial{{2}, 0.0}}), DomainError);
  EXPECT_THROW(PolyFunctional({Evaluation{}}, {}), DomainError);
  EXPECT_THROW(PolyFunctional({Evaluation{}}, {Monomial{{9}, 1.0}}), DomainError);
}

TEST(PolyFunctional, Evaluation) {
  const TimeGrid g(4);
  Path p(g, 2);
  p(2, 0) = 2.0;
  p(4, 1) = -1.0;
  const PolyFunctional q({Evaluation{0.5, 0}, Evaluation{1.0, 1}}, {Monomial{{2, 1}, 3.0}, Monomial{{0, 0}, 1.0}});
  EXPECT_DOUBLE_EQ(eval_poly(q, p), 3.0 * 4.0 * -1.0 + 1.0);
  EXPECT_DOUBLE_EQ(eval_poly(PolyFunctional::hermite(3, 0.5), p), oracle::hermite(3, 2.0));
  EXPECT_DOUBLE_EQ(eval_poly(PolyFunctional::combine(2.0, PolyFunctional::constant(1.0), -1.0, q), p),
                   2.0 - (-11.0));
  EXPECT_DOUBLE_EQ(eval_poly(q.scaled(0.5), p), 0.5 * -11.0);
  const PolyFunctional off({Evaluation{0.3, 0}}, {Monomial{{1}, 1.0}});
  EXPECT_THROW(eval_poly(off, p), ConfigError);
}

TEST(RandomPoly, DeterministicAndWithinLimits) {
  const TimeGrid g(16);
  const PolyFunctional a = random_poly(g, 2, 4, 99), b = random_poly(g, 2, 4, 99);
  EXPECT_EQ(a.monomials().size(), b.monomials().size());
  EXPECT_LE(a.degree(), 4);
  EXPECT_LE(a.evaluations().size(), 4u);
  for (const auto& e : a.evaluations()) {
    EXPECT_TRUE(g.contains(e.time));
    EXPECT_GT(e.time, 0.0);
    EXPECT_LT(e.coord, 2u);
  }
}

TEST(EndpointRatio, ClosedForm) {
  for (int n : {0, 2, 4, 6}) {
    for (double eps : {0.0, 0.01, 0.1, 1.0}) {
      EXPECT_NEAR(endpoint_hermite_ratio(n, eps), oracle::endpoint_ratio(n, eps), 1e-14);
    }
  }
  EXPECT_NEAR(endpoint_hermite_ratio(0, 1.0), 0.2820947918, 1e-10);
  EXPECT_EQ(endpoint_hermite_ratio(3, 0.1), 0.0);
  EXPECT_THROW(endpoint_hermite_ratio(2, -1.0), DomainError);
}

TEST(FacRatio, MonteCarloMatchesEndpointOracle) {
  const TimeGrid g(16);
  for (int n : {0, 2}) {
    const Estimate r = fac_ratio(BrownianMotion{1}, g, EndpointKernel{0.1}, PolyFunctional::hermite(n),
                                 MonteCarlo{20000, 5});
    EXPECT_NEAR(r.value, endpoint_hermite_ratio(n, 0.1), 4.0 * r.std_error);
  }
}

TEST(FacRatio, DiagnosticWhenNormIsNoise) {
  const std::vector<double> phi = {1.0, 1.0, 1.0};
  const std::vector<double> poly = {0.0, 0.0, 0.0};
  EXPECT_THROW(fac_ratio_from_samples(phi, poly), DiagnosticError);
}

TEST(FacStudy, Preconditions) {
  const TimeGrid g(16);
  const std::vector<double> two = {1.0, 0.1};
  const std::vector<double> up = {0.1, 1.0, 0.01};
  const std::vector<double> ok = {1.0, 0.1, 0.01};
  const MonteCarlo mc{200, 1};
  EXPECT_THROW(uniform_fac_study(BrownianMotion{1}, g, EndpointKernel{}, two, 2, 20, mc), ConfigError);
  EXPECT_THROW(uniform_fac_study(BrownianMotion{1}, g, EndpointKernel{}, up, 2, 20, mc), ConfigError);
  EXPECT_THROW(uniform_fac_study(BrownianMotion{1}, g, EndpointKernel{}, ok, 2, 5, mc), ConfigError);
}

TEST(FacStudy, ReportSerialisation) {
  const TimeGrid g(16);
  const std::vector<double> eps = {1.0, 0.1, 0.01};
  const FacStudyReport rep = uniform_fac_study(BrownianMotion{1}, g, EndpointKernel{}, eps, 2, 20, MonteCarlo{2000, 3});
  ASSERT_EQ(rep.max_ratio.size(), 3u);
  ASSERT_TRUE(rep.oracle_bound.has_value());
  EXPECT_NEAR(*rep.oracle_bound, 1.0 / std::sqrt(4.0 * oracle::kPi), 1e-12);
  for (double v : rep.max_ratio) EXPECT_TRUE(std::isfinite(v));
  std::stringstream js, cs;
  write_fac_report_json(rep, js);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j.at("family"), "endpoint_kernel");
  write_fac_report_csv(rep, cs);
  std::string header;
  std::getline(cs, header);
  EXPECT_EQ(header, "eps,max_ratio,max_ratio_se,max_normalized_ratio,argmax");
}

TEST(KarhunenLoeve, BasisIsOrthonormal) {
  for (int j = 1; j <= 6; ++j) {
    for (int k = 1; k <= 6; ++k) {
      const double v = integrate_interval([&](double t) { return kl_basis(j, t) * kl_basis(k, t); },
                                          QuadratureRule::gauss_legendre(64));
      EXPECT_NEAR(v, j == k ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(kl_eigenvalue(1), 4.0 / (oracle::kPi * oracle::kPi), 1e-15);
}

TEST(KarhunenLoeve, EigenvaluesSumToBrownianVariance) {
  // sum_k lambda_k = int_0^1 t dt = 1/2
  EXPECT_NEAR(oracle::kl_tail(1, 200000), 0.5, 1e-5);
  double s = 0.0;
  for (int k = 1; k <= 2000; ++k) s += kl_eigenvalue(k);
  EXPECT_NEAR(s, oracle::kl_tail(1, 2000), 1e-14);
}

TEST(TailDiagnostic, UnweightedBrownianTails) {
  const TimeGrid g(256);
  const std::vector<double> eps = {1.0, 0.1};
  const TailMomentReport r = tail_moment_diagnostic(BrownianMotion{1}, g, EndpointKernel{}, eps, 8, MonteCarlo{4000, 2});
  ASSERT_EQ(r.tails.size(), 3u);
  for (int n = 1; n <= 8; ++n) {
    const Estimate& t = r.tails[0][static_cast<std::size_t>(n - 1)];
    EXPECT_NEAR(t.value, oracle::kl_tail(n, 8), 4.0 * t.std_error) << n;
  }
}

TEST(HolderDiagnostic, UnweightedExponent) {
  const TimeGrid g(256);
  const std::vector<double> eps = {1.0};
  const std::vector<TimePair> pairs = {{0.25, 0.25 + 1.0 / 32}, {0.25, 0.375}, {0.25, 0.75}};
  const HolderReport r = holder_moment_diagnostic(BrownianMotion{1}, g, EndpointKernel{}, eps, 1, pairs, MonteCarlo{4000, 2});
  EXPECT_NEAR(r.exponent[0].value, 1.0, 4.0 * r.exponent[0].std_error);
  EXPECT_THROW(holder_moment_diagnostic(BrownianMotion{1}, g, EndpointKernel{}, eps, 3, pairs, MonteCarlo{4000, 2}),
               DomainError);
}

}  // namespace
}  // namespace wcl
