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
#include <memory>
#include <set>
#include <sstream>
#include <vector>

#include "support/oracles.hpp"
#include "wcl/chaos.hpp"
#include "wcl/error.hpp"
#include "wcl/functionals.hpp"
#include "wcl/quadrature.hpp"
#include "wcl/stats.hpp"

namespace wcl {
namespace {

double binomial(int n, int k) { return oracle::factorial(n) / (oracle::factorial(k) * oracle::factorial(n - k)); }

TEST(MultiIndices, CountAndOrder) {
  EXPECT_EQ(multi_indices(0, 3).size(), 1u);
  EXPECT_EQ(multi_indices(2, 2).size(), 3u);
  for (int k = 0; k <= 6; ++k) {
    for (int d = 1; d <= 3; ++d) {
      const auto idx = multi_indices(k, d);
      EXPECT_EQ(static_cast<double>(idx.size()), binomial(k + d - 1, d - 1));
      std::set<MultiIndex> unique(idx.begin(), idx.end());
      EXPECT_EQ(unique.size(), idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        EXPECT_EQ(idx[i].order(), k);
        if (i > 0) EXPECT_GE(idx[i - 1][0], idx[i][0]);
      }
    }
  }
  EXPECT_THROW(multi_indices(31, 1), DomainError);
}

TEST(ChaosExpansion, GeneratingSumMatchesExplicitTerms) {
  const TimeGrid g(16);
  const ChaosSpec spec{0.1, {0.4, 0.3}, ChaosForm::orthogonal};
  const ChaosExpansion ex(BrownianMotion{2}, g, spec, 5);
  const Path p = sample(BrownianMotion{2}, g, 21);
  const std::vector<double> t = ex.terms(p, 5);
  for (int k = 0; k <= 5; ++k) EXPECT_NEAR(t[static_cast<std::size_t>(k)], ex.term(p, k), 1e-12);
}

TEST(ChaosExpansion, MeanTermIsDiscreteExpectation) {
  const TimeGrid g(32);
  const double eps = 0.05, u = 0.5;
  const ChaosExpansion ex(BrownianMotion{1}, g, ChaosSpec{eps, {u}}, 2);
  const double h = g.step();
  double exact = 0.0;
  for (std::size_t i = 0; i <= 32; ++i) {
    for (std::size_t k = i; k <= 32; ++k) {
      const double ci = (i == 0 || i == 32) ? 0.5 * h : h;
      const double ck = (k == 0 || k == 32) ? 0.5 * h : h;
      const double w = i == k ? 0.5 * ci * ci : ci * ck;
      exact += w * oracle::gaussian(static_cast<double>(k - i) * h + eps, u);
    }
  }
  EXPECT_NEAR(ex.mean_term(), exact, 1e-13);
  const Path p = sample(BrownianMotion{1}, g, 1);
  EXPECT_NEAR(ex.terms(p, 0)[0], exact, 1e-13);
}

TEST(ChaosExpansion, FreeFunctionsAgree) {
  const Path p = sample(BrownianMotion{1}, TimeGrid(32), 5);
  const ChaosSpec spec{0.1, {0.5}};
  const ChaosExpansion ex(BrownianMotion{1}, p.grid(), spec, 4);
  double s = 0.0;
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(chaos_term_eval(p, k, spec), ex.term(p, k), 1e-12);
    s += ex.term(p, k);
  }
  EXPECT_NEAR(chaos_partial_sum(p, 4, spec), s, 1e-12);
  EXPECT_THROW(chaos_partial_sum(p, 13, spec), DomainError);
}

TEST(ChaosExpansion, Validation) {
  const TimeGrid g(16);
  EXPECT_THROW(ChaosExpansion(SmoothStationary{}, g, ChaosSpec{}, 2), ConfigError);
  EXPECT_THROW(ChaosExpansion(BrownianMotion{2}, g, ChaosSpec{0.1, {0.5}}, 2), ConfigError);
  EXPECT_THROW(ChaosExpansion(BrownianMotion{1}, g, ChaosSpec{0.0, {0.5}}, 2), DomainError);
  const ChaosExpansion ex(BrownianMotion{1}, g, ChaosSpec{}, 2);
  EXPECT_THROW((void)ex.term(Path(TimeGrid(8), 1), 1), ConfigError);
  EXPECT_THROW((void)ex.term(Path(g, 1), 3), DomainError);
}

TEST(ChaosExpansion, HigherOrdersAreCentredAndUncorrelated) {
  const TimeGrid g(64);
  const auto s = sample_chaos(BrownianMotion{1}, g, 3, ChaosSpec{0.1, {0.5}}, MonteCarlo{3000, 8});
  std::vector<std::vector<double>> t(4, std::vector<double>(s.size()));
  for (std::size_t r = 0; r < s.size(); ++r)
    for (std::size_t k = 0; k < 4; ++k) t[k][r] = s[r].terms[k];
  for (std::size_t k = 1; k < 4; ++k) {
    const Estimate m = mean_estimate(t[k]);
    EXPECT_NEAR(m.value, 0.0, 4.0 * m.std_error);
    for (std::size_t j = k + 1; j < 4; ++j) {
      const Estimate c = covariance_estimate(t[k], t[j]);
      EXPECT_NEAR(c.value, 0.0, 4.0 * c.std_error);
    }
  }
}

TEST(ChaosExpansion, IntegratorIdentityMatchesBrownianMotion) {
  const TimeGrid g(16);
  auto op = std::make_shared<const IntegratorOperator>(IntegratorOperator::identity(16));
  const ChaosSpec spec{0.1, {0.5}};
  const ChaosExpansion a(BrownianMotion{1}, g, spec, 3), b(Integrator{op, 1}, g, spec, 3);
  const Path p = sample(BrownianMotion{1}, g, 2);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(a.term(p, k), b.term(p, k), 1e-12);
}

TEST(Bridge, TermsAndVariances) {
  EXPECT_NEAR(bridge_term(1.3, 0), 1.0 / std::sqrt(2.0 * oracle::kPi), 1e-15);
  EXPECT_EQ(bridge_term(1.3, 1), 0.0);
  EXPECT_NEAR(bridge_term(0.0, 2), 0.1994711402, 1e-10);
  EXPECT_NEAR(bridge_term_variance(0), 1.0 / (2.0 * oracle::kPi), 1e-15);
  EXPECT_NEAR(bridge_term_variance(2), 0.0795774715, 1e-10);
  EXPECT_EQ(bridge_term_variance(3), 0.0);
  // Second moments of the centred terms agree with Gauss-Hermite quadrature.
  const NodesWeights gh = gauss_hermite(60);
  for (int n = 1; n <= 12; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) s += gh.weights[i] * std::pow(bridge_term(gh.nodes[i], n), 2);
    EXPECT_NEAR(s, bridge_term_variance(n), 1e-12);
  }
}

TEST(Bridge, WeightedPartialSumsConverge) {
  const std::vector<double> m = bridge_second_moments(kMaxBridgeOrder);
  double prev = 0.0;
  for (int k = 0; k <= kMaxBridgeOrder; ++k) {
    const double s = sobolev_partial_norm(m, -1.0, k);
    EXPECT_GE(s, prev);
    prev = s;
  }
  EXPECT_LT(sobolev_partial_norm(m, -1.0, 40) / sobolev_partial_norm(m, -1.0, 39) - 1.0, 0.01);
}

TEST(Sobolev, WeightedSum) {
  const std::vector<double> m = {1.0, 0.5, 0.25};
  EXPECT_DOUBLE_EQ(sobolev_partial_norm(m, 1.0, 2), 1.0 + 1.0 + 0.75);
  EXPECT_THROW(sobolev_partial_norm(m, 1.0, 3), DomainError);
}

TEST(TermTable, CsvColumns) {
  const TimeGrid g(32);
  const ChaosSpec spec{0.1, {0.4, 0.3}};
  EXPECT_THROW(term_second_moments_mc(BrownianMotion{2}, g, 2, spec, MonteCarlo{50, 1}), ConfigError);
  const auto rows = term_second_moments_mc(BrownianMotion{2}, g, 2, spec, MonteCarlo{200, 1});
  ASSERT_EQ(rows.size(), 3u);
  std::stringstream ss;
  write_term_table_csv(rows, spec, -1.0, ss);
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  EXPECT_EQ(header, "k,estimate,std_error,n_samples,eps,u,d,gamma_weighted");
  EXPECT_EQ(first.substr(0, 2), "0,");
  EXPECT_NE(first.find(",0.4;0.3,2,"), std::string::npos);
}

}  // namespace
}  // namespace wcl
