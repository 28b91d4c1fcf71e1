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
#include <limits>
#include <vector>

#include "support/oracles.hpp"
#include "wcl/analytic.hpp"
#include "wcl/error.hpp"
#include "wcl/quadrature.hpp"

namespace wcl {
namespace {

TEST(Hermite, LowOrderValues) {
  EXPECT_DOUBLE_EQ(hermite(0, 3.7), 1.0);
  EXPECT_DOUBLE_EQ(hermite(1, -2.5), -2.5);
  EXPECT_DOUBLE_EQ(hermite(2, 0.0), -1.0);
  EXPECT_DOUBLE_EQ(hermite(3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite(4, 0.0), 3.0);
}

TEST(Hermite, MatchesExplicitSeries) {
  for (int n = 0; n <= 10; ++n) {
    for (double x = -4.0; x <= 4.0; x += 0.125) {
      const double ref = oracle::hermite(n, x);
      EXPECT_NEAR(hermite(n, x), ref, 1e-9 * std::max(1.0, std::abs(ref))) << n << " " << x;
    }
  }
}

TEST(Hermite, CoefficientsReproduceValues) {
  for (int n = 0; n <= 10; ++n) {
    const std::vector<double> c = hermite_coefficients(n);
    ASSERT_EQ(c.size(), static_cast<std::size_t>(n + 1));
    for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
      double v = 0.0;
      for (int k = n; k >= 0; --k) v = v * x + c[static_cast<std::size_t>(k)];
      EXPECT_NEAR(v, hermite(n, x), 1e-9 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST(Hermite, AllOrdersAgreeWithSingle) {
  std::vector<double> out(13);
  hermite_all(12, 1.7, out);
  for (int n = 0; n <= 12; ++n) EXPECT_DOUBLE_EQ(out[static_cast<std::size_t>(n)], hermite(n, 1.7));
}

TEST(Hermite, DomainErrors) {
  EXPECT_THROW(hermite(-1, 0.0), DomainError);
  EXPECT_THROW(hermite(61, 0.0), DomainError);
  std::vector<double> small(3);
  EXPECT_THROW(hermite_all(3, 0.0, small), ConfigError);
  EXPECT_THROW(hermite_bound_constant(21), DomainError);
}

TEST(HermiteBound, KnownConstants) {
  EXPECT_NEAR(hermite_bound_constant(0), 1.0, 1e-8);
  EXPECT_NEAR(hermite_bound_constant(1), std::sqrt(2.0) * std::exp(-0.5), 1e-8);
}

TEST(HermiteBound, DominatesOnDenseSample) {
  for (int n = 0; n <= 12; ++n) {
    const double a = hermite_bound_constant(n);
    for (int i = 0; i <= 4000; ++i) {
      const double x = -20.0 + 40.0 * i / 4000.0;
      EXPECT_LE(std::abs(hermite(n, x)), a * std::exp(0.25 * x * x) * (1.0 + 1e-9));
    }
  }
}

TEST(Factorial, Values) {
  EXPECT_DOUBLE_EQ(factorial(0), 1.0);
  EXPECT_DOUBLE_EQ(factorial(10), 3628800.0);
  EXPECT_NEAR(log_factorial(20), std::log(2432902008176640000.0), 1e-12);
}

TEST(HeatKernel, ReferenceValues) {
  const double z1[1] = {0.0};
  const double z2[2] = {0.0, 0.0};
  const double one[1] = {1.0};
  EXPECT_NEAR(heat_kernel(HeatKernelParams{1, 1.0}, z1), 0.3989422804, 1e-10);
  EXPECT_NEAR(heat_kernel(HeatKernelParams{2, 1.0}, z2), 0.1591549431, 1e-10);
  EXPECT_NEAR(heat_kernel(HeatKernelParams{1, 0.5}, one), 0.2075537487, 1e-10);
  EXPECT_NEAR(heat_kernel(0.3, 0.4), oracle::gaussian(0.3, 0.4), 1e-15);
}

TEST(HeatKernel, UnderflowsToZero) {
  const double far[1] = {1e3};
  EXPECT_EQ(heat_kernel(HeatKernelParams{1, 1.0}, far), 0.0);
  EXPECT_NEAR(log_heat_kernel(1.0, far), -0.5e6 - 0.5 * std::log(2.0 * oracle::kPi), 1e-6);
}

TEST(HeatKernel, RejectsBadParameters) {
  const double z[1] = {0.0};
  EXPECT_THROW(heat_kernel(HeatKernelParams{1, 0.0}, z), DomainError);
  EXPECT_THROW(heat_kernel(HeatKernelParams{0, 1.0}, z), DomainError);
  EXPECT_THROW(heat_kernel(HeatKernelParams{2, 1.0}, z), ConfigError);
}

TEST(HeatKernel, SemigroupByNumericConvolution) {
  const std::vector<std::pair<double, double>> pairs = {
      {0.1, 0.1}, {0.1, 1.0}, {1.0, 1.0}, {0.25, 0.75}, {2.0, 0.5},
      {0.01, 0.2}, {0.5, 3.0}, {1.5, 1.5}, {0.05, 0.05}};
  for (const auto& [a, b] : pairs) {
    EXPECT_DOUBLE_EQ(heat_convolve_variance(a, b), a + b);
    for (int i = 0; i < 10; ++i) {
      const double x = -3.0 + 0.6 * i;
      const double half = 12.0 * std::sqrt(std::max(a, b));
      const double v = integrate_range([&](double y) { return heat_kernel(a, x - y) * heat_kernel(b, y); },
                                       x - half, x + half, QuadratureRule::gauss_legendre(400));
      EXPECT_NEAR(v, oracle::gaussian(a + b, x), 1e-10);
    }
  }
}

TEST(ProductBasis, NormAndEvaluation) {
  EXPECT_DOUBLE_EQ(product_basis_norm(MultiIndex{2}, 1.0), std::sqrt(2.0));
  EXPECT_NEAR(product_basis_norm(MultiIndex{2, 1}, 0.5), 0.125 * std::sqrt(2.0), 1e-15);
  const double x[2] = {0.3, -1.1};
  const double sigma = 0.7;
  EXPECT_NEAR(product_basis_eval(MultiIndex{3, 2}, sigma, x),
              std::pow(sigma, 5) * oracle::hermite(3, x[0] / sigma) * oracle::hermite(2, x[1] / sigma),
              1e-13);
}

TEST(ProductBasis, OrthogonalUnderGaussian) {
  // Orthogonality of R_m, R_n in L2(p_{sigma^2}) by Gauss-Legendre on a wide box.
  const double sigma = 0.8;
  for (int m = 0; m <= 5; ++m) {
    for (int n = 0; n <= 5; ++n) {
      const double v = integrate_range(
          [&](double y) {
            const double x[1] = {y};
            return product_basis_eval(MultiIndex{m}, sigma, x) *
                   product_basis_eval(MultiIndex{n}, sigma, x) * heat_kernel(sigma * sigma, y);
          },
          -12.0 * sigma, 12.0 * sigma, QuadratureRule::gauss_legendre(200));
      const double expect = m == n ? std::pow(product_basis_norm(MultiIndex{m}, sigma), 2) : 0.0;
      EXPECT_NEAR(v, expect, 1e-10) << m << " " << n;
    }
  }
}

}  // namespace
}  // namespace wcl
