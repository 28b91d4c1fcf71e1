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

#ifndef WCL_ANALYTIC_HPP
#define WCL_ANALYTIC_HPP

/**
 * @file analytic.hpp
 * @brief Closed-form building blocks: probabilists' Hermite polynomials,
 * Gaussian heat kernels and the scaled Hermite product basis.
 *
 * Conventions:
 *   - H_n is the probabilists' Hermite polynomial,
 *       H_0 = 1, H_1 = x, H_{n+1} = x H_n - n H_{n-1},
 *     orthogonal under the standard Gaussian with E[H_n(Z)^2] = n!.
 *   - p_eps^d(x) = (2 pi eps)^{-d/2} exp(-|x|^2 / (2 eps)) is the centered
 *     Gaussian density with covariance eps * I.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "wcl/multi_index.hpp"

namespace wcl {

inline constexpr int kMaxHermiteDegree = 60;
inline constexpr int kMaxHermiteBoundDegree = 20;
inline constexpr double kPi = 3.14159265358979323846;

/// Exponent cutoff of the heat kernel: exp(-q) for q above this is returned as 0.
inline constexpr double kHeatKernelUnderflow = 745.0;

/// H_n(x) by the three-term recurrence. Throws DomainError for n outside [0, 60].
double hermite(int n, double x);

/// Fills out[0..n_max] with H_0(x)..H_{n_max}(x). out.size() must exceed n_max.
void hermite_all(int n_max, double x, std::span<double> out);

/// a_n = max_x |H_n(x)| exp(-x^2/4), so that |H_n(x)| <= a_n exp(x^2/4).
/// Found by a dense scan followed by Brent refinement (relative 1e-8).
double hermite_bound_constant(int n);

/// n! as a double, exact for n <= 22 and correctly rounded up to 170.
double factorial(int n);

/// log(n!)
double log_factorial(int n);

struct HeatKernelParams {
  int dimension = 1;
  double variance = 1.0;

  /// Throws DomainError unless dimension >= 1 and variance > 0.
  void validate() const;
};

/// p_eps^d(x) with d = params.dimension. Requires x.size() == d.
double heat_kernel(const HeatKernelParams& params, std::span<const double> x);

/// 1-D kernel p_eps(x).
double heat_kernel(double variance, double x);

/// log p_eps^d(x) evaluated without underflow.
double log_heat_kernel(double variance, std::span<const double> x);

/// Variance of p_a * p_b, i.e. a + b.
double heat_convolve_variance(double a, double b);

/// R_n(x) = sigma^{|n|} prod_j H_{n_j}(x_j / sigma).
double product_basis_eval(const MultiIndex& index, double sigma,
                          std::span<const double> x);

/// L2(p_{sigma^2}^d dx) norm of R_n: sigma^{|n|} sqrt(prod_j n_j!).
double product_basis_norm(const MultiIndex& index, double sigma);

/// Coefficients c_0..c_n of H_n in the monomial basis, c_k multiplying x^k.
std::vector<double> hermite_coefficients(int n);

}  // namespace wcl

#endif  // WCL_ANALYTIC_HPP
