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

#ifndef WCL_TESTS_ORACLES_HPP
#define WCL_TESTS_ORACLES_HPP

// Reference values computed without the library's own routines: explicit
// series, brute-force midpoint sums and literal constants.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Explicit sum H_n(x) = n! sum_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m).
inline double hermite(int n, double x) {
  double s = 0.0;
  for (int m = 0; 2 * m <= n; ++m) {
    s += (m % 2 ? -1.0 : 1.0) * std::pow(x, n - 2 * m) /
         (factorial(m) * factorial(n - 2 * m) * std::pow(2.0, m));
  }
  return factorial(n) * s;
}

inline double gaussian(double var, double x) {
  return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

/// Composite midpoint rule on [a, b].
inline double midpoint(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
  return s * h;
}

/// int_0^1 (1 - tau) p^d_{tau + eps}(u) dtau with |u|^2 = u2.
inline double self_intersection_mean(double eps, double u2, int d) {
  return midpoint(
      [=](double tau) {
        const double v = tau + eps;
        return (1.0 - tau) * std::exp(-u2 / (2.0 * v)) / std::pow(2.0 * kPi * v, 0.5 * d);
      },
      0.0, 1.0, 200000);
}

/// sum_{k=n}^{m} ((k - 1/2) pi)^{-2}
inline double kl_tail(int n, int m) {
  double s = 0.0;
  for (int k = n; k <= m; ++k) s += 1.0 / std::pow((k - 0.5) * kPi, 2);
  return s;
}

/// |H_n(0)| (1 + eps)^{-(n+1)/2} / (sqrt(n!) sqrt(2 pi))
inline double endpoint_ratio(int n, double eps) {
  return std::abs(hermite(n, 0.0)) * std::pow(1.0 + eps, -(n + 1) / 2.0) /
         (std::sqrt(factorial(n)) * std::sqrt(2.0 * kPi));
}

}  // namespace oracle

#endif  // WCL_TESTS_ORACLES_HPP
