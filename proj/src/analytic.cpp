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

#include "wcl/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "wcl/error.hpp"

namespace wcl {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int n : entries_) {
    if (n < 0) throw DomainError("MultiIndex: negative entry");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

namespace {

void check_hermite_degree(int n) {
  if (n < 0 || n > kMaxHermiteDegree) {
    throw DomainError("hermite: degree " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxHermiteDegree) + "]");
  }
}

constexpr int kFactorialCache = 171;

const std::array<double, kFactorialCache>& factorial_table() {
  static const auto table = [] {
    std::array<double, kFactorialCache> t{};
    t[0] = 1.0;
    for (int n = 1; n < kFactorialCache; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

}  // namespace

double hermite(int n, double x) {
  check_hermite_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_all(int n_max, double x, std::span<double> out) {
  check_hermite_degree(n_max);
  if (out.size() <= static_cast<std::size_t>(n_max)) {
    throw ConfigError("hermite_all: output span too short");
  }
  out[0] = 1.0;
  if (n_max == 0) return;
  out[1] = x;
  for (int k = 1; k < n_max; ++k) out[k + 1] = x * out[k] - k * out[k - 1];
}

double hermite_bound_constant(int n) {
  if (n < 0 || n > kMaxHermiteBoundDegree) {
    throw DomainError("hermite_bound_constant: degree outside [0, 20]");
  }
  if (n == 0) return 1.0;
  // |H_n(x)| e^{-x^2/4} is even; its global maximum lies below sqrt(2n) + a
  // few units, so [0, 16] brackets every candidate for n <= 20.
  const auto g = [n](double x) { return std::abs(hermite(n, x)) * std::exp(-0.25 * x * x); };
  constexpr double kUpper = 16.0;
  constexpr int kScan = 16000;
  constexpr double kStep = kUpper / kScan;

  std::vector<double> values(kScan + 1);
  for (int i = 0; i <= kScan; ++i) values[i] = g(i * kStep);

  double best = 0.0;
  for (int i = 0; i <= kScan; ++i) {
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i == kScan || values[i] >= values[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = std::max(0.0, (i - 1) * kStep);
    const double hi = std::min(kUpper, (i + 1) * kStep);
    const auto neg = [&g](double x) { return -g(x); };
    const auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 50);
    best = std::max({best, -r.second, values[i]});
  }
  return best;
}

double factorial(int n) {
  if (n < 0) throw DomainError("factorial: negative argument");
  if (n >= kFactorialCache) throw DomainError("factorial: argument too large");
  return factorial_table()[n];
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

void HeatKernelParams::validate() const {
  if (dimension < 1) throw DomainError("heat kernel: dimension must be >= 1");
  if (!(variance > 0.0)) throw DomainError("heat kernel: variance must be > 0");
}

double log_heat_kernel(double variance, std::span<const double> x) {
  if (!(variance > 0.0)) throw DomainError("heat kernel: variance must be > 0");
  double sq = 0.0;
  for (double xi : x) sq += xi * xi;
  const double d = static_cast<double>(x.size());
  return -0.5 * d * std::log(2.0 * kPi * variance) - sq / (2.0 * variance);
}

double heat_kernel(const HeatKernelParams& params, std::span<const double> x) {
  params.validate();
  if (x.size() != static_cast<std::size_t>(params.dimension)) {
    throw ConfigError("heat_kernel: point dimension does not match kernel dimension");
  }
  double sq = 0.0;
  for (double xi : x) sq += xi * xi;
  const double q = sq / (2.0 * params.variance);
  if (q > kHeatKernelUnderflow) return 0.0;
  return std::pow(2.0 * kPi * params.variance, -0.5 * params.dimension) * std::exp(-q);
}

double heat_kernel(double variance, double x) {
  if (!(variance > 0.0)) throw DomainError("heat kernel: variance must be > 0");
  const double q = x * x / (2.0 * variance);
  if (q > kHeatKernelUnderflow) return 0.0;
  return std::exp(-q) / std::sqrt(2.0 * kPi * variance);
}

double heat_convolve_variance(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("heat_convolve_variance: variances must be > 0");
  return a + b;
}

double product_basis_eval(const MultiIndex& index, double sigma, std::span<const double> x) {
  if (!(sigma > 0.0)) throw DomainError("product_basis_eval: sigma must be > 0");
  if (x.size() != index.dimension()) {
    throw ConfigError("product_basis_eval: point dimension does not match index");
  }
  double value = std::pow(sigma, index.order());
  for (std::size_t j = 0; j < x.size(); ++j) value *= hermite(index[j], x[j] / sigma);
  return value;
}

double product_basis_norm(const MultiIndex& index, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("product_basis_norm: sigma must be > 0");
  double fact = 1.0;
  for (int n : index.entries()) fact *= factorial(n);
  return std::pow(sigma, index.order()) * std::sqrt(fact);
}

std::vector<double> hermite_coefficients(int n) {
  check_hermite_degree(n);
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace wcl
