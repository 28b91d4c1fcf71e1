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

#include "wcl/stats.hpp"

#include <cstdlib>
#include <string>

#include "wcl/error.hpp"

namespace wcl {

double compensated_mean(std::span<const double> x) {
  if (x.empty()) throw ConfigError("mean of an empty sample");
  CompensatedSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

Estimate mean_estimate(std::span<const double> x) {
  if (x.size() < 2) throw ConfigError("mean_estimate needs at least two samples");
  const double m = compensated_mean(x);
  CompensatedSum ss;
  for (double v : x) ss.add((v - m) * (v - m));
  const double n = static_cast<double>(x.size());
  const double var = ss.value() / (n - 1.0);
  return {m, std::sqrt(var / n), x.size()};
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  return covariance_estimate(x, y).value;
}

Estimate covariance_estimate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("covariance: sample sizes differ");
  if (x.size() < 3) throw ConfigError("covariance needs at least three samples");
  const double mx = compensated_mean(x);
  const double my = compensated_mean(y);
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  const Estimate pe = mean_estimate(prod);
  const double n = static_cast<double>(x.size());
  return {pe.value * n / (n - 1.0), pe.std_error, x.size()};
}

Estimate ratio_estimate(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw ConfigError("ratio_estimate: sample sizes differ");
  if (num.size() < 2) throw ConfigError("ratio_estimate needs at least two samples");
  const double mn = compensated_mean(num);
  const double md = compensated_mean(den);
  if (md == 0.0) throw DiagnosticError("ratio_estimate: denominator mean is zero");
  const double r = mn / md;
  // Linearisation: r_hat - r ~ mean(num - r den) / mean(den).
  CompensatedSum ss;
  for (std::size_t i = 0; i < num.size(); ++i) {
    const double e = num[i] - r * den[i];
    ss.add(e * e);
  }
  const double n = static_cast<double>(num.size());
  const double var = ss.value() / (n - 1.0);
  return {r, std::sqrt(var / n) / std::abs(md), num.size()};
}

std::size_t worker_count() {
  if (const char* env = std::getenv("WCL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace wcl
