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

#ifndef WCL_STATS_HPP
#define WCL_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace wcl {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A Monte Carlo point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Monte Carlo budget: replica r is sampled with replica_seed(seed, r).
struct MonteCarlo {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
};

double compensated_mean(std::span<const double> x);

/// Sample mean and standard error sqrt(s^2 / n) (two-pass, compensated).
Estimate mean_estimate(std::span<const double> x);

/// Unbiased sample covariance of paired samples.
double sample_covariance(std::span<const double> x, std::span<const double> y);

/// Sample covariance with standard error from the spread of the centred products.
Estimate covariance_estimate(std::span<const double> x, std::span<const double> y);

/// mean(num) / mean(den) with a delta-method standard error.
Estimate ratio_estimate(std::span<const double> num, std::span<const double> den);

/// Number of worker threads: WCL_THREADS if set (>= 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Evaluates f(0..n-1) on up to worker_count() threads. Results are stored
/// by index, so the output is independent of the thread count.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace wcl

#endif  // WCL_STATS_HPP
