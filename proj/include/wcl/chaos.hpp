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

#ifndef WCL_CHAOS_HPP
#define WCL_CHAOS_HPP

/**
 * @file chaos.hpp
 * @brief Chaos expansion of the self-intersection functional and of the
 * Brownian-bridge endpoint kernel, term second moments and weighted norms.
 *
 * For one pair s < t put Z = X(t) - X(s), v = Var Z_j and a = v + eps. For
 * Z ~ N(0, v I) and every u,
 *
 *   p_eps^d(Z - u) = sum_n prod_j (1/n_j!) (v/a)^{n_j/2} H_{n_j}(Z_j/sqrt v)
 *                              H_{n_j}(u_j/sqrt a) p_a^d(u),
 *
 * and the |n| = k part lies in the k-th Wiener chaos. Integrating over the
 * triangle gives the k-th term of G_eps (ChaosForm::orthogonal). The
 * variant ChaosForm::as_written drops the (v/a)^{n/2} factor and evaluates
 * the path Hermite factor at Z_j / sqrt(a). It matches the orthogonal form
 * only as eps -> 0 and is kept for comparison.
 *
 * Both forms are computed through the homogeneous Hermite polynomials
 * He_n(z; q) = q^{n/2} H_n(z / sqrt q), with q = v or q = a, so the
 * diagonal s = t (v = 0) needs no special case.
 */

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "wcl/multi_index.hpp"
#include "wcl/processes.hpp"
#include "wcl/stats.hpp"

namespace wcl {

inline constexpr int kMaxChaosOrder = 30;
inline constexpr int kMaxPartialSumOrder = 12;
inline constexpr int kMaxBridgeOrder = 40;

/// All d-tuples with entries summing to k, first entry descending.
/// Requires k <= 30 and 1 <= d <= 8.
std::vector<MultiIndex> multi_indices(int k, int d);

enum class ChaosForm { orthogonal, as_written };

struct ChaosSpec {
  double eps = 0.1;
  std::vector<double> u{0.5};
  ChaosForm form = ChaosForm::orthogonal;
};

/// Chaos terms of G_eps on a fixed grid, using the same node-pair rule as
/// eval_functional(SelfIntersection). Supports BrownianMotion and Integrator
/// models; pair tables are precomputed up to order k_max.
class ChaosExpansion {
 public:
  ChaosExpansion(const ProcessModel& model, const TimeGrid& grid, ChaosSpec spec, int k_max);

  [[nodiscard]] int max_order() const { return k_max_; }
  [[nodiscard]] const ChaosSpec& spec() const { return spec_; }
  [[nodiscard]] const TimeGrid& grid() const { return grid_; }

  /// Terms 0..k (all at once, via per-coordinate generating polynomials).
  [[nodiscard]] std::vector<double> terms(const Path& path, int k) const;

  /// Term k by explicit summation over multi_indices(k, d). Slower; serves
  /// as a cross-check of terms().
  [[nodiscard]] double term(const Path& path, int k) const;

  /// The path-independent term 0.
  [[nodiscard]] double mean_term() const;

 private:
  struct PairData {
    std::size_t s;
    std::size_t t;
    double weight;  // rule weight times p_a^d(u)
    double q;       // variance parameter of the path Hermite factor
  };

  void check_path(const Path& path, int k) const;
  [[nodiscard]] const double* coefficients(std::size_t pair, std::size_t coord) const {
    return coef_.data() + (pair * dim_ + coord) * static_cast<std::size_t>(k_max_ + 1);
  }

  TimeGrid grid_;
  ChaosSpec spec_;
  int k_max_;
  std::size_t dim_;
  std::vector<PairData> pairs_;
  // coef_[(pair, j, n)] = a^{-n/2} H_n(u_j / sqrt a) / n!
  std::vector<double> coef_;
};

/// k-th term for a Brownian path, explicit multi-index sum.
double chaos_term_eval(const Path& path, int k, const ChaosSpec& spec);

/// sum_{k <= K} of the terms for a Brownian path. Requires K <= 12.
double chaos_partial_sum(const Path& path, int K, const ChaosSpec& spec);

/// (1 / (n! sqrt(2 pi))) H_n(0) H_n(x), for n <= 40.
double bridge_term(double end_value, int n);

/// H_n(0)^2 / (2 pi n!). For n = 0 this is the squared mean 1 / (2 pi).
double bridge_term_variance(int n);

/// bridge_term_variance(0..K).
std::vector<double> bridge_second_moments(int K);

/// sum_{k=0}^{K} (k+1)^gamma m_k. Throws DomainError on negative entries or
/// a list shorter than K + 1.
double sobolev_partial_norm(std::span<const double> second_moments, double gamma, int K);

struct ChaosTermEstimate {
  int k = 0;
  double mean = 0.0;      ///< estimate of E[term_k^2]
  double variance = 0.0;  ///< sample variance of term_k^2
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// Per-path chaos terms 0..K together with G_eps on the same path.
struct ChaosSample {
  std::vector<double> terms;
  double functional = 0.0;
};

std::vector<ChaosSample> sample_chaos(const ProcessModel& model, const TimeGrid& grid, int K,
                                      const ChaosSpec& spec, const MonteCarlo& mc);

/// E[term_k^2] for k = 0..K from one shared set of paths. Requires n_samples >= 100.
std::vector<ChaosTermEstimate> term_second_moments_mc(const ProcessModel& model,
                                                      const TimeGrid& grid, int K,
                                                      const ChaosSpec& spec, const MonteCarlo& mc);

ChaosTermEstimate term_second_moment_mc(const ProcessModel& model, const TimeGrid& grid, int k,
                                        const ChaosSpec& spec, const MonteCarlo& mc);

/// Columns: k,estimate,std_error,n_samples,eps,u,d,gamma_weighted. The u
/// column joins coordinates with ';'.
void write_term_table_csv(std::span<const ChaosTermEstimate> rows, const ChaosSpec& spec,
                          double gamma, std::ostream& out);

}  // namespace wcl

#endif  // WCL_CHAOS_HPP
