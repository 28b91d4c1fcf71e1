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

#ifndef WCL_FAC_HPP
#define WCL_FAC_HPP

/**
 * @file fac.hpp
 * @brief Monte Carlo checks of finite absolute continuity.
 *
 * For a weight Phi >= 0 on path space and a polynomial P in finitely many
 * point evaluations, the pairing is E[Phi P] and the reference norm is
 * sqrt(E[P^2]) under the unweighted model. The ratio |E[Phi P]| / ||P||
 * bounded over P of degree <= n, uniformly in eps, is the property under
 * study. All estimates for one study share a single path set, so different
 * eps values and polynomials are compared on matched samples.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcl/functionals.hpp"
#include "wcl/processes.hpp"
#include "wcl/stats.hpp"

namespace wcl {

inline constexpr int kMaxPolyDegree = 8;
inline constexpr std::size_t kMaxPolyEvaluations = 8;

/// Point evaluation f_coord(time).
struct Evaluation {
  double time = 1.0;
  std::size_t coord = 0;
};

/// coef * prod_i x_i^{exponents[i]}, x_i the i-th evaluation.
struct Monomial {
  std::vector<int> exponents;
  double coef = 1.0;
};

class PolyFunctional {
 public:
  /// Throws DomainError for degree > 8, more than 8 evaluations, exponent
  /// vectors of the wrong length or all coefficients zero.
  PolyFunctional(std::vector<Evaluation> evaluations, std::vector<Monomial> monomials);

  static PolyFunctional constant(double c);
  /// H_n(f_coord(time)) expanded into monomials.
  static PolyFunctional hermite(int n, double time = 1.0, std::size_t coord = 0);
  /// a P + b Q over the union of both evaluation lists.
  static PolyFunctional combine(double a, const PolyFunctional& p, double b, const PolyFunctional& q);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const std::vector<Evaluation>& evaluations() const { return evals_; }
  [[nodiscard]] const std::vector<Monomial>& monomials() const { return monos_; }

  [[nodiscard]] PolyFunctional scaled(double factor) const;

 private:
  std::vector<Evaluation> evals_;
  std::vector<Monomial> monos_;
  int degree_ = 0;
};

/// Throws ConfigError if an evaluation time is off the path grid or a
/// coordinate exceeds the path dimension.
double eval_poly(const PolyFunctional& p, const Path& path);

/// E[Phi(f) P(f)] with standard error.
Estimate pairing_mc(const ProcessModel& model, const TimeGrid& grid, const FunctionalSpec& spec,
                    const PolyFunctional& p, const MonteCarlo& mc);

/// sqrt(E[P^2]) with a delta-method standard error.
Estimate l2_norm_mc(const ProcessModel& model, const TimeGrid& grid, const PolyFunctional& p,
                    const MonteCarlo& mc);

/// |E[Phi P]| / sqrt(E[P^2]) from one path set, delta-method standard error.
/// Throws DiagnosticError when the norm estimate is within 5 standard errors of 0.
Estimate fac_ratio(const ProcessModel& model, const TimeGrid& grid, const FunctionalSpec& spec,
                   const PolyFunctional& p, const MonteCarlo& mc);

/// Ratio from per-sample values of Phi and P.
Estimate fac_ratio_from_samples(std::span<const double> phi, std::span<const double> poly);

/// Random polynomial of degree <= n: 1-4 evaluations at uniform grid nodes
/// 1..N and uniform coordinates; up to 8 distinct exponent vectors drawn
/// uniformly from those of total degree <= n; standard Gaussian coefficients.
PolyFunctional random_poly(const TimeGrid& grid, std::size_t dimension, int degree,
                           std::uint64_t seed);

/// Ratios for every (eps, polynomial) pair on one matched path set.
struct FacRatioTable {
  std::vector<double> eps_grid;
  std::vector<std::vector<Estimate>> ratio;             ///< [eps][poly], unnormalized
  std::vector<std::vector<Estimate>> normalized_ratio;  ///< [eps][poly], divided by E Phi
  std::vector<Estimate> weight_mean;                    ///< E Phi per eps
};

FacRatioTable fac_ratio_table(const ProcessModel& model, const TimeGrid& grid,
                              const FunctionalSpec& family, std::span<const double> eps_grid,
                              std::span<const PolyFunctional> polys, const MonteCarlo& mc);

struct FacStudyReport {
  std::string model;
  std::string family;
  std::vector<double> eps_grid;
  int degree = 0;
  std::size_t n_polys = 0;
  std::vector<double> max_ratio;  ///< per eps, over the tested polynomials
  std::vector<double> max_ratio_se;
  std::vector<std::size_t> argmax;
  std::vector<double> max_normalized_ratio;
  double sup = 0.0;
  double sup_se = 0.0;
  std::optional<double> oracle_bound;
};

/// Closed-form EndpointKernel / H_n(f(1)) ratio under scalar Brownian motion:
/// |H_n(0)| (1 + eps)^{-(n+1)/2} / (sqrt(n!) sqrt(2 pi)). eps = 0 gives the bound.
double endpoint_hermite_ratio(int n, double eps);

/// Max-ratio summary of a ratio table.
FacStudyReport summarize_study(const FacRatioTable& table, std::string model, std::string family,
                               int degree);

/// Random-polynomial study. Requires eps_grid strictly decreasing with at
/// least 3 points and n_random_polys >= 20. Polynomials are normalized to
/// unit estimated norm; the oracle bound is attached for EndpointKernel
/// under scalar Brownian motion.
FacStudyReport uniform_fac_study(const ProcessModel& model, const TimeGrid& grid,
                                 const FunctionalSpec& family, std::span<const double> eps_grid,
                                 int degree, std::size_t n_random_polys, const MonteCarlo& mc);

/// k-th Karhunen-Loeve function of Brownian motion, sqrt(2) sin((k - 1/2) pi t), k >= 1.
double kl_basis(int k, double t);
/// ((k - 1/2) pi)^{-2}
double kl_eigenvalue(int k);

/// Tail sums T(n) = sum_{k=n}^{N} E_eps[(e_k, f)^2] for n = 1..N. Row 0 is
/// the unweighted model, row i >= 1 the Phi_{eps_{i-1}}-weighted measure.
struct TailMomentReport {
  std::vector<double> eps_grid;
  int basis_size = 0;
  std::vector<std::vector<Estimate>> tails;  ///< [row][n - 1]
};

TailMomentReport tail_moment_diagnostic(const ProcessModel& model, const TimeGrid& grid,
                                        const FunctionalSpec& family,
                                        std::span<const double> eps_grid, int basis_size,
                                        const MonteCarlo& mc);

struct TimePair {
  double t1 = 0.0;
  double t2 = 0.0;
};

/// Weighted moments E_eps |f(t2) - f(t1)|^{2 m0} at each time pair, with the
/// fitted exponent of |t2 - t1|. The exponent's standard error comes from
/// the spread of fits over 20 disjoint batches of paths.
struct HolderReport {
  std::vector<double> eps_grid;
  int m0 = 1;
  std::vector<TimePair> pairs;
  std::vector<std::vector<Estimate>> moments;  ///< [row][pair], row 0 unweighted
  std::vector<Estimate> exponent;              ///< [row]
};

HolderReport holder_moment_diagnostic(const ProcessModel& model, const TimeGrid& grid,
                                      const FunctionalSpec& family,
                                      std::span<const double> eps_grid, int m0,
                                      std::span<const TimePair> pairs, const MonteCarlo& mc);

/// JSON with keys model, family, eps_grid, degree, max_ratio, max_ratio_se,
/// sup, sup_se, oracle_bound (null when absent).
void write_fac_report_json(const FacStudyReport& report, std::ostream& out);
/// Columns: eps,max_ratio,max_ratio_se,max_normalized_ratio,argmax.
void write_fac_report_csv(const FacStudyReport& report, std::ostream& out);

}  // namespace wcl

#endif  // WCL_FAC_HPP
