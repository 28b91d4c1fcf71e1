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

#include "wcl/fac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "wcl/analytic.hpp"
#include "wcl/chaos.hpp"
#include "wcl/error.hpp"
#include "wcl/rng.hpp"

namespace wcl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_sd(std::span<const double> x) {
  const double m = compensated_mean(x);
  CompensatedSum ss;
  for (double v : x) ss.add((v - m) * (v - m));
  return std::sqrt(ss.value() / static_cast<double>(x.size() - 1));
}

// Per-path quantities shared by every estimate of a study.
struct MatchedSamples {
  std::vector<std::vector<double>> phi;   // [eps][r]
  std::vector<std::vector<double>> poly;  // [poly][r]
};

MatchedSamples matched_samples(const ProcessModel& model, const TimeGrid& grid,
                               const FunctionalSpec* family, std::span<const double> eps_grid,
                               std::span<const PolyFunctional> polys, const MonteCarlo& mc) {
  if (mc.n_samples < 2) throw ConfigError("Monte Carlo needs at least two samples");
  struct Row {
    std::vector<double> phi;
    std::vector<double> poly;
  };
  const auto rows = parallel_map(mc.n_samples, [&](std::size_t r) {
    const Path path = sample(model, grid, replica_seed(mc.seed, r));
    Row row;
    if (family) row.phi = eval_functional_family(*family, eps_grid, path);
    row.poly.reserve(polys.size());
    for (const auto& p : polys) row.poly.push_back(eval_poly(p, path));
    return row;
  });
  MatchedSamples out;
  out.phi.assign(family ? eps_grid.size() : 0, std::vector<double>(mc.n_samples));
  out.poly.assign(polys.size(), std::vector<double>(mc.n_samples));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t e = 0; e < out.phi.size(); ++e) out.phi[e][r] = rows[r].phi[e];
    for (std::size_t i = 0; i < polys.size(); ++i) out.poly[i][r] = rows[r].poly[i];
  }
  return out;
}

// |mean(phi P)| / (sqrt(mean P^2) * scale) where scale is mean(phi) when
// normalize is set; standard error from the linearised influence values.
Estimate ratio_with_influence(std::span<const double> phi, std::span<const double> poly,
                              bool normalize) {
  const std::size_t n = phi.size();
  if (n != poly.size() || n < 2) throw ConfigError("fac ratio needs matched samples");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = phi[i] * poly[i];
    y[i] = poly[i] * poly[i];
  }
  const Estimate b = mean_estimate(y);
  if (!(b.value > 0.0)) throw DiagnosticError("polynomial norm estimate is zero");
  const double l2 = std::sqrt(b.value);
  const double l2_se = b.std_error / (2.0 * l2);
  if (l2 <= 5.0 * l2_se) throw DiagnosticError("polynomial norm within 5 standard errors of zero");
  const double a = compensated_mean(x);
  const double c = normalize ? compensated_mean(phi) : 1.0;
  if (!(c > 0.0)) throw DiagnosticError("weight mean is zero");
  const double sgn = a >= 0.0 ? 1.0 : -1.0;
  const double r = std::abs(a) / (l2 * c);
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = sgn * (x[i] - a) / (l2 * c) - r * (y[i] - b.value) / (2.0 * b.value);
    if (normalize) v -= r * (phi[i] - c) / c;
    psi[i] = v;
  }
  return {r, sample_sd(psi) / std::sqrt(static_cast<double>(n)), n};
}

Estimate weighted_mean(std::span<const double> phi, std::span<const double> values) {
  if (phi.empty()) return mean_estimate(values);
  std::vector<double> num(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) num[i] = phi[i] * values[i];
  return ratio_estimate(num, phi);
}

std::string model_name(const ProcessModel& model) {
  if (const auto* bm = std::get_if<BrownianMotion>(&model)) {
    return "brownian_motion_d" + std::to_string(bm->dimension);
  }
  if (const auto* in = std::get_if<Integrator>(&model)) {
    return "integrator_d" + std::to_string(in->dimension);
  }
  if (std::holds_alternative<SmoothStationary>(model)) return "smooth_stationary";
  return "degenerate_line";
}

// Least-squares slope of log m against log tau.
double log_log_slope(std::span<const double> tau, std::span<const double> m) {
  const std::size_t n = tau.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log(tau[i]);
    sy += std::log(m[i]);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(tau[i]) - mx;
    sxy += dx * (std::log(m[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

PolyFunctional::PolyFunctional(std::vector<Evaluation> evaluations, std::vector<Monomial> monomials)
    : evals_(std::move(evaluations)), monos_(std::move(monomials)) {
  if (evals_.size() > kMaxPolyEvaluations) throw DomainError("at most 8 point evaluations");
  if (monos_.empty()) throw DomainError("polynomial has no monomials");
  bool nonzero = false;
  for (const auto& m : monos_) {
    if (m.exponents.size() != evals_.size()) {
      throw DomainError("monomial exponent vector does not match the evaluation count");
    }
    int total = 0;
    for (int e : m.exponents) {
      if (e < 0) throw DomainError("negative exponent");
      total += e;
    }
    if (!std::isfinite(m.coef)) throw DomainError("non-finite coefficient");
    degree_ = std::max(degree_, total);
    nonzero = nonzero || m.coef != 0.0;
  }
  if (degree_ > kMaxPolyDegree) throw DomainError("polynomial degree above 8");
  if (!nonzero) throw DomainError("polynomial has only zero coefficients");
}

PolyFunctional PolyFunctional::constant(double c) { return PolyFunctional({}, {Monomial{{}, c}}); }

PolyFunctional PolyFunctional::hermite(int n, double time, std::size_t coord) {
  if (n < 0 || n > kMaxPolyDegree) throw DomainError("Hermite functional degree must be in [0, 8]");
  const std::vector<double> c = hermite_coefficients(n);
  std::vector<Monomial> monos;
  for (int k = 0; k <= n; ++k) {
    if (c[static_cast<std::size_t>(k)] != 0.0) monos.push_back({{k}, c[static_cast<std::size_t>(k)]});
  }
  return PolyFunctional({Evaluation{time, coord}}, std::move(monos));
}

PolyFunctional PolyFunctional::combine(double a, const PolyFunctional& p, double b,
                                       const PolyFunctional& q) {
  std::vector<Evaluation> evals = p.evals_;
  evals.insert(evals.end(), q.evals_.begin(), q.evals_.end());
  std::vector<Monomial> monos;
  for (const auto& m : p.monos_) {
    Monomial x{m.exponents, a * m.coef};
    x.exponents.resize(evals.size(), 0);
    monos.push_back(std::move(x));
  }
  for (const auto& m : q.monos_) {
    Monomial x{std::vector<int>(p.evals_.size(), 0), b * m.coef};
    x.exponents.insert(x.exponents.end(), m.exponents.begin(), m.exponents.end());
    monos.push_back(std::move(x));
  }
  return PolyFunctional(std::move(evals), std::move(monos));
}

PolyFunctional PolyFunctional::scaled(double factor) const {
  std::vector<Monomial> monos = monos_;
  for (auto& m : monos) m.coef *= factor;
  return PolyFunctional(evals_, std::move(monos));
}

double eval_poly(const PolyFunctional& p, const Path& path) {
  const auto& evals = p.evaluations();
  double x[kMaxPolyEvaluations];
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (evals[i].coord >= path.dimension()) throw ConfigError("evaluation coordinate out of range");
    x[i] = path(path.grid().index_of(evals[i].time), evals[i].coord);
  }
  double value = 0.0;
  for (const auto& m : p.monomials()) {
    double term = m.coef;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) term *= x[i];
    }
    value += term;
  }
  return value;
}

Estimate pairing_mc(const ProcessModel& model, const TimeGrid& grid, const FunctionalSpec& spec,
                    const PolyFunctional& p, const MonteCarlo& mc) {
  const double eps = spec_eps(spec);
  const MatchedSamples s = matched_samples(model, grid, &spec, std::span(&eps, 1), std::span(&p, 1), mc);
  std::vector<double> x(mc.n_samples);
  for (std::size_t r = 0; r < x.size(); ++r) x[r] = s.phi[0][r] * s.poly[0][r];
  return mean_estimate(x);
}

Estimate l2_norm_mc(const ProcessModel& model, const TimeGrid& grid, const PolyFunctional& p,
                    const MonteCarlo& mc) {
  const MatchedSamples s = matched_samples(model, grid, nullptr, {}, std::span(&p, 1), mc);
  std::vector<double> y(mc.n_samples);
  for (std::size_t r = 0; r < y.size(); ++r) y[r] = s.poly[0][r] * s.poly[0][r];
  const Estimate b = mean_estimate(y);
  const double l2 = std::sqrt(b.value);
  return {l2, l2 > 0.0 ? b.std_error / (2.0 * l2) : 0.0, b.n};
}

Estimate fac_ratio_from_samples(std::span<const double> phi, std::span<const double> poly) {
  return ratio_with_influence(phi, poly, false);
}

Estimate fac_ratio(const ProcessModel& model, const TimeGrid& grid, const FunctionalSpec& spec,
                   const PolyFunctional& p, const MonteCarlo& mc) {
  const double eps = spec_eps(spec);
  const MatchedSamples s = matched_samples(model, grid, &spec, std::span(&eps, 1), std::span(&p, 1), mc);
  return fac_ratio_from_samples(s.phi[0], s.poly[0]);
}

PolyFunctional random_poly(const TimeGrid& grid, std::size_t dimension, int degree,
                           std::uint64_t seed) {
  if (degree < 0 || degree > kMaxPolyDegree) throw DomainError("degree must be in [0, 8]");
  if (dimension == 0) throw ConfigError("dimension must be positive");
  RandomStream rng(seed);
  const std::size_t m = 1 + rng.index(4);
  std::vector<Evaluation> evals(m);
  for (auto& e : evals) {
    e.time = grid.node(1 + rng.index(grid.steps()));
    e.coord = rng.index(dimension);
  }
  std::vector<MultiIndex> pool;
  for (int k = 0; k <= degree; ++k) {
    for (auto& idx : multi_indices(k, static_cast<int>(m))) pool.push_back(std::move(idx));
  }
  const std::size_t count = 1 + rng.index(std::min<std::size_t>(8, pool.size()));
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
  std::vector<Monomial> monos;
  for (std::size_t i = 0; i < count; ++i) monos.push_back({pool[i].entries(), rng.normal()});
  return PolyFunctional(std::move(evals), std::move(monos));
}

FacRatioTable fac_ratio_table(const ProcessModel& model, const TimeGrid& grid,
                              const FunctionalSpec& family, std::span<const double> eps_grid,
                              std::span<const PolyFunctional> polys, const MonteCarlo& mc) {
  if (eps_grid.empty() || polys.empty()) throw ConfigError("ratio table needs eps values and polynomials");
  const MatchedSamples s = matched_samples(model, grid, &family, eps_grid, polys, mc);
  FacRatioTable t;
  t.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    t.weight_mean.push_back(mean_estimate(s.phi[e]));
    std::vector<Estimate> row, nrow;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      try {
        row.push_back(ratio_with_influence(s.phi[e], s.poly[i], false));
        nrow.push_back(ratio_with_influence(s.phi[e], s.poly[i], true));
      } catch (const DiagnosticError&) {
        row.push_back({kNaN, kNaN, mc.n_samples});
        nrow.push_back({kNaN, kNaN, mc.n_samples});
      }
    }
    t.ratio.push_back(std::move(row));
    t.normalized_ratio.push_back(std::move(nrow));
  }
  return t;
}

double endpoint_hermite_ratio(int n, double eps) {
  if (eps < 0.0) throw DomainError("eps must be >= 0");
  return std::abs(wcl::hermite(n, 0.0)) * std::pow(1.0 + eps, -0.5 * (n + 1)) /
         (std::sqrt(factorial(n)) * std::sqrt(2.0 * kPi));
}

FacStudyReport summarize_study(const FacRatioTable& table, std::string model, std::string family,
                               int degree) {
  FacStudyReport rep;
  rep.model = std::move(model);
  rep.family = std::move(family);
  rep.eps_grid = table.eps_grid;
  rep.degree = degree;
  rep.n_polys = table.ratio.empty() ? 0 : table.ratio[0].size();
  rep.sup = kNaN;
  rep.sup_se = kNaN;
  for (std::size_t e = 0; e < table.ratio.size(); ++e) {
    double best = kNaN, best_se = kNaN, best_norm = kNaN;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < table.ratio[e].size(); ++i) {
      const Estimate& r = table.ratio[e][i];
      if (std::isnan(r.value)) continue;
      if (std::isnan(best) || r.value > best) {
        best = r.value;
        best_se = r.std_error;
        arg = i;
      }
      const double nr = table.normalized_ratio[e][i].value;
      if (std::isnan(best_norm) || nr > best_norm) best_norm = nr;
    }
    rep.max_ratio.push_back(best);
    rep.max_ratio_se.push_back(best_se);
    rep.argmax.push_back(arg);
    rep.max_normalized_ratio.push_back(best_norm);
    if (!std::isnan(best) && (std::isnan(rep.sup) || best > rep.sup)) {
      rep.sup = best;
      rep.sup_se = best_se;
    }
  }
  return rep;
}

FacStudyReport uniform_fac_study(const ProcessModel& model, const TimeGrid& grid,
                                 const FunctionalSpec& family, std::span<const double> eps_grid,
                                 int degree, std::size_t n_random_polys, const MonteCarlo& mc) {
  if (eps_grid.size() < 3) throw ConfigError("uniform FAC study needs at least 3 eps values");
  for (std::size_t e = 1; e < eps_grid.size(); ++e) {
    if (!(eps_grid[e] < eps_grid[e - 1])) throw ConfigError("eps grid must be strictly decreasing");
  }
  if (n_random_polys < 20) throw ConfigError("uniform FAC study needs at least 20 polynomials");
  const std::size_t d = model_dimension(model);
  const std::uint64_t poly_master = splitmix64(mc.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  std::vector<PolyFunctional> polys;
  for (std::size_t i = 0; i < n_random_polys; ++i) {
    PolyFunctional p = random_poly(grid, d, degree, replica_seed(poly_master, i));
    // Unit norm from a pilot sample independent of the study paths.
    const Estimate norm = l2_norm_mc(model, grid, p, {200, replica_seed(poly_master, i + n_random_polys)});
    polys.push_back(norm.value > 0.0 ? p.scaled(1.0 / norm.value) : p);
  }
  const FacRatioTable table = fac_ratio_table(model, grid, family, eps_grid, polys, mc);
  FacStudyReport rep = summarize_study(table, model_name(model), spec_name(family), degree);
  const auto* bm = std::get_if<BrownianMotion>(&model);
  if (std::holds_alternative<EndpointKernel>(family) && bm && bm->dimension == 1) {
    rep.oracle_bound = endpoint_hermite_ratio(degree, 0.0);
  }
  return rep;
}

double kl_basis(int k, double t) {
  if (k < 1) throw DomainError("KL index starts at 1");
  return std::sqrt(2.0) * std::sin((k - 0.5) * kPi * t);
}

double kl_eigenvalue(int k) {
  if (k < 1) throw DomainError("KL index starts at 1");
  const double a = (k - 0.5) * kPi;
  return 1.0 / (a * a);
}

TailMomentReport tail_moment_diagnostic(const ProcessModel& model, const TimeGrid& grid,
                                        const FunctionalSpec& family,
                                        std::span<const double> eps_grid, int basis_size,
                                        const MonteCarlo& mc) {
  if (basis_size < 1) throw DomainError("basis size must be positive");
  if (mc.n_samples < 2) throw ConfigError("Monte Carlo needs at least two samples");
  const auto nb = static_cast<std::size_t>(basis_size);
  const std::vector<double> c = trapezoid_node_weights(grid);
  std::vector<double> basis(nb * grid.node_count());
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      basis[k * grid.node_count() + i] = c[i] * kl_basis(static_cast<int>(k + 1), grid.node(i));
    }
  }
  struct Row {
    std::vector<double> phi;
    std::vector<double> tail;  // tail[n-1] = sum_{k >= n} (e_k, f)^2
  };
  const auto rows = parallel_map(mc.n_samples, [&](std::size_t r) {
    const Path path = sample(model, grid, replica_seed(mc.seed, r));
    Row row{eval_functional_family(family, eps_grid, path), std::vector<double>(nb, 0.0)};
    std::vector<double> sq(nb, 0.0);
    for (std::size_t j = 0; j < path.dimension(); ++j) {
      for (std::size_t k = 0; k < nb; ++k) {
        double proj = 0.0;
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
          proj += basis[k * grid.node_count() + i] * path(i, j);
        }
        sq[k] += proj * proj;
      }
    }
    double acc = 0.0;
    for (std::size_t k = nb; k-- > 0;) {
      acc += sq[k];
      row.tail[k] = acc;
    }
    return row;
  });
  TailMomentReport rep;
  rep.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  rep.basis_size = basis_size;
  std::vector<double> phi(mc.n_samples), val(mc.n_samples);
  for (std::size_t row = 0; row <= eps_grid.size(); ++row) {
    std::vector<Estimate> tails;
    for (std::size_t n = 0; n < nb; ++n) {
      for (std::size_t r = 0; r < mc.n_samples; ++r) {
        val[r] = rows[r].tail[n];
        if (row > 0) phi[r] = rows[r].phi[row - 1];
      }
      tails.push_back(row == 0 ? mean_estimate(val) : weighted_mean(phi, val));
    }
    rep.tails.push_back(std::move(tails));
  }
  return rep;
}

HolderReport holder_moment_diagnostic(const ProcessModel& model, const TimeGrid& grid,
                                      const FunctionalSpec& family,
                                      std::span<const double> eps_grid, int m0,
                                      std::span<const TimePair> pairs, const MonteCarlo& mc) {
  if (m0 != 1 && m0 != 2) throw DomainError("m0 must be 1 or 2");
  if (pairs.size() < 2) throw ConfigError("exponent fit needs at least two time pairs");
  constexpr std::size_t kBatches = 20;
  if (mc.n_samples < 10 * kBatches) throw ConfigError("Hoelder diagnostic needs >= 200 samples");
  std::vector<std::size_t> i1(pairs.size()), i2(pairs.size());
  std::vector<double> tau(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    i1[p] = grid.index_of(pairs[p].t1);
    i2[p] = grid.index_of(pairs[p].t2);
    if (i2[p] <= i1[p]) throw ConfigError("time pairs need t1 < t2");
    tau[p] = pairs[p].t2 - pairs[p].t1;
  }
  struct Row {
    std::vector<double> phi;
    std::vector<double> incr;
  };
  const auto rows = parallel_map(mc.n_samples, [&](std::size_t r) {
    const Path path = sample(model, grid, replica_seed(mc.seed, r));
    Row row{eval_functional_family(family, eps_grid, path), {}};
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double r2 = 0.0;
      for (std::size_t j = 0; j < path.dimension(); ++j) {
        const double dlt = path(i2[p], j) - path(i1[p], j);
        r2 += dlt * dlt;
      }
      row.incr.push_back(m0 == 1 ? r2 : r2 * r2);
    }
    return row;
  });
  HolderReport rep;
  rep.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  rep.m0 = m0;
  rep.pairs.assign(pairs.begin(), pairs.end());
  const auto moments_over = [&](std::size_t row, std::size_t begin, std::size_t end) {
    std::vector<Estimate> out;
    std::vector<double> phi, val;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      phi.clear();
      val.clear();
      for (std::size_t r = begin; r < end; ++r) {
        val.push_back(rows[r].incr[p]);
        if (row > 0) phi.push_back(rows[r].phi[row - 1]);
      }
      out.push_back(weighted_mean(phi, val));
    }
    return out;
  };
  for (std::size_t row = 0; row <= eps_grid.size(); ++row) {
    std::vector<Estimate> m = moments_over(row, 0, mc.n_samples);
    std::vector<double> mv(m.size());
    for (std::size_t p = 0; p < m.size(); ++p) mv[p] = m[p].value;
    const double slope = log_log_slope(tau, mv);
    std::vector<double> batch_slopes;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::size_t lo = b * mc.n_samples / kBatches;
      const std::size_t hi = (b + 1) * mc.n_samples / kBatches;
      const std::vector<Estimate> bm = moments_over(row, lo, hi);
      std::vector<double> bv(bm.size());
      bool ok = true;
      for (std::size_t p = 0; p < bm.size(); ++p) {
        bv[p] = bm[p].value;
        ok = ok && bv[p] > 0.0;
      }
      if (ok) batch_slopes.push_back(log_log_slope(tau, bv));
    }
    const double se = batch_slopes.size() >= 2
                          ? sample_sd(batch_slopes) / std::sqrt(static_cast<double>(batch_slopes.size()))
                          : kNaN;
    rep.moments.push_back(std::move(m));
    rep.exponent.push_back({slope, se, mc.n_samples});
  }
  return rep;
}

void write_fac_report_json(const FacStudyReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["model"] = report.model;
  j["family"] = report.family;
  j["eps_grid"] = report.eps_grid;
  j["degree"] = report.degree;
  j["n_polys"] = report.n_polys;
  j["max_ratio"] = report.max_ratio;
  j["max_ratio_se"] = report.max_ratio_se;
  j["max_normalized_ratio"] = report.max_normalized_ratio;
  j["sup"] = report.sup;
  j["sup_se"] = report.sup_se;
  j["oracle_bound"] = report.oracle_bound ? nlohmann::ordered_json(*report.oracle_bound) : nullptr;
  out << j.dump(2) << '\n';
}

void write_fac_report_csv(const FacStudyReport& report, std::ostream& out) {
  out << "eps,max_ratio,max_ratio_se,max_normalized_ratio,argmax\n";
  out.precision(12);
  for (std::size_t e = 0; e < report.eps_grid.size(); ++e) {
    out << report.eps_grid[e] << ',' << report.max_ratio[e] << ',' << report.max_ratio_se[e] << ','
        << report.max_normalized_ratio[e] << ',' << report.argmax[e] << '\n';
  }
}

}  // namespace wcl
