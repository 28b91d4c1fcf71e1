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

#include "wcl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include "wcl/analytic.hpp"
#include "wcl/chaos.hpp"
#include "wcl/error.hpp"
#include "wcl/fac.hpp"
#include "wcl/functionals.hpp"
#include "wcl/rng.hpp"
#include "wcl/stats.hpp"

namespace wcl {

namespace {

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

MonteCarlo mc_of(const ExperimentConfig& c) { return {c.n_samples, c.seed}; }

template <class T>
void set_default(T& field, const T& unset, const T& value) {
  if (field == unset) field = value;
}

std::vector<double> default_u(std::size_t d) {
  if (d == 2) return {0.4, 0.3};
  return std::vector<double>(d, 0.5 / std::sqrt(static_cast<double>(d)));
}

FunctionalSpec family_of(const ExperimentConfig& c) {
  const double eps = c.eps_grid.empty() ? 0.1 : c.eps_grid.front();
  if (c.family == "local_time") return LocalTime{eps};
  if (c.family == "offset_local_time") return OffsetLocalTime{eps, c.u};
  if (c.family == "self_intersection") return SelfIntersection{eps, c.u};
  if (c.family == "endpoint_kernel") return EndpointKernel{eps};
  throw ConfigError("unknown functional family '" + c.family + "'");
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
  std::vector<double> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][j];
  return out;
}

// 1-D Gauss-Legendre integral on [a, b].
double gl_integral(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  return integrate_range(f, a, b, QuadratureRule::gauss_legendre(n));
}

// Exact expectation of the grid-rule functional: every node value or pair
// difference is Gaussian with a known variance, so each kernel averages to
// a wider kernel.
double discrete_expectation(const FunctionalSpec& spec, const ProcessModel& model,
                            const TimeGrid& grid) {
  const double eps = spec_eps(spec);
  const std::size_t d = model_dimension(model);
  const int di = static_cast<int>(d);
  const std::vector<double> zero(d, 0.0);
  const auto var = [&](std::size_t i, std::size_t k) {
    return covariance(model, grid, grid.node(i), grid.node(k))(0, 0);
  };
  const std::vector<double> c = trapezoid_node_weights(grid);
  const std::size_t n = grid.node_count();
  CompensatedSum s;
  if (std::holds_alternative<EndpointKernel>(spec)) {
    return heat_kernel(HeatKernelParams{di, var(n - 1, n - 1) + eps}, zero);
  }
  if (const auto* g = std::get_if<SelfIntersection>(&spec)) {
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = var(i, i);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i; k < n; ++k) {
        const double v = k == i ? 0.0 : std::max(diag[k] - 2.0 * var(i, k) + diag[i], 0.0);
        const double w = k == i ? 0.5 * c[i] * c[i] : c[i] * c[k];
        s.add(w * heat_kernel(HeatKernelParams{di, v + eps}, g->u));
      }
    }
    return s.value();
  }
  const std::vector<double>& u =
      std::holds_alternative<OffsetLocalTime>(spec) ? std::get<OffsetLocalTime>(spec).u : zero;
  for (std::size_t k = 0; k < n; ++k) s.add(c[k] * heat_kernel(HeatKernelParams{di, var(k, k) + eps}, u));
  return s.value();
}

// Continuous-time mean of the functional under Brownian motion.
double brownian_mean(const FunctionalSpec& spec, std::size_t d) {
  const double eps = spec_eps(spec);
  const int di = static_cast<int>(d);
  const std::vector<double> zero(d, 0.0);
  if (std::holds_alternative<EndpointKernel>(spec)) {
    return heat_kernel(HeatKernelParams{di, 1.0 + eps}, zero);
  }
  if (const auto* g = std::get_if<SelfIntersection>(&spec)) return self_intersection_mean_bm(eps, g->u);
  const std::vector<double>& u =
      std::holds_alternative<OffsetLocalTime>(spec) ? std::get<OffsetLocalTime>(spec).u : zero;
  return integrate_interval(
      [&](double t) { return heat_kernel(HeatKernelParams{di, t + eps}, u); }, default_interval_rule());
}

// E of the continuous band occupation (1/2eps) int_0^1 1{|w_t| <= eps} dt,
// with t = s^2 to resolve the boundary layer at t = 0.
double band_occupation_mean(double eps) {
  return gl_integral(
      [eps](double s) {
        if (s == 0.0) return 0.0;
        const double p = std::erf(eps / (s * std::sqrt(2.0)));  // P(|N(0, s^2)| <= eps)
        return 2.0 * s * p / (2.0 * eps);
      },
      0.0, 1.0, 400);
}

void require_model(const ExperimentConfig& c, std::initializer_list<const char*> allowed,
                   const char* experiment) {
  for (const char* m : allowed) {
    if (c.model == m) return;
  }
  throw ConfigError(std::string(experiment) + " does not support model '" + c.model + "'");
}

}  // namespace

ExperimentConfig resolve_defaults(ExperimentConfig c) {
  const std::string& e = c.experiment;
  if (std::find(kExperimentNames.begin(), kExperimentNames.end(), e) == kExperimentNames.end()) {
    throw ConfigError("unknown experiment '" + e + "'");
  }
  set_default(c.dimension, std::size_t{0}, std::size_t{1});
  set_default(c.omega, 0.0, 2.0 * kPi);
  set_default(c.operator_kind, std::string(), std::string("identity"));
  if (std::isnan(c.gamma)) c.gamma = -1.0;
  set_default(c.delta, 0.0, 0.1);
  set_default(c.m0, 0, 2);
  set_default(c.basis_size, 0, 16);
  set_default(c.degree, -1, 4);
  set_default(c.n_polys, std::size_t{0}, std::size_t{20});
  set_default(c.k_max, -1, 6);
  if (e == "rice") {
    set_default(c.model, std::string(), std::string("smooth_stationary"));
    set_default(c.n_steps, std::size_t{0}, std::size_t{2048});
    set_default(c.n_samples, std::size_t{0}, std::size_t{20000});
    if (c.levels.empty()) c.levels = {0.0, 1.0};
  } else if (e == "kac") {
    set_default(c.model, std::string(), std::string("brownian_motion"));
    set_default(c.n_steps, std::size_t{0}, std::size_t{4096});
    set_default(c.n_samples, std::size_t{0}, std::size_t{10000});
    if (c.eps_grid.empty()) c.eps_grid = {1e-3, 1e-4};
  } else if (e == "bridge") {
    set_default(c.n_steps, std::size_t{0}, std::size_t{256});
    set_default(c.n_samples, std::size_t{0}, std::size_t{100000});
    if (c.eps_grid.empty()) c.eps_grid = {1e-2, 1e-3, 1e-4};
  } else if (e == "chaos") {
    set_default(c.model, std::string(), std::string("brownian_motion"));
    set_default(c.n_steps, std::size_t{0}, std::size_t{256});
    set_default(c.n_samples, std::size_t{0}, std::size_t{10000});
    if (c.eps_grid.empty()) c.eps_grid = {0.1, 0.03, 0.01};
  } else if (e == "fac") {
    set_default(c.model, std::string(), std::string("brownian_motion"));
    set_default(c.family, std::string(), std::string("endpoint_kernel"));
    set_default(c.n_steps, std::size_t{0}, std::size_t{256});
    set_default(c.n_samples, std::size_t{0}, std::size_t{20000});
    if (c.eps_grid.empty()) c.eps_grid = {1.0, 0.1, 0.01};
  } else if (e == "sweep") {
    set_default(c.model, std::string(), std::string("brownian_motion"));
    set_default(c.family, std::string(), std::string("self_intersection"));
    set_default(c.n_steps, std::size_t{0}, std::size_t{256});
    set_default(c.n_samples, std::size_t{0}, std::size_t{10000});
    if (c.eps_grid.empty()) c.eps_grid = {0.1, 0.03, 0.01};
  } else {
    set_default(c.n_steps, std::size_t{0}, std::size_t{256});
    set_default(c.n_samples, std::size_t{0}, std::size_t{100});
  }
  if (c.u.empty()) c.u = default_u(c.dimension);
  return c;
}

ProcessModel build_model(const ExperimentConfig& c, const TimeGrid& grid) {
  if (c.model == "brownian_motion") return BrownianMotion{c.dimension};
  if (c.model == "smooth_stationary") return SmoothStationary{c.omega};
  if (c.model == "degenerate_line") return DegenerateLine{};
  if (c.model == "integrator") {
    std::shared_ptr<const IntegratorOperator> op;
    if (c.operator_kind == "identity") {
      op = std::make_shared<const IntegratorOperator>(IntegratorOperator::identity(grid.steps()));
    } else if (c.operator_kind == "diag_linear") {
      op = std::make_shared<const IntegratorOperator>(
          IntegratorOperator::cell_multiplication(grid.steps(), [](double s) { return 1.0 + 0.5 * s; }));
    } else if (c.operator_kind == "csv") {
      std::ifstream in(c.operator_file);
      if (!in) throw ConfigError("cannot open operator file '" + c.operator_file + "'");
      op = std::make_shared<const IntegratorOperator>(read_operator_csv(in));
    } else {
      throw ConfigError("unknown operator_kind '" + c.operator_kind + "'");
    }
    ProcessModel m = Integrator{op, c.dimension};
    validate_model(m, grid);
    return m;
  }
  throw ConfigError("unknown model '" + c.model + "'");
}

double rice_quadrature(double omega, double level) {
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  // The joint density does not depend on t, so the time integral is 1.
  const double speed = gl_integral([omega](double x) { return x * heat_kernel(omega * omega, x); },
                                   0.0, 14.0 * omega, 200);
  return heat_kernel(1.0, level) * speed;
}

double kac_moment_quadrature(int n, const QuadratureRule& rule) {
  if (n < 1 || n > 4) throw DomainError("Kac quadrature supports n in {1, 2, 3, 4}");
  const double scale = factorial(n) * std::pow(2.0 * kPi, -0.5 * n);
  if (n == 1) {
    // t = sin^2(pi s / 2) turns t^{-1/2} dt into pi cos(pi s / 2) ds.
    return scale * integrate_interval([](double s) { return kPi * std::cos(0.5 * kPi * s); }, rule);
  }
  return scale * integrate_simplex(
                     [](std::span<const double> t) {
                       double v = 1.0 / std::sqrt(t[0]);
                       for (std::size_t j = 1; j < t.size(); ++j) v /= std::sqrt(t[j] - t[j - 1]);
                       return v;
                     },
                     n, rule, SimplexMap::collapsed_sine);
}

ExperimentReport rice_experiment(const ExperimentConfig& c) {
  require_model(c, {"smooth_stationary"}, "rice");
  ExperimentReport rep(c);
  const TimeGrid grid(c.n_steps);
  const ProcessModel model = build_model(c, grid);
  std::vector<double> levels = c.levels;
  constexpr double kTailLevel = 6.0;
  levels.push_back(kTailLevel);
  const auto counts = parallel_map(c.n_samples, [&](std::size_t r) {
    const Path p = sample(model, grid, replica_seed(c.seed, r));
    std::vector<double> out;
    for (double lv : levels) out.push_back(static_cast<double>(upcrossing_count(p, lv)));
    return out;
  });
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double lv = levels[i];
    const double closed = c.omega / (2.0 * kPi) * std::exp(-0.5 * lv * lv);
    const double quad = rice_quadrature(c.omega, lv);
    rep.add_oracle("rice_quadrature_c" + tag(lv), quad, 0.0, closed, 1e-8);
    const Estimate e = mean_estimate(column(counts, i));
    rep.add_oracle("rice_mc_c" + tag(lv), e.value, e.std_error, quad, 1e-8, 3.0);
    rep.add_check("rice_bias_le_0.02_c" + tag(lv), e.value - quad, std::abs(e.value - quad) <= 0.02,
                  e.std_error);
  }
  const std::size_t n_tail = std::min<std::size_t>(c.n_samples, 10000);
  double tail = 0.0;
  for (std::size_t r = 0; r < n_tail; ++r) tail += counts[r].back();
  rep.add_check("rice_tail_count_c6", tail, tail == 0.0);
  return rep;
}

ExperimentReport kac_experiment(const ExperimentConfig& c) {
  require_model(c, {"brownian_motion"}, "kac");
  if (c.dimension != 1) throw ConfigError("kac needs scalar Brownian motion");
  if (c.x != 0.0) throw ConfigError("kac moments are validated at x = 0 only");
  if (c.eps_grid.empty()) throw ConfigError("kac needs an eps grid");
  ExperimentReport rep(c);

  const double root = std::sqrt(2.0 / kPi);
  const double q1 = kac_moment_quadrature(1, QuadratureRule::gauss_legendre(200));
  const double q2 = kac_moment_quadrature(2, default_simplex_rule());
  const double q3 = kac_moment_quadrature(3, QuadratureRule::gauss_legendre(64));
  const double q3_fine = kac_moment_quadrature(3, QuadratureRule::gauss_legendre(96));
  rep.add_oracle("kac_quadrature_n1", q1, 0.0, root, 1e-3);
  rep.add_oracle("kac_quadrature_n2", q2, 0.0, 1.0, 1e-3);
  rep.add_oracle("kac_quadrature_n3", q3, 0.0, q3_fine, 1e-3 * std::abs(q3_fine));
  rep.add_oracle("kac_quadrature_n3_closed_form", q3, 0.0, 6.0 * std::pow(2.0, -1.5) / std::tgamma(2.5),
                 1e-3);

  const TimeGrid grid(c.n_steps);
  const ProcessModel model = build_model(c, grid);
  const double eps_moments = c.eps_grid.front();
  // Control variate for the mean: the same estimator at a wider band, whose
  // expectation is a 1-D integral.
  constexpr double kWide = 1e-2;
  struct Row {
    double moment_base;
    std::vector<double> means;
    double wide;
  };
  const auto rows = parallel_map(c.n_samples, [&](std::size_t r) {
    const Path p = sample(model, grid, replica_seed(c.seed, r));
    Row row{indicator_local_time(p, 0.0, eps_moments, TimeResolution::bridge_conditional), {},
            indicator_local_time(p, 0.0, kWide, TimeResolution::bridge_conditional)};
    for (double e : c.eps_grid) {
      row.means.push_back(e == eps_moments
                              ? row.moment_base
                              : indicator_local_time(p, 0.0, e, TimeResolution::bridge_conditional));
    }
    return row;
  });
  const double quads[3] = {q1, q2, q3};
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> v(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) v[r] = std::pow(rows[r].moment_base, n);
    const Estimate e = mean_estimate(v);
    rep.add_oracle("kac_mc_moment_n" + std::to_string(n) + "_eps" + tag(eps_moments), e.value,
                   e.std_error, quads[n - 1], 0.0, 4.0);
  }
  std::vector<double> wide(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) wide[r] = rows[r].wide;
  const double wide_mean = band_occupation_mean(kWide);
  for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
    std::vector<double> v(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) v[r] = rows[r].means[i];
    const Estimate plain = mean_estimate(v);
    rep.add_oracle("local_time_mean_plain_eps" + tag(c.eps_grid[i]), plain.value, plain.std_error,
                   root, 0.01);
    const double beta = sample_covariance(v, wide) / sample_covariance(wide, wide);
    std::vector<double> adj(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) adj[r] = v[r] - beta * (wide[r] - wide_mean);
    const Estimate cv = mean_estimate(adj);
    rep.add_oracle("local_time_mean_eps" + tag(c.eps_grid[i]), cv.value, cv.std_error, root, 0.01);
  }
  rep.add_info("local_time_control_mean_eps" + tag(kWide), wide_mean);
  return rep;
}

ExperimentReport bridge_experiment(const ExperimentConfig& c) {
  if (!c.model.empty()) require_model(c, {"brownian_motion", "degenerate_line"}, "bridge");
  const bool run_bm = c.model.empty() || c.model == "brownian_motion";
  const bool run_line = c.model.empty() || c.model == "degenerate_line";
  ExperimentReport rep(c);
  const TimeGrid grid(c.n_steps);
  const std::size_t mid = grid.index_of(0.5);
  const NodesWeights gx = interval_rule(QuadratureRule::gauss_legendre(200), -10.0, 10.0);
  const NodesWeights gz = interval_rule(QuadratureRule::gauss_legendre(200), -12.0, 12.0);

  if (run_bm) {
    const ProcessModel model = BrownianMotion{1};
    const auto pairs = parallel_map(c.n_samples, [&](std::size_t r) {
      const Path p = sample(model, grid, replica_seed(c.seed, r));
      return std::pair<double, double>{p(mid, 0), p(grid.steps(), 0)};
    });
    for (double eps : c.eps_grid) {
      // Exact 2-D quadrature over (w(1/2), w(1)) with density
      // p_{1/2}(x) p_{1/2}(y - x); y = sqrt(eps) z resolves the kernel.
      CompensatedSum num, den;
      const double se = std::sqrt(eps);
      for (std::size_t a = 0; a < gx.nodes.size(); ++a) {
        const double x = gx.nodes[a];
        for (std::size_t b = 0; b < gz.nodes.size(); ++b) {
          const double y = se * gz.nodes[b];
          const double w = gx.weights[a] * gz.weights[b] * se * heat_kernel(0.5, x) *
                           heat_kernel(0.5, y - x) * heat_kernel(eps, y);
          num.add(w * x * x);
          den.add(w);
        }
      }
      const double quad = num.value() / den.value();
      rep.add_oracle("bridge_quadrature_second_moment_eps" + tag(eps), quad, 0.0, 0.25, 0.02);
      std::vector<double> wx(pairs.size()), wxx(pairs.size()), w(pairs.size());
      for (std::size_t r = 0; r < pairs.size(); ++r) {
        w[r] = heat_kernel(eps, pairs[r].second);
        wx[r] = w[r] * pairs[r].first;
        wxx[r] = wx[r] * pairs[r].first;
      }
      const Estimate m1 = ratio_estimate(wx, w);
      const Estimate m2 = ratio_estimate(wxx, w);
      rep.add_oracle("bridge_mc_first_moment_eps" + tag(eps), m1.value, m1.std_error, 0.0, 0.0);
      rep.add_oracle("bridge_mc_second_moment_eps" + tag(eps), m2.value, m2.std_error, quad, 0.0);
    }
  }

  if (run_line) {
    const ProcessModel model = DegenerateLine{};
    const auto sup_norm = parallel_map(c.n_samples, [&](std::size_t r) {
      const Path p = sample(model, grid, replica_seed(c.seed, r));
      double m = 0.0;
      for (double v : p.scalar()) m = std::max(m, std::abs(v));
      return std::pair<double, double>{p(grid.steps(), 0), m};
    });
    for (double eps : c.eps_grid) {
      // Weighted P(|xi| > delta) by 1-D quadrature of p_eps(x) p_1(x).
      const double width = 40.0 * std::sqrt(eps);
      const auto dens = [eps](double x) { return heat_kernel(eps, x) * heat_kernel(1.0, x); };
      const double all = gl_integral(dens, -width, width, 400);
      const double outside = 2.0 * gl_integral(dens, c.delta, c.delta + width, 400);
      const double quad = outside / all;
      std::vector<double> num(sup_norm.size()), w(sup_norm.size());
      for (std::size_t r = 0; r < sup_norm.size(); ++r) {
        w[r] = heat_kernel(eps, sup_norm[r].first);
        num[r] = sup_norm[r].second > c.delta ? w[r] : 0.0;
      }
      const Estimate e = ratio_estimate(num, w);
      rep.add_oracle("line_weighted_mass_outside_eps" + tag(eps), e.value, e.std_error, quad, 1e-12);
    }
    const double smallest = *std::min_element(c.eps_grid.begin(), c.eps_grid.end());
    const ReportRow& last = rep.at("line_weighted_mass_outside_eps" + tag(smallest));
    rep.add_check("line_concentration_le_0.01_eps" + tag(smallest), last.estimate,
                  last.estimate <= 0.01, last.std_error);
  }
  return rep;
}

ExperimentReport chaos_table(const ExperimentConfig& c) {
  require_model(c, {"brownian_motion"}, "chaos");
  if (c.dimension < 1 || c.dimension > 3) throw ConfigError("chaos table supports d in {1, 2, 3}");
  if (c.u.size() != c.dimension) throw ConfigError("u must have d entries");
  if (std::all_of(c.u.begin(), c.u.end(), [](double v) { return v == 0.0; })) {
    throw ConfigError("chaos table needs u != 0");
  }
  if (c.k_max < 1 || c.k_max > kMaxPartialSumOrder) throw ConfigError("k_max must be in [1, 12]");
  ExperimentReport rep(c);
  const TimeGrid grid(c.n_steps);
  const ProcessModel model = build_model(c, grid);
  const int K = c.k_max;
  const auto Ks = static_cast<std::size_t>(K);
  const double d = static_cast<double>(c.dimension);

  for (std::size_t ie = 0; ie < c.eps_grid.size(); ++ie) {
    const double eps = c.eps_grid[ie];
    const std::string et = "_eps" + tag(eps);
    const ChaosSpec spec{eps, c.u, ChaosForm::orthogonal};
    const std::vector<ChaosSample> samples = sample_chaos(model, grid, K, spec, mc_of(c));
    const std::size_t n = samples.size();

    const double oracle = self_intersection_mean_bm(eps, c.u);
    rep.add_oracle("chaos_mean_term" + et, samples[0].terms[0], 0.0, oracle, 2e-3 * oracle);
    std::vector<double> g(n);
    for (std::size_t r = 0; r < n; ++r) g[r] = samples[r].functional;
    const Estimate gm = mean_estimate(g);
    rep.add_oracle("chaos_mean_functional" + et, gm.value, gm.std_error, oracle, 0.0, 4.0);

    std::vector<std::vector<double>> terms(Ks + 1, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k <= Ks; ++k) terms[k][r] = samples[r].terms[k];
    }
    std::vector<double> m(Ks + 1);
    for (std::size_t k = 0; k <= Ks; ++k) {
      std::vector<double> sq(n);
      for (std::size_t r = 0; r < n; ++r) sq[r] = terms[k][r] * terms[k][r];
      const Estimate e = mean_estimate(sq);
      m[k] = e.value;
      rep.add_info("chaos_second_moment_k" + std::to_string(k) + et, e.value, e.std_error);
    }
    for (std::size_t j = 1; j <= Ks; ++j) {
      for (std::size_t k = j + 1; k <= Ks; ++k) {
        const Estimate cv = covariance_estimate(terms[j], terms[k]);
        rep.add_oracle("chaos_cov_" + std::to_string(j) + "_" + std::to_string(k) + et, cv.value,
                       cv.std_error, 0.0, 0.0, 4.0);
      }
    }
    // Residuals (G - S_K)^2 on the same paths.
    std::vector<std::vector<double>> resid(Ks + 1, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      double partial = 0.0;
      for (std::size_t k = 0; k <= Ks; ++k) {
        partial += terms[k][r];
        const double e = g[r] - partial;
        resid[k][r] = e * e;
      }
    }
    for (std::size_t k = 0; k <= Ks; ++k) {
      const Estimate e = mean_estimate(resid[k]);
      rep.add_info("chaos_residual_K" + std::to_string(k) + et, e.value, e.std_error);
      if (k == 0) continue;
      std::vector<double> diff(n);
      for (std::size_t r = 0; r < n; ++r) diff[r] = resid[k][r] - resid[k - 1][r];
      const Estimate de = mean_estimate(diff);
      rep.add_check("chaos_residual_nonincreasing_K" + std::to_string(k) + et, de.value,
                    de.value <= 3.0 * de.std_error, de.std_error);
    }
    std::vector<double> centred(n);
    for (std::size_t r = 0; r < n; ++r) centred[r] = (g[r] - gm.value) * (g[r] - gm.value);
    const Estimate frac = ratio_estimate(resid[Ks], centred);
    if (ie == 0) {
      rep.add_check("chaos_residual_fraction_le_0.1" + et, frac.value, frac.value <= 0.1, frac.std_error);
    } else {
      rep.add_info("chaos_residual_fraction" + et, frac.value, frac.std_error);
    }
    std::vector<double> gammas = {c.gamma, 0.0, (4.0 - d) / 2.0};
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
    for (double gamma : gammas) {
      rep.add_info("chaos_sobolev_gamma" + tag(gamma) + et, sobolev_partial_norm(m, gamma, K));
    }
  }

  // The as-written form on a smaller sample: cross-order correlations and
  // truncation residual, reported for comparison only.
  {
    const double eps = c.eps_grid.front();
    const ChaosSpec spec{eps, c.u, ChaosForm::as_written};
    const MonteCarlo mc{std::min<std::size_t>(c.n_samples, 2000), c.seed};
    const std::vector<ChaosSample> samples = sample_chaos(model, grid, K, spec, mc);
    std::vector<std::vector<double>> t(Ks + 1, std::vector<double>(samples.size()));
    std::vector<double> resid(samples.size()), g(samples.size());
    for (std::size_t r = 0; r < samples.size(); ++r) {
      double partial = 0.0;
      for (std::size_t k = 0; k <= Ks; ++k) {
        t[k][r] = samples[r].terms[k];
        partial += t[k][r];
      }
      g[r] = samples[r].functional;
      resid[r] = (g[r] - partial) * (g[r] - partial);
    }
    for (std::size_t j = 1; j <= std::min<std::size_t>(Ks, 3); ++j) {
      for (std::size_t k = j + 1; k <= std::min<std::size_t>(Ks, 4); ++k) {
        const double corr = sample_covariance(t[j], t[k]) /
                            std::sqrt(sample_covariance(t[j], t[j]) * sample_covariance(t[k], t[k]));
        rep.add_info("as_written_corr_" + std::to_string(j) + "_" + std::to_string(k) + "_eps" + tag(eps),
                     corr);
      }
    }
    const Estimate er = mean_estimate(resid);
    rep.add_info("as_written_residual_K" + std::to_string(K) + "_eps" + tag(eps), er.value, er.std_error);
  }

  // Bridge expansion: closed second moments and gamma-weighted partial sums.
  const std::vector<double> bm = bridge_second_moments(kMaxBridgeOrder);
  const double s40 = sobolev_partial_norm(bm, c.gamma, kMaxBridgeOrder);
  const double s39 = sobolev_partial_norm(bm, c.gamma, kMaxBridgeOrder - 1);
  rep.add_info("bridge_sobolev_gamma" + tag(c.gamma) + "_K40", s40);
  rep.add_info("bridge_successive_ratio_gap_K40", s40 / s39 - 1.0);
  bool decaying = true;
  for (int k = 2; k + 2 <= kMaxBridgeOrder; k += 2) {
    const double inc = std::pow(k + 1.0, c.gamma) * bm[static_cast<std::size_t>(k)];
    const double next = std::pow(k + 3.0, c.gamma) * bm[static_cast<std::size_t>(k + 2)];
    decaying = decaying && next > 0.0 && next < inc;
  }
  rep.add_check("bridge_weighted_increments_decreasing", s40, decaying);
  return rep;
}

ExperimentReport fac_study_cmd(const ExperimentConfig& c) {
  require_model(c, {"brownian_motion", "integrator"}, "fac");
  if (c.eps_grid.size() < 3) throw ConfigError("fac needs at least 3 eps values");
  ExperimentReport rep(c);
  const TimeGrid grid(c.n_steps);
  const ProcessModel model = build_model(c, grid);
  const FunctionalSpec family = family_of(c);
  validate_spec(family, c.dimension);
  if (auto w = spec_warning(family, c.dimension)) rep.add_warning(*w);
  const MonteCarlo mc = mc_of(c);

  const bool endpoint_oracle = std::holds_alternative<EndpointKernel>(family) &&
                               c.model == "brownian_motion" && c.dimension == 1;
  if (endpoint_oracle) {
    std::vector<PolyFunctional> polys;
    std::vector<int> orders;
    for (int n = 0; n <= c.degree; n += 2) {
      polys.push_back(PolyFunctional::hermite(n));
      orders.push_back(n);
    }
    const FacRatioTable table = fac_ratio_table(model, grid, family, c.eps_grid, polys, mc);
    for (std::size_t e = 0; e < c.eps_grid.size(); ++e) {
      for (std::size_t i = 0; i < polys.size(); ++i) {
        const int n = orders[i];
        const Estimate& r = table.ratio[e][i];
        const std::string name = "fac_oracle_H" + std::to_string(n) + "_eps" + tag(c.eps_grid[e]);
        rep.add_oracle(name, r.value, r.std_error, endpoint_hermite_ratio(n, c.eps_grid[e]), 0.0);
        const double bound = endpoint_hermite_ratio(n, 0.0);
        rep.add_check(name + "_below_bound", r.value, r.value <= bound + 3.0 * r.std_error, r.std_error);
      }
    }
  }

  const FacStudyReport study =
      uniform_fac_study(model, grid, family, c.eps_grid, c.degree, c.n_polys, mc);
  bool finite = std::isfinite(study.sup);
  for (std::size_t e = 0; e < study.eps_grid.size(); ++e) {
    finite = finite && std::isfinite(study.max_ratio[e]);
    rep.add_info("fac_max_ratio_eps" + tag(study.eps_grid[e]), study.max_ratio[e], study.max_ratio_se[e]);
  }
  rep.add_check("fac_ratios_finite", study.sup, finite, study.sup_se);
  const double coarse = std::max(study.max_ratio[0], study.max_ratio[1]);
  rep.add_check("fac_plateau_factor_le_2", study.sup / coarse,
                study.sup <= 2.0 * coarse + 3.0 * study.sup_se, study.sup_se / coarse);
  if (study.oracle_bound) rep.add_info("fac_oracle_bound", *study.oracle_bound);

  if (const auto* in = std::get_if<Integrator>(&model)) {
    const OperatorBounds b = operator_bounds(*in->op);
    if (c.operator_kind == "diag_linear") {
      // Extremes of (1 + s/2)^2 on a dense grid of [0, 1].
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (int i = 0; i <= 100000; ++i) {
        const double a = 1.0 + 0.5 * (i / 100000.0);
        lo = std::min(lo, a * a);
        hi = std::max(hi, a * a);
      }
      const double tol = 2.0 / static_cast<double>(grid.steps());
      rep.add_oracle("operator_bound_lower", b.lower, 0.0, lo, tol);
      rep.add_oracle("operator_bound_upper", b.upper, 0.0, hi, tol);
    } else if (c.operator_kind == "identity") {
      rep.add_oracle("operator_bound_lower", b.lower, 0.0, 1.0, 1e-12);
      rep.add_oracle("operator_bound_upper", b.upper, 0.0, 1.0, 1e-12);
    } else {
      rep.add_info("operator_bound_lower", b.lower);
      rep.add_info("operator_bound_upper", b.upper);
    }
  }

  const TailMomentReport tails =
      tail_moment_diagnostic(model, grid, family, c.eps_grid, c.basis_size, mc);
  const bool bm_model = c.model == "brownian_motion" ||
                        (c.model == "integrator" && c.operator_kind == "identity");
  for (std::size_t row = 0; row < tails.tails.size(); ++row) {
    const std::string rt = row == 0 ? "_unweighted" : "_eps" + tag(c.eps_grid[row - 1]);
    bool decreasing = true;
    for (std::size_t n = 1; n < tails.tails[row].size(); ++n) {
      decreasing = decreasing && tails.tails[row][n].value <= tails.tails[row][n - 1].value;
    }
    rep.add_check("kl_tail_decreasing" + rt, tails.tails[row][0].value, decreasing);
    for (int n = 1; n <= c.basis_size; n *= 2) {
      const Estimate& t = tails.tails[row][static_cast<std::size_t>(n - 1)];
      const std::string name = "kl_tail_n" + std::to_string(n) + rt;
      if (row == 0 && bm_model) {
        double oracle = 0.0;
        for (int k = n; k <= c.basis_size; ++k) oracle += kl_eigenvalue(k);
        rep.add_oracle(name, t.value, t.std_error, static_cast<double>(c.dimension) * oracle, 0.0, 4.0);
      } else {
        rep.add_info(name, t.value, t.std_error);
      }
    }
  }

  std::vector<TimePair> pairs;
  for (double tau : {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2}) pairs.push_back({0.25, 0.25 + tau});
  const HolderReport hold =
      holder_moment_diagnostic(model, grid, family, c.eps_grid, c.m0, pairs, mc);
  for (std::size_t row = 0; row < hold.exponent.size(); ++row) {
    const Estimate& e = hold.exponent[row];
    if (row == 0) {
      if (bm_model) {
        rep.add_oracle("holder_exponent_unweighted", e.value, e.std_error, c.m0, 0.0, 4.0);
      } else {
        rep.add_info("holder_exponent_unweighted", e.value, e.std_error);
      }
      continue;
    }
    rep.add_check("holder_exponent_gt_1_eps" + tag(c.eps_grid[row - 1]), e.value,
                  e.value - 3.0 * e.std_error > 1.0, e.std_error);
  }
  return rep;
}

ExperimentReport sweep_experiment(const ExperimentConfig& c) {
  require_model(c, {"brownian_motion", "integrator", "degenerate_line", "smooth_stationary"}, "sweep");
  ExperimentReport rep(c);
  const TimeGrid grid(c.n_steps);
  const ProcessModel model = build_model(c, grid);
  const std::size_t d = model_dimension(model);
  const FunctionalSpec family = family_of(c);
  validate_spec(family, d);
  if (auto w = spec_warning(family, d)) rep.add_warning(*w);
  const auto values = parallel_map(c.n_samples, [&](std::size_t r) {
    return eval_functional_family(family, c.eps_grid, sample(model, grid, replica_seed(c.seed, r)));
  });
  for (std::size_t e = 0; e < c.eps_grid.size(); ++e) {
    const FunctionalSpec spec = with_eps(family, c.eps_grid[e]);
    const std::string et = "_eps" + tag(c.eps_grid[e]);
    const double exact = discrete_expectation(spec, model, grid);
    const Estimate m = mean_estimate(column(values, e));
    rep.add_oracle("sweep_mean" + et, m.value, m.std_error, exact, 0.0, 4.0);
    if (c.model == "brownian_motion") {
      rep.add_info("sweep_discretization_gap" + et, exact - brownian_mean(spec, d));
    }
  }
  return rep;
}

ExperimentReport selftest_experiment(const ExperimentConfig& c) {
  ExperimentReport rep(c);
  const auto exact = [&](const std::string& name, double v, double oracle, double tol = 1e-9) {
    rep.add_oracle(name, v, 0.0, oracle, tol);
  };
  exact("hermite_0_at_3.7", hermite(0, 3.7), 1.0);
  exact("hermite_2_at_0", hermite(2, 0.0), -1.0);
  exact("hermite_3_at_2", hermite(3, 2.0), 2.0);
  exact("hermite_bound_0", hermite_bound_constant(0), 1.0, 1e-8);
  exact("hermite_bound_1", hermite_bound_constant(1), std::sqrt(2.0) * std::exp(-0.5), 1e-8);
  const double x0[1] = {0.0};
  const double x00[2] = {0.0, 0.0};
  const double x1[1] = {1.0};
  exact("heat_kernel_d1_eps1_x0", heat_kernel(HeatKernelParams{1, 1.0}, x0), 0.3989422804, 1e-10);
  exact("heat_kernel_d2_eps1_x0", heat_kernel(HeatKernelParams{2, 1.0}, x00), 0.1591549431, 1e-10);
  exact("heat_kernel_d1_eps0.5_x1", heat_kernel(HeatKernelParams{1, 0.5}, x1), 0.2075537487, 1e-10);
  exact("heat_convolve_variance", heat_convolve_variance(0.25, 0.75), 1.0);
  exact("heat_kernel_var2_x0", heat_kernel(heat_convolve_variance(1.0, 1.0), 0.0), 0.2820947918, 1e-10);
  exact("basis_norm_idx2_sigma1", product_basis_norm(MultiIndex{2}, 1.0), std::sqrt(2.0));
  exact("interval_one", integrate_interval([](double) { return 1.0; }, default_interval_rule()), 1.0);
  exact("interval_t2", integrate_interval([](double t) { return t * t; }, QuadratureRule::trapezoid(1000)),
        1.0 / 3.0, 1e-6);
  const auto one = [](std::span<const double>) { return 1.0; };
  exact("simplex_volume_2", integrate_simplex(one, 2, default_simplex_rule()), 0.5);
  exact("simplex_volume_3", integrate_simplex(one, 3, QuadratureRule::gauss_legendre(20)), 1.0 / 6.0);
  exact("multi_indices_0_3", static_cast<double>(multi_indices(0, 3).size()), 1.0, 0.0);
  exact("multi_indices_2_2", static_cast<double>(multi_indices(2, 2).size()), 3.0, 0.0);
  exact("multi_indices_5_3", static_cast<double>(multi_indices(5, 3).size()), 21.0, 0.0);
  exact("bridge_term_n0", bridge_term(1.3, 0), 1.0 / std::sqrt(2.0 * kPi));
  exact("bridge_term_n1", bridge_term(1.3, 1), 0.0);
  exact("bridge_term_n2_x0", bridge_term(0.0, 2), 0.1994711402, 1e-10);
  exact("bridge_variance_n0", bridge_term_variance(0), 1.0 / (2.0 * kPi));
  exact("bridge_variance_n2", bridge_term_variance(2), 0.0795774715, 1e-10);
  exact("bridge_variance_n3", bridge_term_variance(3), 0.0);

  const IntegratorOperator id = IntegratorOperator::identity(c.n_steps);
  exact("sigma_identity", sigma_interval(id, 0.25, 0.75), std::sqrt(0.5), 1e-12);
  exact("sigma_equal_times", sigma_interval(id, 0.5, 0.5), 0.0);
  exact("operator_bounds_identity_lower", operator_bounds(id).lower, 1.0, 1e-12);
  exact("operator_bounds_identity_upper", operator_bounds(id).upper, 1.0, 1e-12);
  const double part[3] = {0.0, 0.5, 1.0};
  const double coef[2] = {2.0, -1.0};
  const InequalityCheck ineq = integrator_inequality(id, part, coef);
  exact("integrator_inequality_identity", ineq.lhs, 2.5, 1e-12);

  const TimeGrid grid(c.n_steps);
  exact("covariance_bm", covariance(BrownianMotion{1}, grid, 0.25, 0.75)(0, 0), 0.25, 0.0);
  exact("covariance_line", covariance(DegenerateLine{}, grid, 1.0, 1.0)(0, 0), 1.0, 0.0);
  const Path zero(grid, 1);
  exact("endpoint_kernel_zero_path", eval_functional(EndpointKernel{1.0}, zero), 0.3989422804, 1e-10);
  exact("local_time_zero_path", eval_functional(LocalTime{0.01}, zero), heat_kernel(0.01, 0.0), 1e-12);
  exact("self_intersection_zero_path", eval_functional(SelfIntersection{0.1, {0.5}}, zero),
        0.5 * heat_kernel(0.1, 0.5), 1e-12);
  exact("indicator_constant_path", indicator_local_time(zero, 0.0, 0.01), 50.0, 1e-9);
  const double f_one[1] = {1.0};
  exact("occupation_constant", occupation_identity(zero, 0.01, f_one).lhs, 1.0, 1e-12);
  exact("poly_hermite2_zero_path", eval_poly(PolyFunctional::hermite(2), zero), -1.0, 0.0);

  Path wave(grid, 1);
  for (std::size_t k = 0; k <= grid.steps(); ++k) {
    wave(k, 0) = (k == 0 || 2 * k == grid.steps() || k == grid.steps()) ? 0.0 : std::sin(2.0 * kPi * grid.node(k));
  }
  exact("upcrossings_sine", static_cast<double>(upcrossing_count(wave, 0.0)), 1.0, 0.0);
  const double times[3] = {0.25, 0.5, 1.0};
  const double lc[3] = {1.0, -0.5, 2.0};
  const LinearMoments lm = linear_functional_moments(BrownianMotion{1}, grid, times, lc);
  exact("gaussian_fourth_moment", lm.fourth, 3.0 * lm.second * lm.second, 1e-12 * lm.fourth);
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const ExperimentConfig c = resolve_defaults(config);
  validate_config(c);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  if (c.experiment == "rice") rep = rice_experiment(c);
  else if (c.experiment == "kac") rep = kac_experiment(c);
  else if (c.experiment == "bridge") rep = bridge_experiment(c);
  else if (c.experiment == "chaos") rep = chaos_table(c);
  else if (c.experiment == "fac") rep = fac_study_cmd(c);
  else if (c.experiment == "sweep") rep = sweep_experiment(c);
  else rep = selftest_experiment(c);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace wcl
