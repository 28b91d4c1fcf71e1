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

#include "wcl/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wcl/analytic.hpp"
#include "wcl/error.hpp"
#include "wcl/stats.hpp"

namespace wcl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// (2 pi eps)^{-d/2} exp(-r2 / (2 eps)) with the library's underflow cutoff.
double kernel_from_r2(double r2, double eps, std::size_t d) {
  const double q = r2 / (2.0 * eps);
  if (q > kHeatKernelUnderflow) return 0.0;
  return std::exp(-q - 0.5 * static_cast<double>(d) * std::log(2.0 * kPi * eps));
}

const std::vector<double>* offset_of(const FunctionalSpec& spec) {
  if (const auto* o = std::get_if<OffsetLocalTime>(&spec)) return &o->u;
  if (const auto* s = std::get_if<SelfIntersection>(&spec)) return &s->u;
  return nullptr;
}

double offset_r2(std::span<const double> x, const std::vector<double>* u) {
  double r2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = x[j] - (u ? (*u)[j] : 0.0);
    r2 += v * v;
  }
  return r2;
}

bool is_grid_rule(const QuadratureRule& rule, const TimeGrid& grid) {
  return rule.kind == RuleKind::trapezoid && rule.node_count == grid.node_count();
}

// Product trapezoid weights folded onto {i <= j}.
double pair_weight(const std::vector<double>& c, std::size_t i, std::size_t j) {
  return i == j ? 0.5 * c[i] * c[i] : c[i] * c[j];
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double spec_eps(const FunctionalSpec& spec) {
  return std::visit([](const auto& s) { return s.eps; }, spec);
}

FunctionalSpec with_eps(const FunctionalSpec& spec, double eps) {
  FunctionalSpec out = spec;
  std::visit([eps](auto& s) { s.eps = eps; }, out);
  return out;
}

std::string spec_name(const FunctionalSpec& spec) {
  return std::visit(Overloaded{[](const LocalTime&) { return std::string("local_time"); },
                               [](const OffsetLocalTime&) { return std::string("offset_local_time"); },
                               [](const SelfIntersection&) { return std::string("self_intersection"); },
                               [](const EndpointKernel&) { return std::string("endpoint_kernel"); }},
                    spec);
}

void validate_spec(const FunctionalSpec& spec, std::size_t dimension) {
  const double eps = spec_eps(spec);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("functional needs eps > 0");
  if (std::holds_alternative<LocalTime>(spec) && dimension != 1) {
    throw ConfigError("LocalTime needs a scalar path");
  }
  if (const auto* u = offset_of(spec); u && u->size() != dimension) {
    throw ConfigError("offset u has length " + std::to_string(u->size()) + " but the path has d = " +
                      std::to_string(dimension));
  }
}

std::optional<std::string> spec_warning(const FunctionalSpec& spec, std::size_t dimension) {
  const auto* u = offset_of(spec);
  if (!u || dimension <= 1) return std::nullopt;
  for (double v : *u) {
    if (v != 0.0) return std::nullopt;
  }
  return spec_name(spec) + " with u = 0 in d = " + std::to_string(dimension) +
         ": the family is not expected to converge as eps -> 0";
}

std::vector<double> trapezoid_node_weights(const TimeGrid& grid) {
  std::vector<double> c(grid.node_count(), grid.step());
  c.front() *= 0.5;
  c.back() *= 0.5;
  return c;
}

QuadratureRule grid_rule(const TimeGrid& grid) { return QuadratureRule::trapezoid(grid.node_count()); }

void interpolate(const Path& path, double t, std::span<double> out) {
  const std::size_t n = path.grid().steps();
  const double x = std::clamp(t, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(x), n - 1);
  const double a = x - static_cast<double>(k);
  for (std::size_t j = 0; j < path.dimension(); ++j) {
    out[j] = (1.0 - a) * path(k, j) + a * path(k + 1, j);
  }
}

double eval_functional(const FunctionalSpec& spec, const Path& path) {
  return eval_functional_family(spec, std::span<const double>(std::array{spec_eps(spec)}), path)[0];
}

double eval_functional(const FunctionalSpec& spec, const Path& path, const QuadratureRule& rule) {
  if (is_grid_rule(rule, path.grid())) return eval_functional(spec, path);
  rule.validate();
  const std::size_t d = path.dimension();
  validate_spec(spec, d);
  const double eps = spec_eps(spec);
  const auto* u = offset_of(spec);
  if (std::holds_alternative<EndpointKernel>(spec)) {
    return kernel_from_r2(offset_r2(path.node(path.grid().steps()), nullptr), eps, d);
  }
  std::vector<double> a(d), b(d);
  if (std::holds_alternative<SelfIntersection>(spec)) {
    return integrate_simplex(
        [&](std::span<const double> t) {
          interpolate(path, t[0], a);
          interpolate(path, t[1], b);
          for (std::size_t j = 0; j < d; ++j) b[j] -= a[j];
          return kernel_from_r2(offset_r2(b, u), eps, d);
        },
        2, rule);
  }
  return integrate_interval(
      [&](double t) {
        interpolate(path, t, a);
        return kernel_from_r2(offset_r2(a, u), eps, d);
      },
      rule);
}

std::vector<double> eval_functional_family(const FunctionalSpec& spec,
                                           std::span<const double> eps_grid, const Path& path) {
  const std::size_t d = path.dimension();
  for (double e : eps_grid) validate_spec(with_eps(spec, e), d);
  const std::size_t ne = eps_grid.size();
  std::vector<double> out(ne, 0.0);
  const auto* u = offset_of(spec);
  const std::size_t n_nodes = path.grid().node_count();

  if (std::holds_alternative<EndpointKernel>(spec)) {
    const double r2 = offset_r2(path.node(n_nodes - 1), nullptr);
    for (std::size_t e = 0; e < ne; ++e) out[e] = kernel_from_r2(r2, eps_grid[e], d);
    return out;
  }

  const std::vector<double> c = trapezoid_node_weights(path.grid());
  std::vector<CompensatedSum> sums(ne);
  if (!std::holds_alternative<SelfIntersection>(spec)) {
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const double r2 = offset_r2(path.node(k), u);
      for (std::size_t e = 0; e < ne; ++e) sums[e].add(c[k] * kernel_from_r2(r2, eps_grid[e], d));
    }
  } else {
    std::vector<double> row(ne);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      std::fill(row.begin(), row.end(), 0.0);
      const auto xi = path.node(i);
      for (std::size_t k = i; k < n_nodes; ++k) {
        const auto xk = path.node(k);
        for (std::size_t j = 0; j < d; ++j) diff[j] = xk[j] - xi[j];
        const double r2 = offset_r2(diff, u);
        const double w = pair_weight(c, i, k);
        for (std::size_t e = 0; e < ne; ++e) row[e] += w * kernel_from_r2(r2, eps_grid[e], d);
      }
      for (std::size_t e = 0; e < ne; ++e) sums[e].add(row[e]);
    }
  }
  for (std::size_t e = 0; e < ne; ++e) out[e] = sums[e].value();
  return out;
}

double indicator_local_time(const Path& path, double x, double eps, TimeResolution resolution) {
  if (!(eps > 0.0)) throw DomainError("indicator local time needs eps > 0");
  const auto w = path.scalar();
  const double h = path.grid().step();
  if (resolution == TimeResolution::nodes) {
    const std::vector<double> c = trapezoid_node_weights(path.grid());
    CompensatedSum occupied;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (std::abs(w[k] - x) <= eps) occupied.add(c[k]);
    }
    return occupied.value() / (2.0 * eps);
  }

  // Within cell k the path is a Brownian bridge: mean linear between the
  // node values, variance tau (h - tau) / h at local time tau. The sine map
  // tau = h sin^2(pi s / 2) smooths the sqrt(tau) behaviour at both ends.
  static const NodesWeights gl = gauss_legendre(24);
  const double far = 5.0 * std::sqrt(h);  // ten bridge standard deviations
  CompensatedSum occupied;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    const double a = w[k] - x;
    const double b = w[k + 1] - x;
    const bool same_side = (a > 0.0) == (b > 0.0);
    if (same_side && std::min(std::abs(a), std::abs(b)) > eps + far) continue;
    if (std::max(std::abs(a), std::abs(b)) < eps - far) {
      occupied.add(h);
      continue;
    }
    double cell = 0.0;
    for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
      const double s = 0.5 * (gl.nodes[g] + 1.0);
      const double sn = std::sin(0.5 * kPi * s);
      const double tau = h * sn * sn;
      const double jac = h * 0.5 * kPi * std::sin(kPi * s);
      const double m = a + (b - a) * tau / h;
      const double sd = std::sqrt(std::max(tau * (h - tau) / h, 0.0));
      double p = 0.0;
      if (sd == 0.0) {
        p = std::abs(m) <= eps ? 1.0 : 0.0;
      } else {
        p = std_normal_cdf((eps - m) / sd) - std_normal_cdf((-eps - m) / sd);
      }
      cell += 0.5 * gl.weights[g] * jac * p;
    }
    occupied.add(cell);
  }
  return occupied.value() / (2.0 * eps);
}

std::vector<double> local_time_field(const Path& path, double eps, std::span<const double> x_grid) {
  if (!(eps > 0.0)) throw DomainError("local time field needs eps > 0");
  const auto w = path.scalar();
  const std::vector<double> c = trapezoid_node_weights(path.grid());
  std::vector<double> out(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    CompensatedSum s;
    for (std::size_t k = 0; k < w.size(); ++k) s.add(c[k] * heat_kernel(eps, w[k] - x_grid[i]));
    out[i] = s.value();
  }
  return out;
}

OccupationCheck occupation_identity(const Path& path, double eps, std::span<const double> coeffs) {
  if (!(eps > 0.0)) throw DomainError("occupation identity needs eps > 0");
  if (coeffs.empty()) throw DomainError("occupation identity needs a polynomial");
  if (coeffs.size() > 5) throw DomainError("occupation identity supports degree <= 4");
  const auto w = path.scalar();
  const std::vector<double> c = trapezoid_node_weights(path.grid());
  const auto poly = [&](double x) {
    double v = 0.0;
    for (std::size_t m = coeffs.size(); m-- > 0;) v = v * x + coeffs[m];
    return v;
  };
  // E[(y + sqrt(eps) Z)^m] = sum_{j even} C(m, j) y^{m-j} eps^{j/2} (j-1)!!
  const auto smoothed = [&](double y) {
    double v = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
      double moment = 0.0;
      double z_moment = 1.0;  // (j-1)!! eps^{j/2}
      for (std::size_t j = 0; j <= m; j += 2) {
        const double binom = factorial(static_cast<int>(m)) /
                             (factorial(static_cast<int>(j)) * factorial(static_cast<int>(m - j)));
        moment += binom * std::pow(y, static_cast<double>(m - j)) * z_moment;
        z_moment *= static_cast<double>(j + 1) * eps;
      }
      v += coeffs[m] * moment;
    }
    return v;
  };
  static const NodesWeights gh = gauss_hermite(5);  // exact through degree 9
  const double r = std::sqrt(eps);
  CompensatedSum lhs, rhs;
  for (std::size_t k = 0; k < w.size(); ++k) {
    double inner = 0.0;
    for (std::size_t g = 0; g < gh.nodes.size(); ++g) inner += gh.weights[g] * poly(w[k] + r * gh.nodes[g]);
    lhs.add(c[k] * inner);
    rhs.add(c[k] * smoothed(w[k]));
  }
  return {lhs.value(), rhs.value()};
}

double self_intersection_mean_bm(double eps, std::span<const double> u, const QuadratureRule& rule) {
  if (!(eps > 0.0)) throw DomainError("self_intersection_mean_bm needs eps > 0");
  const std::size_t d = u.size();
  if (d == 0) throw ConfigError("offset u must be non-empty");
  const double r2 = offset_r2(u, nullptr);
  return integrate_interval([&](double tau) { return (1.0 - tau) * kernel_from_r2(r2, tau + eps, d); },
                            rule);
}

}  // namespace wcl
