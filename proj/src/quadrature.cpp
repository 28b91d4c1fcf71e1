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

#include "wcl/quadrature.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "wcl/analytic.hpp"
#include "wcl/error.hpp"
#include "wcl/stats.hpp"

namespace wcl {

void QuadratureRule::validate() const {
  if (node_count < 2) throw DomainError("quadrature rule needs at least 2 nodes");
}

QuadratureRule default_interval_rule() { return QuadratureRule::trapezoid(2000); }
QuadratureRule default_simplex_rule() { return QuadratureRule::gauss_legendre(200); }

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the Bonnet recurrence, n >= 1.
std::pair<double, double> legendre_pair(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

NodesWeights gauss_legendre(std::size_t n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  if (n == 1) return {{0.0}, {2.0}};
  NodesWeights r{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, q] = legendre_pair(n, x);
      const double dx = p / (dn * (x * p - q) / (x * x - 1.0));
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, q] = legendre_pair(n, x);
    const double dp = dn * (x * p - q) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

NodesWeights gauss_hermite(std::size_t n) {
  if (n < 1) throw DomainError("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  NodesWeights r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    r.nodes[i] = solver.eigenvalues()(ii);
    const double v0 = solver.eigenvectors()(0, ii);
    r.weights[i] = v0 * v0;
  }
  return r;
}

NodesWeights interval_rule(const QuadratureRule& rule, double a, double b) {
  rule.validate();
  const std::size_t n = rule.node_count;
  NodesWeights r{std::vector<double>(n), std::vector<double>(n)};
  const double len = b - a;
  if (rule.kind == RuleKind::trapezoid) {
    const double h = len / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      r.nodes[i] = a + h * static_cast<double>(i);
      r.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
    r.nodes[n - 1] = b;
  } else {
    const NodesWeights gl = gauss_legendre(n);
    for (std::size_t i = 0; i < n; ++i) {
      r.nodes[i] = a + 0.5 * len * (gl.nodes[i] + 1.0);
      r.weights[i] = 0.5 * len * gl.weights[i];
    }
  }
  return r;
}

double integrate_range(const std::function<double(double)>& f, double a, double b,
                       const QuadratureRule& rule) {
  const NodesWeights nw = interval_rule(rule, a, b);
  CompensatedSum sum;
  for (std::size_t i = 0; i < nw.nodes.size(); ++i) {
    const double v = f(nw.nodes[i]);
    if (!std::isfinite(v)) {
      throw EvaluationError("integrand not finite at node t = " + std::to_string(nw.nodes[i]));
    }
    sum.add(nw.weights[i] * v);
  }
  return sum.value();
}

double integrate_interval(const std::function<double(double)>& f, const QuadratureRule& rule) {
  return integrate_range(f, 0.0, 1.0, rule);
}

SimplexRule simplex_rule(int order, const QuadratureRule& rule, SimplexMap map) {
  if (order < 2 || order > 4) {
    throw ConfigError("simplex_rule: order " + std::to_string(order) + " not in {2, 3, 4}");
  }
  rule.validate();
  const NodesWeights base = interval_rule(rule, 0.0, 1.0);
  const std::size_t m = base.nodes.size();

  // Per-axis substitution y = phi(s) with derivative phi'(s).
  std::vector<double> y(m);
  std::vector<double> wy(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = base.nodes[i];
    if (map == SimplexMap::collapsed_sine) {
      const double sh = std::sin(0.5 * kPi * s);
      y[i] = sh * sh;
      wy[i] = base.weights[i] * 0.5 * kPi * std::sin(kPi * s);
    } else {
      y[i] = s;
      wy[i] = base.weights[i];
    }
  }

  std::size_t total = 1;
  for (int j = 0; j < order; ++j) total *= m;
  const auto n = static_cast<std::size_t>(order);
  SimplexRule out;
  out.order = order;
  out.points.resize(total * n);
  out.weights.resize(total);

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> t(n);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (std::size_t j = 0; j < n; ++j) {
      idx[j] = rem % m;
      rem /= m;
    }
    // idx[n-1] drives t_n, the remaining axes are collapsed ratios.
    double w = wy[idx[n - 1]];
    t[n - 1] = y[idx[n - 1]];
    for (std::size_t j = n - 1; j-- > 0;) {
      w *= wy[idx[j]] * t[j + 1];
      t[j] = t[j + 1] * y[idx[j]];
    }
    for (std::size_t j = 0; j < n; ++j) out.points[p * n + j] = t[j];
    out.weights[p] = w;
  }

  double volume = 0.0;
  for (double w : out.weights) volume += w;
  const double exact = 1.0 / factorial(order);
  double tol = 0.0;
  if (rule.kind == RuleKind::gauss_legendre) {
    tol = (map == SimplexMap::collapsed || m >= 24) ? 1e-9 : 1e-3;
  } else {
    tol = 20.0 / static_cast<double>(m * m);
  }
  if (std::abs(volume - exact) > tol) {
    throw EvaluationError("simplex_rule: weights sum to " + std::to_string(volume) +
                          ", expected 1/" + std::to_string(order) + "!");
  }
  return out;
}

double integrate_simplex(const std::function<double(std::span<const double>)>& f, int order,
                         const QuadratureRule& rule, SimplexMap map) {
  const SimplexRule sr = simplex_rule(order, rule, map);
  CompensatedSum sum;
  for (std::size_t i = 0; i < sr.size(); ++i) {
    const double v = f(sr.point(i));
    if (!std::isfinite(v)) throw EvaluationError("simplex integrand not finite at a node");
    sum.add(sr.weights[i] * v);
  }
  return sum.value();
}

}  // namespace wcl
