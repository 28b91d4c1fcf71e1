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

#ifndef WCL_QUADRATURE_HPP
#define WCL_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wcl {

enum class RuleKind { trapezoid, gauss_legendre };

/// A one-dimensional rule family and its node count. Simplex rules are tensor
/// products of the interval rule pushed through a collapsed-coordinate map.
struct QuadratureRule {
  RuleKind kind = RuleKind::trapezoid;
  std::size_t node_count = 2000;

  static QuadratureRule trapezoid(std::size_t nodes) { return {RuleKind::trapezoid, nodes}; }
  static QuadratureRule gauss_legendre(std::size_t nodes) {
    return {RuleKind::gauss_legendre, nodes};
  }

  /// Throws DomainError when node_count < 2.
  void validate() const;
};

/// 2000-node trapezoid on [0, 1].
QuadratureRule default_interval_rule();
/// 200 Gauss-Legendre nodes per axis, used for Delta_n.
QuadratureRule default_simplex_rule();

struct NodesWeights {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre recurrence).
NodesWeights gauss_legendre(std::size_t n);

/// Gauss-Hermite rule for the standard normal weight (weights sum to 1),
/// computed with the Golub-Welsch eigenvalue method.
NodesWeights gauss_hermite(std::size_t n);

/// Nodes/weights of `rule` mapped affinely onto [a, b].
NodesWeights interval_rule(const QuadratureRule& rule, double a, double b);

/// Integral of f over [0, 1]. Throws EvaluationError if f is not finite at a node.
double integrate_interval(const std::function<double(double)>& f, const QuadratureRule& rule);

/// Integral of f over [a, b].
double integrate_range(const std::function<double(double)>& f, double a, double b,
                       const QuadratureRule& rule);

/// How [0,1]^n is mapped onto Delta_n = {0 <= t_1 <= ... <= t_n <= 1}.
///  - collapsed: t_n = y_n, t_j = t_{j+1} y_j.
///  - collapsed_sine: the same map after y = sin^2(pi s / 2) on every axis,
///    which absorbs integrable y^{-1/2} and (1-y)^{-1/2} endpoint singularities
///    (these arise from t_1^{-1/2} and (t_{j+1} - t_j)^{-1/2} factors).
enum class SimplexMap { collapsed, collapsed_sine };

/// Points of Delta_n stored row-major (point i occupies [i*order, (i+1)*order)).
struct SimplexRule {
  int order = 2;
  std::vector<double> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(order), static_cast<std::size_t>(order)};
  }
};

/// Tensor rule on Delta_n for n in {2, 3, 4}. The weights are checked to sum
/// to 1/n!; a mismatch beyond the rule's accuracy raises EvaluationError.
SimplexRule simplex_rule(int order, const QuadratureRule& rule,
                         SimplexMap map = SimplexMap::collapsed);

double integrate_simplex(const std::function<double(std::span<const double>)>& f, int order,
                         const QuadratureRule& rule, SimplexMap map = SimplexMap::collapsed);

}  // namespace wcl

#endif  // WCL_QUADRATURE_HPP
