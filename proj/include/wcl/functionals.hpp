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

#ifndef WCL_FUNCTIONALS_HPP
#define WCL_FUNCTIONALS_HPP

/**
 * @file functionals.hpp
 * @brief Smoothed local times and self-intersection functionals of a path.
 *
 *   LocalTime        int_0^1 p_eps(f(t)) dt                  (scalar paths)
 *   OffsetLocalTime  int_0^1 p_eps^d(f(t) - u) dt
 *   SelfIntersection int_{s<t} p_eps^d(f(t) - f(s) - u) ds dt
 *   EndpointKernel   p_eps^d(f(1))
 *
 * With the grid rule (trapezoid on the path's own nodes) time integrals use
 * node values and trapezoid weights c_k. The triangle s < t uses the product
 * weights c_i c_j for i < j plus c_i^2 / 2 on the diagonal, which is the
 * trapezoid product rule folded onto the triangle. Any other rule evaluates
 * the path by linear interpolation at the rule's nodes.
 */

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wcl/processes.hpp"
#include "wcl/quadrature.hpp"

namespace wcl {

struct LocalTime {
  double eps = 0.01;
};

struct OffsetLocalTime {
  double eps = 0.01;
  std::vector<double> u;
};

struct SelfIntersection {
  double eps = 0.01;
  std::vector<double> u;
};

struct EndpointKernel {
  double eps = 0.01;
};

using FunctionalSpec = std::variant<LocalTime, OffsetLocalTime, SelfIntersection, EndpointKernel>;

[[nodiscard]] double spec_eps(const FunctionalSpec& spec);
/// Copy of spec with eps replaced.
[[nodiscard]] FunctionalSpec with_eps(const FunctionalSpec& spec, double eps);
/// "local_time", "offset_local_time", "self_intersection" or "endpoint_kernel".
[[nodiscard]] std::string spec_name(const FunctionalSpec& spec);

/// Throws DomainError for eps <= 0 and ConfigError when the spec does not fit
/// a d-dimensional path.
void validate_spec(const FunctionalSpec& spec, std::size_t dimension);

/// Non-fatal remark for a valid spec: u = 0 in dimension d > 1, where the
/// offset families are not expected to have an eps -> 0 limit.
[[nodiscard]] std::optional<std::string> spec_warning(const FunctionalSpec& spec,
                                                      std::size_t dimension);

/// Trapezoid weights of the grid nodes: h/2 at the ends, h inside.
[[nodiscard]] std::vector<double> trapezoid_node_weights(const TimeGrid& grid);

/// Trapezoid on the path's own nodes.
[[nodiscard]] QuadratureRule grid_rule(const TimeGrid& grid);

/// Linear interpolation of the path at time t in [0, 1].
void interpolate(const Path& path, double t, std::span<double> out);

double eval_functional(const FunctionalSpec& spec, const Path& path, const QuadratureRule& rule);
/// Shorthand for the grid rule.
double eval_functional(const FunctionalSpec& spec, const Path& path);

/// The same functional at several eps values, grid rule. Path-dependent
/// squared distances are computed once and shared across eps.
std::vector<double> eval_functional_family(const FunctionalSpec& spec,
                                           std::span<const double> eps_grid, const Path& path);

/// How the band-occupation time of indicator_local_time is measured.
///  - nodes: trapezoid weights on node membership |f(t_k) - x| <= eps.
///  - bridge_conditional: conditional expectation of the occupation time given
///    the node values when the path is a Brownian motion, i.e. the time spent
///    in the band by the Brownian bridges joining consecutive nodes. Unbiased
///    for the continuous-time occupation of Brownian paths at any h.
enum class TimeResolution { nodes, bridge_conditional };

/// (1 / 2 eps) * time spent by the path in [x - eps, x + eps].
double indicator_local_time(const Path& path, double x, double eps,
                            TimeResolution resolution = TimeResolution::nodes);

/// l_eps(x) = int_0^1 p_eps(f(t) - x) dt at every x of x_grid.
std::vector<double> local_time_field(const Path& path, double eps, std::span<const double> x_grid);

struct OccupationCheck {
  double lhs = 0.0;  ///< int f(x) l_eps(x) dx
  double rhs = 0.0;  ///< int_0^1 (f * p_eps)(f(t)) dt
};

/// Occupation identity for a polynomial f = sum_m coeffs[m] x^m of degree <= 4.
/// The x-integral on the left is done exactly per node by Gauss-Hermite; the
/// right uses closed-form Gaussian moments. Throws DomainError above degree 4.
OccupationCheck occupation_identity(const Path& path, double eps, std::span<const double> coeffs);

/// 1-D reference value of E G_eps for Brownian motion,
/// int_0^1 (1 - tau) p^d_{tau + eps}(u) dtau.
double self_intersection_mean_bm(double eps, std::span<const double> u,
                                 const QuadratureRule& rule = default_interval_rule());

}  // namespace wcl

#endif  // WCL_FUNCTIONALS_HPP
