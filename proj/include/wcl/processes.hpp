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

#ifndef WCL_PROCESSES_HPP
#define WCL_PROCESSES_HPP

/**
 * @file processes.hpp
 * @brief Gaussian models on a uniform grid of [0, 1]: Brownian motion,
 * Gaussian integrators X_j(t) = int (A 1_[0,t])(s) dw_j(s), the stationary
 * process xi1 cos(wt) + xi2 sin(wt) and the line t * xi.
 *
 * An integrator operator A is represented by a matrix M acting on the cell
 * coefficients of step functions, with inner product <u, v> = h sum u_i v_i.
 * Under this representation every node covariance, sigma(s, t) and the
 * integrator inequality are exact finite-dimensional linear algebra.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace wcl {

/// Nodes t_k = k h, k = 0..n_steps, h = 1 / n_steps.
class TimeGrid {
 public:
  explicit TimeGrid(std::size_t n_steps);

  [[nodiscard]] std::size_t steps() const { return n_steps_; }
  [[nodiscard]] std::size_t node_count() const { return n_steps_ + 1; }
  [[nodiscard]] double step() const { return 1.0 / static_cast<double>(n_steps_); }
  [[nodiscard]] double node(std::size_t k) const;

  /// Index of a grid time; throws ConfigError if t is not a node (tolerance 1e-9 h).
  [[nodiscard]] std::size_t index_of(double t) const;
  [[nodiscard]] bool contains(double t) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::size_t n_steps_;
};

/// Sample path: (n_steps + 1) x d node values, row-major, plus an optional
/// analytic derivative for scalar smooth models.
class Path {
 public:
  Path(TimeGrid grid, std::size_t dimension);

  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }

  double operator()(std::size_t k, std::size_t j) const { return values_[k * dim_ + j]; }
  double& operator()(std::size_t k, std::size_t j) { return values_[k * dim_ + j]; }

  [[nodiscard]] std::span<const double> node(std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }

  /// Node values of a scalar path. Throws ConfigError when d != 1.
  [[nodiscard]] std::span<const double> scalar() const;

  [[nodiscard]] bool has_derivative() const { return !derivative_.empty(); }
  [[nodiscard]] std::span<const double> derivative() const { return derivative_; }
  void set_derivative(std::vector<double> derivative);

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
  std::vector<double> derivative_;
};

class IntegratorOperator {
 public:
  /// Takes an n_cells x n_cells matrix; throws ConfigError if it is not square
  /// or its smallest singular value is below 1e-10.
  explicit IntegratorOperator(Eigen::MatrixXd matrix);

  static IntegratorOperator identity(std::size_t n_cells);
  /// Multiplication by a(s), sampled at cell midpoints.
  static IntegratorOperator cell_multiplication(std::size_t n_cells,
                                                const std::function<double(double)>& a);

  [[nodiscard]] std::size_t cells() const { return static_cast<std::size_t>(matrix_.rows()); }
  [[nodiscard]] double step() const { return 1.0 / static_cast<double>(cells()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// Singular values in decreasing order.
  [[nodiscard]] const Eigen::VectorXd& singular_values() const { return singular_values_; }
  /// Right singular vector of the largest singular value.
  [[nodiscard]] const Eigen::VectorXd& top_right_singular_vector() const { return top_right_; }

  /// Row k is (M 1_[0, t_k])^T, so X(t_k) = sum_i row_k(i) dw_i.
  [[nodiscard]] const Eigen::MatrixXd& node_images() const { return node_images_; }

  /// h <M 1_[0,t_k], M 1_[0,t_l]> = Cov(X_j(t_k), X_j(t_l)).
  [[nodiscard]] double node_covariance(std::size_t k, std::size_t l) const;

  /// h <u, v>
  [[nodiscard]] double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd singular_values_;
  Eigen::VectorXd top_right_;
  Eigen::MatrixXd node_images_;
};

/// Text form: a line "n_cells", a line with N, then N rows of N comma-separated values.
IntegratorOperator read_operator_csv(std::istream& in);
void write_operator_csv(const IntegratorOperator& op, std::ostream& out);

struct BrownianMotion {
  std::size_t dimension = 1;
};

struct Integrator {
  std::shared_ptr<const IntegratorOperator> op;
  std::size_t dimension = 1;
};

struct SmoothStationary {
  double omega = 2.0 * 3.14159265358979323846;
};

struct DegenerateLine {};

using ProcessModel = std::variant<BrownianMotion, Integrator, SmoothStationary, DegenerateLine>;

std::size_t model_dimension(const ProcessModel& model);

/// Throws ConfigError for d = 0, omega <= 0, a null operator, or an operator
/// whose cell count differs from the grid's step count.
void validate_model(const ProcessModel& model, const TimeGrid& grid);

/// Exact node-level sample; a pure function of (model, grid, seed).
Path sample(const ProcessModel& model, const TimeGrid& grid, std::uint64_t seed);

/// Exact d x d covariance of the path at grid times s and t.
Eigen::MatrixXd covariance(const ProcessModel& model, const TimeGrid& grid, double s, double t);

/// sigma(s, t) = ||M 1_[s,t]|| for grid times s <= t of the operator's grid.
double sigma_interval(const IntegratorOperator& op, double s, double t);

struct OperatorBounds {
  double lower = 0.0;  ///< smallest singular value squared
  double upper = 0.0;  ///< largest singular value squared
};

/// m (t - s) <= sigma^2(s, t) <= M (t - s) for all grid s <= t.
OperatorBounds operator_bounds(const IntegratorOperator& op);

struct InequalityCheck {
  double lhs = 0.0;        ///< E[sum a_k (X(t_{k+1}) - X(t_k))]^2
  double rhs_bound = 0.0;  ///< M_up sum a_k^2 (t_{k+1} - t_k)
};

InequalityCheck integrator_inequality(const IntegratorOperator& op,
                                      std::span<const double> partition,
                                      std::span<const double> coeffs);

/// Number of cells with value[k] < c <= value[k + 1]. Throws ConfigError for d != 1.
std::size_t upcrossing_count(const Path& path, double level);

/// Second and fourth moments of l = sum_i a_i X_coord(t_i), computed from the
/// model covariance. The fourth moment is summed over all index quadruples
/// with Isserlis' pairing rule, so E l^4 = 3 (E l^2)^2 can be checked.
struct LinearMoments {
  double second = 0.0;
  double fourth = 0.0;
};

LinearMoments linear_functional_moments(const ProcessModel& model, const TimeGrid& grid,
                                        std::span<const double> times,
                                        std::span<const double> coeffs, std::size_t coord = 0);

/// CSV with header "t,x1,...,xd" and one row per node.
void write_path_csv(const Path& path, std::ostream& out);

}  // namespace wcl

#endif  // WCL_PROCESSES_HPP
