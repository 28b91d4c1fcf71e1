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

#include "wcl/processes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "wcl/error.hpp"
#include "wcl/rng.hpp"

namespace wcl {

TimeGrid::TimeGrid(std::size_t n_steps) : n_steps_(n_steps) {
  if (n_steps == 0) throw ConfigError("time grid needs at least one step");
}

double TimeGrid::node(std::size_t k) const {
  if (k > n_steps_) throw ConfigError("grid node index out of range");
  return static_cast<double>(k) / static_cast<double>(n_steps_);
}

bool TimeGrid::contains(double t) const {
  if (!(t >= -1e-12 && t <= 1.0 + 1e-12)) return false;
  const double x = t * static_cast<double>(n_steps_);
  return std::abs(x - std::round(x)) <= 1e-9;
}

std::size_t TimeGrid::index_of(double t) const {
  if (!contains(t)) {
    throw ConfigError("time " + std::to_string(t) + " is not a node of the " +
                      std::to_string(n_steps_) + "-step grid");
  }
  return static_cast<std::size_t>(std::lround(t * static_cast<double>(n_steps_)));
}

Path::Path(TimeGrid grid, std::size_t dimension)
    : grid_(grid), dim_(dimension), values_(grid.node_count() * dimension, 0.0) {
  if (dimension == 0) throw ConfigError("path dimension must be positive");
}

std::span<const double> Path::scalar() const {
  if (dim_ != 1) throw ConfigError("operation needs a scalar path");
  return values_;
}

void Path::set_derivative(std::vector<double> derivative) {
  if (derivative.size() != values_.size()) throw ConfigError("derivative length mismatch");
  derivative_ = std::move(derivative);
}

IntegratorOperator::IntegratorOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ConfigError("integrator operator must be a non-empty square matrix");
  }
  if (!matrix_.allFinite()) throw ConfigError("integrator operator has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_, Eigen::ComputeFullV);
  singular_values_ = svd.singularValues();
  top_right_ = svd.matrixV().col(0);
  if (singular_values_(singular_values_.size() - 1) <= 1e-10) {
    throw ConfigError("integrator operator is singular (smallest singular value <= 1e-10)");
  }
  const Eigen::Index n = matrix_.rows();
  node_images_ = Eigen::MatrixXd::Zero(n + 1, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    node_images_.row(k) = node_images_.row(k - 1) + matrix_.col(k - 1).transpose();
  }
}

IntegratorOperator IntegratorOperator::identity(std::size_t n_cells) {
  const auto n = static_cast<Eigen::Index>(n_cells);
  return IntegratorOperator(Eigen::MatrixXd::Identity(n, n));
}

IntegratorOperator IntegratorOperator::cell_multiplication(
    std::size_t n_cells, const std::function<double(double)>& a) {
  const auto n = static_cast<Eigen::Index>(n_cells);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = a((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return IntegratorOperator(std::move(m));
}

double IntegratorOperator::node_covariance(std::size_t k, std::size_t l) const {
  return step() * node_images_.row(static_cast<Eigen::Index>(k))
                      .dot(node_images_.row(static_cast<Eigen::Index>(l)));
}

double IntegratorOperator::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return step() * u.dot(v);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token) {
  const std::string t = trim(token);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("operator CSV: cannot parse '" + t + "'");
  }
  if (used != t.size()) throw ConfigError("operator CSV: trailing characters in '" + t + "'");
  return v;
}

}  // namespace

IntegratorOperator read_operator_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "n_cells") {
    throw ConfigError("operator CSV must start with the header 'n_cells'");
  }
  if (!std::getline(in, line)) throw ConfigError("operator CSV: missing cell count");
  const double nd = parse_double(line);
  if (nd < 1 || nd != std::floor(nd) || nd > 1e5) throw ConfigError("operator CSV: bad cell count");
  const auto n = static_cast<Eigen::Index>(nd);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ConfigError("operator CSV: too few rows");
    std::stringstream row(line);
    std::string cell;
    Eigen::Index j = 0;
    while (std::getline(row, cell, ',')) {
      if (j >= n) throw ConfigError("operator CSV: too many columns");
      m(i, j++) = parse_double(cell);
    }
    if (j != n) throw ConfigError("operator CSV: too few columns");
  }
  return IntegratorOperator(std::move(m));
}

void write_operator_csv(const IntegratorOperator& op, std::ostream& out) {
  const auto& m = op.matrix();
  out << "n_cells\n" << m.rows() << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

std::size_t model_dimension(const ProcessModel& model) {
  struct {
    std::size_t operator()(const BrownianMotion& m) const { return m.dimension; }
    std::size_t operator()(const Integrator& m) const { return m.dimension; }
    std::size_t operator()(const SmoothStationary&) const { return 1; }
    std::size_t operator()(const DegenerateLine&) const { return 1; }
  } visitor;
  return std::visit(visitor, model);
}

void validate_model(const ProcessModel& model, const TimeGrid& grid) {
  if (const auto* bm = std::get_if<BrownianMotion>(&model)) {
    if (bm->dimension == 0) throw ConfigError("Brownian motion dimension must be >= 1");
  } else if (const auto* in = std::get_if<Integrator>(&model)) {
    if (in->dimension == 0) throw ConfigError("integrator dimension must be >= 1");
    if (!in->op) throw ConfigError("integrator has no operator");
    if (in->op->cells() != grid.steps()) {
      throw ConfigError("operator has " + std::to_string(in->op->cells()) +
                        " cells but the grid has " + std::to_string(grid.steps()) + " steps");
    }
  } else if (const auto* ss = std::get_if<SmoothStationary>(&model)) {
    if (!(ss->omega > 0.0)) throw ConfigError("smooth stationary model needs omega > 0");
  }
}

Path sample(const ProcessModel& model, const TimeGrid& grid, std::uint64_t seed) {
  if (grid.steps() < 2) throw ConfigError("sampling needs at least two grid steps");
  validate_model(model, grid);
  RandomStream rng(seed);
  const std::size_t n = grid.steps();
  const double sqrt_h = std::sqrt(grid.step());

  if (const auto* bm = std::get_if<BrownianMotion>(&model)) {
    Path path(grid, bm->dimension);
    const std::size_t d = bm->dimension;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < d; ++j) path(k + 1, j) = path(k, j) + sqrt_h * rng.normal();
    }
    return path;
  }
  if (const auto* in = std::get_if<Integrator>(&model)) {
    const std::size_t d = in->dimension;
    Eigen::MatrixXd dw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < dw.rows(); ++i) {
      for (Eigen::Index j = 0; j < dw.cols(); ++j) dw(i, j) = sqrt_h * rng.normal();
    }
    const Eigen::MatrixXd x = in->op->node_images() * dw;
    Path path(grid, d);
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        path(k, j) = x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      }
    }
    return path;
  }
  if (const auto* ss = std::get_if<SmoothStationary>(&model)) {
    const double xi1 = rng.normal();
    const double xi2 = rng.normal();
    const double w = ss->omega;
    Path path(grid, 1);
    std::vector<double> deriv(grid.node_count());
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = grid.node(k);
      path(k, 0) = xi1 * std::cos(w * t) + xi2 * std::sin(w * t);
      deriv[k] = -xi1 * w * std::sin(w * t) + xi2 * w * std::cos(w * t);
    }
    path.set_derivative(std::move(deriv));
    return path;
  }
  const double xi = rng.normal();
  Path path(grid, 1);
  for (std::size_t k = 0; k <= n; ++k) path(k, 0) = grid.node(k) * xi;
  return path;
}

namespace {

double scalar_covariance(const ProcessModel& model, const TimeGrid& grid, std::size_t i,
                         std::size_t k) {
  const double s = grid.node(i);
  const double t = grid.node(k);
  if (std::holds_alternative<BrownianMotion>(model)) return std::min(s, t);
  if (const auto* in = std::get_if<Integrator>(&model)) return in->op->node_covariance(i, k);
  if (const auto* ss = std::get_if<SmoothStationary>(&model)) return std::cos(ss->omega * (t - s));
  return s * t;
}

}  // namespace

Eigen::MatrixXd covariance(const ProcessModel& model, const TimeGrid& grid, double s, double t) {
  validate_model(model, grid);
  const std::size_t i = grid.index_of(s);
  const std::size_t k = grid.index_of(t);
  const auto d = static_cast<Eigen::Index>(model_dimension(model));
  return scalar_covariance(model, grid, i, k) * Eigen::MatrixXd::Identity(d, d);
}

double sigma_interval(const IntegratorOperator& op, double s, double t) {
  if (s > t) throw ConfigError("sigma_interval needs s <= t");
  const TimeGrid grid(op.cells());
  const auto i = static_cast<Eigen::Index>(grid.index_of(s));
  const auto k = static_cast<Eigen::Index>(grid.index_of(t));
  const Eigen::VectorXd v = (op.node_images().row(k) - op.node_images().row(i)).transpose();
  return std::sqrt(op.inner(v, v));
}

OperatorBounds operator_bounds(const IntegratorOperator& op) {
  const auto& sv = op.singular_values();
  const double lo = sv(sv.size() - 1);
  if (lo <= 1e-10) throw ConfigError("operator is singular");
  return {lo * lo, sv(0) * sv(0)};
}

InequalityCheck integrator_inequality(const IntegratorOperator& op,
                                      std::span<const double> partition,
                                      std::span<const double> coeffs) {
  if (partition.size() < 2) throw ConfigError("partition needs at least two points");
  if (coeffs.size() + 1 != partition.size()) {
    throw ConfigError("integrator_inequality needs len(coeffs) = len(partition) - 1");
  }
  const TimeGrid grid(op.cells());
  std::vector<std::size_t> idx(partition.size());
  for (std::size_t p = 0; p < partition.size(); ++p) {
    idx[p] = grid.index_of(partition[p]);
    if (p > 0 && idx[p] <= idx[p - 1]) throw ConfigError("partition must be strictly increasing");
  }
  Eigen::VectorXd step_fn = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.cells()));
  double weighted = 0.0;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    for (std::size_t c = idx[p]; c < idx[p + 1]; ++c) step_fn(static_cast<Eigen::Index>(c)) = coeffs[p];
    weighted += coeffs[p] * coeffs[p] * (grid.node(idx[p + 1]) - grid.node(idx[p]));
  }
  const Eigen::VectorXd image = op.matrix() * step_fn;
  return {op.inner(image, image), operator_bounds(op).upper * weighted};
}

std::size_t upcrossing_count(const Path& path, double level) {
  const auto x = path.scalar();
  std::size_t count = 0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (x[k] < level && level <= x[k + 1]) ++count;
  }
  return count;
}

LinearMoments linear_functional_moments(const ProcessModel& model, const TimeGrid& grid,
                                        std::span<const double> times,
                                        std::span<const double> coeffs, std::size_t coord) {
  if (times.size() != coeffs.size() || times.empty()) {
    throw ConfigError("linear functional needs matching, non-empty times and coefficients");
  }
  if (times.size() > 32) throw ConfigError("linear functional limited to 32 evaluation points");
  validate_model(model, grid);
  if (coord >= model_dimension(model)) throw ConfigError("coordinate out of range");
  const std::size_t n = times.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = grid.index_of(times[i]);
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) c[i * n + k] = scalar_covariance(model, grid, idx[i], idx[k]);
  }
  const auto cov = [&](std::size_t i, std::size_t k) { return c[i * n + k]; };
  LinearMoments out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.second += coeffs[i] * coeffs[j] * cov(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          const double pairings =
              cov(i, j) * cov(k, l) + cov(i, k) * cov(j, l) + cov(i, l) * cov(j, k);
          out.fourth += coeffs[i] * coeffs[j] * coeffs[k] * coeffs[l] * pairings;
        }
      }
    }
  }
  return out;
}

void write_path_csv(const Path& path, std::ostream& out) {
  out << 't';
  for (std::size_t j = 0; j < path.dimension(); ++j) out << ",x" << (j + 1);
  out << '\n';
  out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < path.grid().node_count(); ++k) {
    out << path.grid().node(k);
    for (std::size_t j = 0; j < path.dimension(); ++j) out << ',' << path(k, j);
    out << '\n';
  }
}

}  // namespace wcl
