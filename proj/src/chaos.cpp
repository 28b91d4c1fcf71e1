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

#include "wcl/chaos.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "wcl/analytic.hpp"
#include "wcl/error.hpp"
#include "wcl/functionals.hpp"
#include "wcl/rng.hpp"

namespace wcl {

namespace {

void enumerate(int remaining, std::size_t pos, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    cur[pos] = n;
    enumerate(remaining - n, pos + 1, cur, out);
  }
}

// He_n(z; q) for n = 0..k: He_{n+1} = z He_n - n q He_{n-1}.
void homogeneous_hermite(int k, double z, double q, double* out) {
  out[0] = 1.0;
  if (k >= 1) out[1] = z;
  for (int n = 1; n < k; ++n) out[n + 1] = z * out[n] - static_cast<double>(n) * q * out[n - 1];
}

}  // namespace

std::vector<MultiIndex> multi_indices(int k, int d) {
  if (k < 0 || k > kMaxChaosOrder) throw DomainError("multi_indices: order must be in [0, 30]");
  if (d < 1 || d > 8) throw DomainError("multi_indices: dimension must be in [1, 8]");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  enumerate(k, 0, cur, out);
  return out;
}

ChaosExpansion::ChaosExpansion(const ProcessModel& model, const TimeGrid& grid, ChaosSpec spec,
                               int k_max)
    : grid_(grid), spec_(std::move(spec)), k_max_(k_max), dim_(model_dimension(model)) {
  if (k_max < 0 || k_max > kMaxChaosOrder) throw DomainError("chaos order must be in [0, 30]");
  if (!(spec_.eps > 0.0)) throw DomainError("chaos expansion needs eps > 0");
  if (spec_.u.size() != dim_) throw ConfigError("offset u does not match the model dimension");
  const auto* integrator = std::get_if<Integrator>(&model);
  if (!integrator && !std::holds_alternative<BrownianMotion>(model)) {
    throw ConfigError("chaos expansion supports Brownian motion and integrator models");
  }
  validate_model(model, grid);

  const std::vector<double> c = trapezoid_node_weights(grid_);
  const std::size_t n_nodes = grid_.node_count();
  const std::size_t stride = static_cast<std::size_t>(k_max_ + 1);
  std::vector<double> h(stride);
  pairs_.reserve(n_nodes * (n_nodes + 1) / 2);
  for (std::size_t s = 0; s < n_nodes; ++s) {
    for (std::size_t t = s; t < n_nodes; ++t) {
      double v = 0.0;
      if (t != s) {
        v = integrator ? integrator->op->node_covariance(t, t) -
                             2.0 * integrator->op->node_covariance(s, t) +
                             integrator->op->node_covariance(s, s)
                       : grid_.node(t) - grid_.node(s);
        v = std::max(v, 0.0);
      }
      const double a = v + spec_.eps;
      const double w = (s == t ? 0.5 * c[s] * c[s] : c[s] * c[t]) *
                       heat_kernel(HeatKernelParams{static_cast<int>(dim_), a}, spec_.u);
      if (w == 0.0) continue;
      pairs_.push_back({s, t, w, spec_.form == ChaosForm::orthogonal ? v : a});
      const double log_a = std::log(a);
      for (std::size_t j = 0; j < dim_; ++j) {
        hermite_all(k_max_, spec_.u[j] / std::sqrt(a), h);
        for (std::size_t n = 0; n < stride; ++n) {
          // a^{-n/2} H_n / n! in log space; these factors span many decades.
          const double mag = std::abs(h[n]);
          coef_.push_back(mag == 0.0 ? 0.0
                                     : std::copysign(std::exp(std::log(mag) - 0.5 * n * log_a -
                                                              log_factorial(static_cast<int>(n))),
                                                     h[n]));
        }
      }
    }
  }
}

void ChaosExpansion::check_path(const Path& path, int k) const {
  if (k < 0 || k > k_max_) throw DomainError("chaos order outside the precomputed range");
  if (!(path.grid() == grid_)) throw ConfigError("path grid differs from the expansion grid");
  if (path.dimension() != dim_) throw ConfigError("path dimension differs from the expansion");
}

std::vector<double> ChaosExpansion::terms(const Path& path, int k) const {
  check_path(path, k);
  const std::size_t len = static_cast<std::size_t>(k + 1);
  std::vector<double> herm(len), prod(len), next(len), factor(len);
  std::vector<CompensatedSum> sums(len);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const PairData& pd = pairs_[p];
    for (std::size_t j = 0; j < dim_; ++j) {
      const double z = path(pd.t, j) - path(pd.s, j);
      homogeneous_hermite(k, z, pd.q, herm.data());
      const double* cf = coefficients(p, j);
      for (std::size_t n = 0; n < len; ++n) factor[n] = cf[n] * herm[n];
      if (j == 0) {
        prod = factor;
        continue;
      }
      // Truncated product of generating polynomials: order-k coefficient is
      // the sum over all multi-indices of total order k.
      for (std::size_t n = 0; n < len; ++n) {
        double acc = 0.0;
        for (std::size_t m = 0; m <= n; ++m) acc += prod[m] * factor[n - m];
        next[n] = acc;
      }
      prod.swap(next);
    }
    for (std::size_t n = 0; n < len; ++n) sums[n].add(pd.weight * prod[n]);
  }
  std::vector<double> out(len);
  for (std::size_t n = 0; n < len; ++n) out[n] = sums[n].value();
  return out;
}

double ChaosExpansion::term(const Path& path, int k) const {
  check_path(path, k);
  const std::vector<MultiIndex> indices = multi_indices(k, static_cast<int>(dim_));
  const std::size_t len = static_cast<std::size_t>(k + 1);
  std::vector<double> herm(dim_ * len);
  CompensatedSum sum;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const PairData& pd = pairs_[p];
    for (std::size_t j = 0; j < dim_; ++j) {
      homogeneous_hermite(k, path(pd.t, j) - path(pd.s, j), pd.q, herm.data() + j * len);
    }
    double pair_sum = 0.0;
    for (const MultiIndex& idx : indices) {
      double prod = 1.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const auto n = static_cast<std::size_t>(idx[j]);
        prod *= coefficients(p, j)[n] * herm[j * len + n];
      }
      pair_sum += prod;
    }
    sum.add(pd.weight * pair_sum);
  }
  return sum.value();
}

double ChaosExpansion::mean_term() const {
  CompensatedSum sum;
  for (const PairData& pd : pairs_) sum.add(pd.weight);
  return sum.value();
}

double chaos_term_eval(const Path& path, int k, const ChaosSpec& spec) {
  const ChaosExpansion ex(BrownianMotion{path.dimension()}, path.grid(), spec, k);
  return ex.term(path, k);
}

double chaos_partial_sum(const Path& path, int K, const ChaosSpec& spec) {
  if (K < 0 || K > kMaxPartialSumOrder) throw DomainError("partial sums support K in [0, 12]");
  const ChaosExpansion ex(BrownianMotion{path.dimension()}, path.grid(), spec, K);
  CompensatedSum s;
  for (double v : ex.terms(path, K)) s.add(v);
  return s.value();
}

double bridge_term(double end_value, int n) {
  if (n < 0 || n > kMaxBridgeOrder) throw DomainError("bridge order must be in [0, 40]");
  return hermite(n, 0.0) * hermite(n, end_value) / (factorial(n) * std::sqrt(2.0 * kPi));
}

double bridge_term_variance(int n) {
  if (n < 0 || n > kMaxBridgeOrder) throw DomainError("bridge order must be in [0, 40]");
  const double h0 = hermite(n, 0.0);
  return h0 * h0 / (2.0 * kPi * factorial(n));
}

std::vector<double> bridge_second_moments(int K) {
  std::vector<double> m(static_cast<std::size_t>(K + 1));
  for (int n = 0; n <= K; ++n) m[static_cast<std::size_t>(n)] = bridge_term_variance(n);
  return m;
}

double sobolev_partial_norm(std::span<const double> second_moments, double gamma, int K) {
  if (K < 0 || second_moments.size() < static_cast<std::size_t>(K + 1)) {
    throw DomainError("sobolev_partial_norm needs at least K + 1 second moments");
  }
  CompensatedSum s;
  for (int k = 0; k <= K; ++k) {
    const double m = second_moments[static_cast<std::size_t>(k)];
    if (m < 0.0 || !std::isfinite(m)) throw DomainError("second moments must be finite and >= 0");
    s.add(std::pow(static_cast<double>(k + 1), gamma) * m);
  }
  return s.value();
}

std::vector<ChaosSample> sample_chaos(const ProcessModel& model, const TimeGrid& grid, int K,
                                      const ChaosSpec& spec, const MonteCarlo& mc) {
  const ChaosExpansion ex(model, grid, spec, K);
  const SelfIntersection g{spec.eps, spec.u};
  return parallel_map(mc.n_samples, [&](std::size_t r) {
    const Path path = sample(model, grid, replica_seed(mc.seed, r));
    return ChaosSample{ex.terms(path, K), eval_functional(g, path)};
  });
}

std::vector<ChaosTermEstimate> term_second_moments_mc(const ProcessModel& model,
                                                      const TimeGrid& grid, int K,
                                                      const ChaosSpec& spec, const MonteCarlo& mc) {
  if (mc.n_samples < 100) throw ConfigError("term second moments need at least 100 samples");
  const std::vector<ChaosSample> samples = sample_chaos(model, grid, K, spec, mc);
  std::vector<ChaosTermEstimate> out;
  std::vector<double> sq(samples.size());
  for (int k = 0; k <= K; ++k) {
    for (std::size_t r = 0; r < samples.size(); ++r) {
      const double v = samples[r].terms[static_cast<std::size_t>(k)];
      sq[r] = v * v;
    }
    const Estimate e = mean_estimate(sq);
    const double n = static_cast<double>(e.n);
    out.push_back({k, e.value, e.std_error * e.std_error * n, e.std_error, e.n});
  }
  return out;
}

ChaosTermEstimate term_second_moment_mc(const ProcessModel& model, const TimeGrid& grid, int k,
                                        const ChaosSpec& spec, const MonteCarlo& mc) {
  return term_second_moments_mc(model, grid, k, spec, mc).back();
}

void write_term_table_csv(std::span<const ChaosTermEstimate> rows, const ChaosSpec& spec,
                          double gamma, std::ostream& out) {
  out << "k,estimate,std_error,n_samples,eps,u,d,gamma_weighted\n";
  out.precision(12);
  std::string u;
  for (std::size_t j = 0; j < spec.u.size(); ++j) {
    if (j) u += ';';
    std::ostringstream os;
    os.precision(12);
    os << spec.u[j];
    u += os.str();
  }
  for (const auto& r : rows) {
    out << r.k << ',' << r.mean << ',' << r.std_error << ',' << r.n_samples << ',' << spec.eps
        << ',' << u << ',' << spec.u.size() << ','
        << std::pow(static_cast<double>(r.k + 1), gamma) * r.mean << '\n';
  }
}

}  // namespace wcl
