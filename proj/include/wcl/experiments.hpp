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

#ifndef WCL_EXPERIMENTS_HPP
#define WCL_EXPERIMENTS_HPP

/**
 * @file experiments.hpp
 * @brief Reproducible experiment drivers. Each takes a flat configuration,
 * fills unset fields with experiment defaults and returns a report whose
 * rows compare estimates against closed-form or quadrature references.
 *
 *   rice      level upcrossings of xi1 cos(wt) + xi2 sin(wt)
 *   kac       local-time moments at 0 against simplex quadrature
 *   bridge    endpoint-kernel weighting of Brownian motion and of t * xi
 *   chaos     chaos term second moments, orthogonality, truncation residuals
 *   fac       random-polynomial ratio study plus tail and Hoelder diagnostics
 *   sweep     eps sweep of a functional's mean against its exact expectation
 *   selftest  closed-form identities with fixed answers
 */

#include <string>
#include <vector>

#include "wcl/processes.hpp"
#include "wcl/quadrature.hpp"
#include "wcl/report.hpp"

namespace wcl {

inline const std::vector<std::string> kExperimentNames = {"rice",  "kac",   "bridge",  "chaos",
                                                          "fac",   "sweep", "selftest"};

/// Experiment defaults for every unset field. Throws ConfigError for an
/// unknown experiment name.
ExperimentConfig resolve_defaults(ExperimentConfig config);

/// Model named by config.model on the given grid.
ProcessModel build_model(const ExperimentConfig& config, const TimeGrid& grid);

/// int_0^1 int_0^inf x q_t(c, x) dx dt by Gauss-Legendre in x, q_t the joint
/// density of (xi(t), xi'(t)) = N(0, 1) x N(0, omega^2).
double rice_quadrature(double omega, double level);

/// n! int_{Delta_n} (2 pi)^{-n/2} t_1^{-1/2} prod_j (t_j - t_{j-1})^{-1/2} dt
/// for n in {1, 2, 3, 4}, using the sine-mapped collapsed rule.
double kac_moment_quadrature(int n, const QuadratureRule& rule);

ExperimentReport rice_experiment(const ExperimentConfig& config);
ExperimentReport kac_experiment(const ExperimentConfig& config);
ExperimentReport bridge_experiment(const ExperimentConfig& config);
ExperimentReport chaos_table(const ExperimentConfig& config);
ExperimentReport fac_study_cmd(const ExperimentConfig& config);
ExperimentReport sweep_experiment(const ExperimentConfig& config);
ExperimentReport selftest_experiment(const ExperimentConfig& config);

/// Resolves defaults, validates and dispatches on config.experiment.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace wcl

#endif  // WCL_EXPERIMENTS_HPP
