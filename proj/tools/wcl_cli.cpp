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

// Command-line front end: wcl <experiment> [flags].
// Exit codes: 0 all rows pass, 1 a row failed, 2 usage or configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wcl/error.hpp"
#include "wcl/experiments.hpp"
#include "wcl/report.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw wcl::ConfigError("bad number '" + item + "' in --eps-grid");
    out.push_back(v);
  }
  if (out.empty()) throw wcl::ConfigError("--eps-grid is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted chaos and local-time experiments"};
  std::string experiment;
  std::string config_path;
  std::string eps_text;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> steps;
  std::optional<std::string> out_dir;
  bool quiet = false;

  std::string names;
  for (const auto& n : wcl::kExperimentNames) names += (names.empty() ? "" : ", ") + std::string(n);
  app.add_option("experiment", experiment, "One of: " + names)->required();
  app.add_option("--config", config_path, "Flat JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_dir, "Output directory for report.json and summary.csv");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--steps", steps, "Grid steps");
  app.add_option("--eps-grid", eps_text, "Comma-separated eps values");
  app.add_flag("--quiet", quiet, "Only print the verdict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  wcl::ExperimentReport report;
  wcl::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      cfg = wcl::parse_config(nlohmann::json::parse(in));
    }
    if (!cfg.experiment.empty() && cfg.experiment != experiment) {
      throw wcl::ConfigError("config experiment '" + cfg.experiment + "' does not match '" +
                             experiment + "'");
    }
    cfg.experiment = experiment;
    if (seed) cfg.seed = *seed;
    if (samples) cfg.n_samples = *samples;
    if (steps) cfg.n_steps = *steps;
    if (out_dir) cfg.out_dir = *out_dir;
    if (!eps_text.empty()) cfg.eps_grid = parse_list(eps_text);
    report = wcl::run_experiment(cfg);
    wcl::write_report_files(report, cfg.out_dir);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const wcl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const wcl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (!quiet) {
    for (const auto& row : report.rows()) {
      if (row.kind == wcl::RowKind::info) continue;
      std::cout << (row.pass ? "PASS " : "FAIL ") << row.name << "  estimate=" << row.estimate;
      if (row.oracle) std::cout << " oracle=" << *row.oracle;
      if (row.std_error > 0.0) std::cout << " se=" << row.std_error;
      std::cout << "\n";
    }
    for (const auto& w : report.warnings()) std::cout << "warning: " << w << "\n";
  }
  std::cout << experiment << ": " << (report.all_pass() ? "all pass" : "FAILED") << " ("
            << report.runtime_seconds << " s) -> " << cfg.out_dir << "\n";
  return report.all_pass() ? 0 : 1;
}
