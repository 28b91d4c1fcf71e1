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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "wcl/error.hpp"
#include "wcl/experiments.hpp"
#include "wcl/report.hpp"

namespace wcl {
namespace {

TEST(Config, ParsesKnownFields) {
  const auto j = nlohmann::json::parse(R"({"experiment": "kac", "n_samples": 500, "eps_grid": [0.1, 0.01],
                                           "seed": 7, "gamma": 0, "tolerances": {"kac_quadrature_n1": 0.5}})");
  const ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.experiment, "kac");
  EXPECT_EQ(c.n_samples, 500u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_EQ(c.eps_grid.size(), 2u);
  EXPECT_EQ(c.tolerances.at("kac_quadrature_n1"), 0.5);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"n_sample": 5})")), ConfigError);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"n_steps": "many"})")), ConfigError);
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"([1, 2])")), ConfigError);
}

TEST(Config, ValidationLimits) {
  ExperimentConfig c;
  c.experiment = "rice";
  c = resolve_defaults(c);
  EXPECT_NO_THROW(validate_config(c));
  c.n_steps = 128;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.n_steps = 256;
  c.n_samples = 10;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.n_samples = 1000;
  c.eps_grid = {0.1, -1.0};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, DefaultsPerExperiment) {
  ExperimentConfig c;
  c.experiment = "kac";
  const ExperimentConfig k = resolve_defaults(c);
  EXPECT_EQ(k.n_steps, 4096u);
  EXPECT_EQ(k.model, "brownian_motion");
  EXPECT_EQ(k.gamma, -1.0);
  c.experiment = "nope";
  EXPECT_THROW(resolve_defaults(c), ConfigError);
}

TEST(Experiments, ConfigErrors) {
  ExperimentConfig c;
  c.experiment = "kac";
  c.x = 0.5;
  c.n_samples = 100;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = ExperimentConfig{};
  c.experiment = "chaos";
  c.u = {0.0};
  c.n_samples = 100;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = ExperimentConfig{};
  c.experiment = "fac";
  c.model = "integrator";
  c.operator_kind = "csv";
  c.operator_file = "/nonexistent/operator.csv";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiments, QuadratureOracles) {
  EXPECT_NEAR(rice_quadrature(2.0 * M_PI, 0.0), 1.0, 1e-10);
  EXPECT_NEAR(rice_quadrature(2.0 * M_PI, 1.0), 0.6065306597, 1e-10);
  EXPECT_NEAR(kac_moment_quadrature(1, QuadratureRule::gauss_legendre(100)), 0.7978845608, 1e-9);
  EXPECT_NEAR(kac_moment_quadrature(2, QuadratureRule::gauss_legendre(100)), 1.0, 1e-9);
  EXPECT_NEAR(kac_moment_quadrature(3, QuadratureRule::gauss_legendre(48)), 6.0 * std::pow(2.0, -1.5) / std::tgamma(2.5),
              1e-8);
  EXPECT_THROW(kac_moment_quadrature(5, default_simplex_rule()), DomainError);
}

TEST(Report, OraclePassSemantics) {
  ExperimentConfig c;
  c.experiment = "selftest";
  c.tolerances["loose"] = 1.0;
  ExperimentReport r(c);
  EXPECT_TRUE(r.add_oracle("a", 1.05, 0.02, 1.0, 0.0).pass);   // within 3 SE
  EXPECT_FALSE(r.add_oracle("b", 1.07, 0.02, 1.0, 0.0).pass);
  EXPECT_TRUE(r.add_oracle("c", 1.07, 0.0, 1.0, 0.1).pass);    // within tolerance
  EXPECT_TRUE(r.add_oracle("loose", 1.5, 0.0, 1.0, 0.0).pass); // override
  EXPECT_TRUE(r.add_info("d", 42.0).pass);
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.at("c").tolerance, 0.1);
  EXPECT_EQ(r.find("missing"), nullptr);
}

TEST(Report, SummaryCsvSchema) {
  ExperimentConfig c;
  c.experiment = "selftest";
  ExperimentReport r(c);
  r.add_oracle("x", 0.1234567890123456, 0.0, 0.1, 0.5);
  r.add_check("y", 1.0, true);
  std::stringstream ss;
  write_summary_csv(r, ss);
  std::string header, row1, row2;
  std::getline(ss, header);
  std::getline(ss, row1);
  std::getline(ss, row2);
  EXPECT_EQ(header, "name,kind,estimate,std_error,oracle,tolerance,se_multiplier,pass");
  EXPECT_EQ(row1, "x,oracle,0.123456789012,0,0.1,0.5,3,true");
  EXPECT_EQ(row2, "y,check,1,0,,0,0,true");
}

TEST(Report, JsonKeyOrderAndDeterminism) {
  ExperimentConfig c;
  c.experiment = "selftest";
  const ExperimentReport a = run_experiment(c), b = run_experiment(c);
  std::stringstream sa, sb;
  write_report_json(a, sa);
  write_report_json(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  const auto j = nlohmann::ordered_json::parse(sa.str());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"experiment", "config", "all_pass", "rows", "warnings"}));
  EXPECT_TRUE(j.at("all_pass").get<bool>());
  EXPECT_EQ(sa.str().find("runtime"), std::string::npos);
}

TEST(Report, WritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "wcl_report_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig c;
  c.experiment = "selftest";
  write_report_files(run_experiment(c), dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.csv"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace wcl
