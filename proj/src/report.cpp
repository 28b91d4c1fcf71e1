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

#include "wcl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "wcl/error.hpp"

namespace wcl {

namespace {

template <class T>
T take(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const char* kind_name(RowKind k) {
  switch (k) {
    case RowKind::oracle:
      return "oracle";
    case RowKind::check:
      return "check";
    case RowKind::info:
      break;
  }
  return "info";
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"experiment", [&](auto& v, auto& k) { c.experiment = take<std::string>(v, k); }},
      {"model", [&](auto& v, auto& k) { c.model = take<std::string>(v, k); }},
      {"dimension", [&](auto& v, auto& k) { c.dimension = take<std::size_t>(v, k); }},
      {"omega", [&](auto& v, auto& k) { c.omega = take<double>(v, k); }},
      {"operator_kind", [&](auto& v, auto& k) { c.operator_kind = take<std::string>(v, k); }},
      {"operator_file", [&](auto& v, auto& k) { c.operator_file = take<std::string>(v, k); }},
      {"family", [&](auto& v, auto& k) { c.family = take<std::string>(v, k); }},
      {"n_steps", [&](auto& v, auto& k) { c.n_steps = take<std::size_t>(v, k); }},
      {"n_samples", [&](auto& v, auto& k) { c.n_samples = take<std::size_t>(v, k); }},
      {"seed", [&](auto& v, auto& k) { c.seed = take<std::uint64_t>(v, k); }},
      {"eps_grid", [&](auto& v, auto& k) { c.eps_grid = take<std::vector<double>>(v, k); }},
      {"u", [&](auto& v, auto& k) { c.u = take<std::vector<double>>(v, k); }},
      {"levels", [&](auto& v, auto& k) { c.levels = take<std::vector<double>>(v, k); }},
      {"degree", [&](auto& v, auto& k) { c.degree = take<int>(v, k); }},
      {"n_polys", [&](auto& v, auto& k) { c.n_polys = take<std::size_t>(v, k); }},
      {"k_max", [&](auto& v, auto& k) { c.k_max = take<int>(v, k); }},
      {"gamma", [&](auto& v, auto& k) { c.gamma = take<double>(v, k); }},
      {"basis_size", [&](auto& v, auto& k) { c.basis_size = take<int>(v, k); }},
      {"m0", [&](auto& v, auto& k) { c.m0 = take<int>(v, k); }},
      {"delta", [&](auto& v, auto& k) { c.delta = take<double>(v, k); }},
      {"x", [&](auto& v, auto& k) { c.x = take<double>(v, k); }},
      {"out_dir", [&](auto& v, auto& k) { c.out_dir = take<std::string>(v, k); }},
      {"tolerances",
       [&](auto& v, auto& k) { c.tolerances = take<std::map<std::string, double>>(v, k); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config field '" + key + "'");
    it->second(value, key);
  }
  return c;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["model"] = c.model;
  j["dimension"] = c.dimension;
  j["omega"] = c.omega;
  j["operator_kind"] = c.operator_kind;
  j["operator_file"] = c.operator_file;
  j["family"] = c.family;
  j["n_steps"] = c.n_steps;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["eps_grid"] = c.eps_grid;
  j["u"] = c.u;
  j["levels"] = c.levels;
  j["degree"] = c.degree;
  j["n_polys"] = c.n_polys;
  j["k_max"] = c.k_max;
  j["gamma"] = c.gamma;
  j["basis_size"] = c.basis_size;
  j["m0"] = c.m0;
  j["delta"] = c.delta;
  j["x"] = c.x;
  j["out_dir"] = c.out_dir;
  j["tolerances"] = c.tolerances;
  return j;
}

void validate_config(const ExperimentConfig& c) {
  if (c.n_steps < 256) throw ConfigError("n_steps must be >= 256");
  if (c.n_samples < 100) throw ConfigError("n_samples must be >= 100");
  for (double e : c.eps_grid) {
    if (!(e > 0.0)) throw ConfigError("eps values must be positive");
  }
}

ExperimentReport::ExperimentReport(const ExperimentConfig& config)
    : experiment_(config.experiment), config_(config_to_json(config)), overrides_(config.tolerances) {}

const ReportRow& ExperimentReport::add_oracle(const std::string& name, double estimate,
                                              double std_error, double oracle, double tolerance,
                                              double se_multiplier) {
  if (const auto it = overrides_.find(name); it != overrides_.end()) tolerance = it->second;
  ReportRow r{name, RowKind::oracle, estimate, std_error, oracle, tolerance, se_multiplier, false};
  const double band = std::max(tolerance, se_multiplier * (std::isfinite(std_error) ? std_error : 0.0));
  r.pass = std::isfinite(estimate) && std::abs(estimate - oracle) <= band;
  rows_.push_back(std::move(r));
  return rows_.back();
}

const ReportRow& ExperimentReport::add_check(const std::string& name, double estimate, bool pass,
                                             double std_error) {
  rows_.push_back({name, RowKind::check, estimate, std_error, std::nullopt, 0.0, 0.0, pass});
  return rows_.back();
}

const ReportRow& ExperimentReport::add_info(const std::string& name, double estimate,
                                            double std_error) {
  rows_.push_back({name, RowKind::info, estimate, std_error, std::nullopt, 0.0, 0.0, true});
  return rows_.back();
}

const ReportRow* ExperimentReport::find(const std::string& name) const {
  for (const auto& r : rows_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const ReportRow& ExperimentReport::at(const std::string& name) const {
  if (const ReportRow* r = find(name)) return *r;
  throw ConfigError("report has no row '" + name + "'");
}

bool ExperimentReport::all_pass() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const ReportRow& r) { return r.pass; });
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment_;
  j["config"] = config_;
  j["all_pass"] = all_pass();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rows_) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["kind"] = kind_name(r.kind);
    row["estimate"] = r.estimate;
    row["std_error"] = r.std_error;
    row["oracle"] = r.oracle ? nlohmann::ordered_json(*r.oracle) : nlohmann::ordered_json(nullptr);
    row["tolerance"] = r.tolerance;
    row["se_multiplier"] = r.se_multiplier;
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["warnings"] = warnings_;
  return j;
}

void write_report_json(const ExperimentReport& report, std::ostream& out) {
  out << report.to_json().dump(2) << '\n';
}

void write_summary_csv(const ExperimentReport& report, std::ostream& out) {
  out << "name,kind,estimate,std_error,oracle,tolerance,se_multiplier,pass\n";
  for (const auto& r : report.rows()) {
    out << r.name << ',' << kind_name(r.kind) << ',' << fmt12(r.estimate) << ','
        << fmt12(r.std_error) << ',' << (r.oracle ? fmt12(*r.oracle) : std::string()) << ','
        << fmt12(r.tolerance) << ',' << fmt12(r.se_multiplier) << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
}

void write_report_files(const ExperimentReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream json(base / "report.json", std::ios::binary);
  std::ofstream csv(base / "summary.csv", std::ios::binary);
  if (!json || !csv) throw ConfigError("cannot write report files into '" + dir + "'");
  write_report_json(report, json);
  write_summary_csv(report, csv);
}

}  // namespace wcl
