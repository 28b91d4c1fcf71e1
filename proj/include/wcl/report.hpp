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

#ifndef WCL_REPORT_HPP
#define WCL_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wcl {

/// Flat experiment configuration. Zero or empty fields mean "use the
/// experiment's default"; resolve_defaults fills them in.
struct ExperimentConfig {
  std::string experiment;
  std::string model;
  std::size_t dimension = 0;
  double omega = 0.0;
  std::string operator_kind;  ///< identity | diag_linear | csv
  std::string operator_file;
  std::string family;
  std::size_t n_steps = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 42;
  std::vector<double> eps_grid;
  std::vector<double> u;
  std::vector<double> levels;
  int degree = -1;
  std::size_t n_polys = 0;
  int k_max = -1;
  double gamma = std::numeric_limits<double>::quiet_NaN();  ///< NaN: default -1
  int basis_size = 0;
  int m0 = 0;
  double delta = 0.0;
  double x = 0.0;
  std::string out_dir = "wcl_out";
  std::map<std::string, double> tolerances;
};

/// Reads the keys of ExperimentConfig from a flat JSON object. Unknown keys
/// and ill-typed values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& c);

/// Throws ConfigError unless n_steps >= 256 and n_samples >= 100.
void validate_config(const ExperimentConfig& c);

enum class RowKind { oracle, check, info };

/// One reported quantity. For oracle rows pass means
/// |estimate - oracle| <= max(tolerance, se_multiplier * std_error).
/// Check rows carry a boolean property; info rows always pass.
struct ReportRow {
  std::string name;
  RowKind kind = RowKind::info;
  double estimate = 0.0;
  double std_error = 0.0;
  std::optional<double> oracle;
  double tolerance = 0.0;
  double se_multiplier = 3.0;
  bool pass = true;
};

class ExperimentReport {
 public:
  ExperimentReport() = default;
  explicit ExperimentReport(const ExperimentConfig& config);

  /// Adds an oracle row; a tolerance override from the config replaces `tolerance`.
  const ReportRow& add_oracle(const std::string& name, double estimate, double std_error,
                              double oracle, double tolerance, double se_multiplier = 3.0);
  const ReportRow& add_check(const std::string& name, double estimate, bool pass,
                             double std_error = 0.0);
  const ReportRow& add_info(const std::string& name, double estimate, double std_error = 0.0);
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  [[nodiscard]] const std::vector<ReportRow>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] const ReportRow* find(const std::string& name) const;
  [[nodiscard]] const ReportRow& at(const std::string& name) const;
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const std::string& experiment() const { return experiment_; }

  /// Wall-clock runtime; kept out of report.json so reports stay byte-identical.
  double runtime_seconds = 0.0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;

 private:
  std::string experiment_;
  nlohmann::ordered_json config_;
  std::map<std::string, double> overrides_;
  std::vector<ReportRow> rows_;
  std::vector<std::string> warnings_;
};

/// report.json body (2-space indent, stable key order).
void write_report_json(const ExperimentReport& report, std::ostream& out);

/// summary.csv: name,kind,estimate,std_error,oracle,tolerance,se_multiplier,pass
/// with 12 significant digits; the oracle cell is empty when absent.
void write_summary_csv(const ExperimentReport& report, std::ostream& out);

/// Writes report.json and summary.csv into dir (created if needed).
void write_report_files(const ExperimentReport& report, const std::string& dir);

}  // namespace wcl

#endif  // WCL_REPORT_HPP
