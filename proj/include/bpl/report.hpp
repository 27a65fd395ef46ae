#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace bpl {

struct Assertion {
  std::string name;
  bool passed = false;
  bool warning = false;  // degraded runs downgrade failures to warnings
  double tolerance = 0.0;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// An SVG the report will render from one of its tables (x column against
/// one or more y columns, optionally log-scaled ordinate).
struct PlotSpec {
  std::string file;
  std::string table;
  std::string x;
  std::vector<std::string> ys;
  bool log_y = false;
  std::string title;
};

/// Structured Monte Carlo verification result. Pure function of
/// (config, seed) apart from the wall clock field.
struct ExperimentReport {
  std::string experiment;
  nlohmann::json config_echo;
  bool degraded = false;
  double wall_clock_seconds = 0.0;
  std::vector<Assertion> assertions;
  std::vector<Table> tables;
  std::map<std::string, double> fitted;
  std::map<std::string, double> quantiles;
  std::vector<PlotSpec> plots;

  /// Record a tolerance-cited assertion; failures become warnings when the
  /// report is degraded (smoke replica counts).
  void check(const std::string& name, bool ok, double tolerance,
             const std::string& detail);

  bool passed() const;
  const Table* table(const std::string& name) const;

  nlohmann::json to_json() const;
  void print_summary(std::ostream& os) const;
  /// Writes report.json and one CSV per table into out_dir; SVG plots when
  /// requested. Creates the directory if needed.
  void write(const std::string& out_dir, bool svg) const;
};

}  // namespace bpl
