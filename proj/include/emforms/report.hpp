#pragma once
#include <string>
#include <utility>
#include <vector>

namespace emforms {

// Machine-readable run summary emitted by every CLI command: parameter echo,
// named result tables, and toleranced assertions. A run passes iff every
// assertion passed; the CLI maps that to its exit code.

struct Assertion {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  int schema_version = 1;
  std::string command;
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  double wall_time_s = 0.0;

  // |measured| <= tolerance convenience recorder.
  void check(const std::string& name, double measured, double tolerance);
  // Arbitrary-predicate recorder, keeps the measured value for the report.
  void check_flag(const std::string& name, bool pass, double measured, double tolerance);

  bool passed() const;
  std::string to_json() const;
};

// One "name.csv" per table next to `dir` (or the tables inline to stdout when
// dir is empty); returns the file paths written.
std::vector<std::string> write_tables_csv(const RunReport& report, const std::string& dir);

}  // namespace emforms
