#pragma once

// Verification suites: each suite evaluates one family of inequalities with
// their stated constants and emits one record per check. Reports are
// deterministic for a fixed configuration (no timestamps, ordered output).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "osclab/constants.hpp"

namespace osclab {

struct CheckRecord {
  std::string name;
  std::string ref;  // the inequality or identity being checked
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
  int criterion = 0;  // acceptance criterion number, 0 for supporting checks
};

/// Rows for one plot-ready CSV file.
struct PlotTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct SuiteResult {
  std::string name;
  std::vector<int> criteria;
  std::vector<CheckRecord> checks;  // sorted by name
  std::vector<PlotTable> plots;
  double seconds = 0.0;  // wall time; never written to the JSON report
  bool pass() const;
};

struct VerifyOptions {
  std::vector<std::string> suites{"all"};
  int depth = 0;  // 0 selects each suite's default
  std::uint64_t seed = 7;
  bool quick = false;
  JNParams jn;
  /// Frozen reference bands; a missing entry is recorded on first use.
  std::filesystem::path goldens;
};

struct Report {
  VerifyOptions options;
  std::vector<SuiteResult> suites;
  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

/// Suite names in execution order.
const std::vector<std::string>& suite_names();

/// Throws a parameter error for unknown suite names.
Report run_suites(const VerifyOptions& options);

/// Writes every suite's plot tables as CSV under `dir`; returns the paths.
std::vector<std::filesystem::path> emit_plot_data(const Report& report, const std::filesystem::path& dir);

}  // namespace osclab
