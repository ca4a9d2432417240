#pragma once

// Internal: the individual verification suites and their shared context.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "osclab/verify.hpp"

namespace osclab::suites {

/// Frozen reference values keyed by name. Missing keys are recorded and
/// written back when the run finishes.
class Goldens {
 public:
  explicit Goldens(std::filesystem::path path);
  std::optional<double> get(const std::string& key) const;
  void record(const std::string& key, double value);
  /// Writes the file when something was recorded.
  void save() const;

 private:
  std::filesystem::path path_;
  std::map<std::string, double> values_;
  bool dirty_ = false;
};

struct Context {
  const VerifyOptions& options;
  Goldens& goldens;
  std::uint64_t seed;  // per-suite seed derived from options.seed

  int depth(int full, int quick) const;
};

/// Appends to `out`; the caller sorts by name.
class Recorder {
 public:
  explicit Recorder(SuiteResult& out) : out_(out) {}

  void add(std::string name, std::string ref, double value, double bound, bool pass, std::string detail,
           int criterion);
  /// pass = value <= bound.
  void at_most(std::string name, std::string ref, double value, double bound, int criterion, std::string detail = {});
  /// pass = value >= bound.
  void at_least(std::string name, std::string ref, double value, double bound, int criterion, std::string detail = {});
  /// Band [lo, hi] compared with the frozen band under `key` to 1e-9 relative;
  /// recorded (and passing) when no band is stored yet.
  void golden_band(Context& ctx, const std::string& key, std::string ref, double lo, double hi, int criterion);

  PlotTable& plot(std::string file, std::vector<std::string> header);

 private:
  SuiteResult& out_;
};

std::string fmt(double v);

using SuiteFn = std::function<void(Context&, Recorder&)>;

void lp_sharp(Context& ctx, Recorder& rec);
void lp_rate(Context& ctx, Recorder& rec);
void luxemburg(Context& ctx, Recorder& rec);
void cz(Context& ctx, Recorder& rec);
void young(Context& ctx, Recorder& rec);
void theorem_constant(Context& ctx, Recorder& rec);
void laplace(Context& ctx, Recorder& rec);
void variable(Context& ctx, Recorder& rec);
void wr(Context& ctx, Recorder& rec);
void fujii_wilson(Context& ctx, Recorder& rec);
void profile(Context& ctx, Recorder& rec);
void sparse(Context& ctx, Recorder& rec);
void subcube(Context& ctx, Recorder& rec);
void jn_tail(Context& ctx, Recorder& rec);

}  // namespace osclab::suites
