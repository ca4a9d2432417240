#pragma once

// Subcommand implementations behind the osclab front end. Each command fills
// a Result; main() prints it and maps the outcome to an exit code.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace osclab::cli {

enum class Format { json, csv };

struct Common {
  std::uint64_t seed = 7;
  int dimension = 1;
  Format format = Format::json;
};

/// Where a cell function comes from: a file or a built-in name on a fresh grid.
struct Source {
  std::string input;     // CSV or binary path
  std::string function;  // built-in name
  int depth = 10;        // grid depth for built-ins
  std::string measure;   // optional mass file; Lebesgue otherwise
  std::string cube;      // "level:i0,i1,..."; the root cube when empty
};

struct NormArgs {
  Source source;
  std::string family;  // lp:p, weak-lp:p, orlicz:<young>, weak-orlicz:<young>, variable:<path>
  bool centered = false;
};

struct BmoArgs {
  Source source;
  int min_level = 1;
};

struct CzdArgs {
  Source source;
  double level = 0.0;
};

struct SparseArgs {
  Source source;
  double lambda = 2.0;
};

struct AinftyArgs {
  Source weight;
  std::string functional = "weight";  // measure, weight or wr:r
  bool embedding = false;
};

struct ConstantsArgs {
  std::string psi;    // identity, power:s, orlicz:<young>
  std::string young;  // laplace and Orlicz constants for this function
  double c_y = 1.0;
  double k = 1.0;
  double c_mu = 1.0;
  double n_mu = 1.0;
  double c1 = 2.0;
  double c2 = 2.0;
};

struct VerifyArgs {
  std::vector<std::string> suites{"all"};
  int depth = 0;
  bool quick = false;
  std::string report;
  std::string plots;
  std::string goldens;
  double c1 = 2.0;
  double c2 = 2.0;
};

struct Result {
  nlohmann::ordered_json body;  // printed as JSON, or flattened to key,value rows
  bool pass = true;             // false maps to exit code 1
  std::string csv;              // preformatted CSV when non-empty
  std::vector<std::string> failures;  // echoed to stderr
};

Result run_norm(const Common& common, const NormArgs& args);
Result run_bmo(const Common& common, const BmoArgs& args);
Result run_czd(const Common& common, const CzdArgs& args);
Result run_sparse(const Common& common, const SparseArgs& args);
Result run_ainfty(const Common& common, const AinftyArgs& args);
Result run_constants(const Common& common, const ConstantsArgs& args);
Result run_verify(const Common& common, const VerifyArgs& args);

/// key,value rows for nested JSON, keys joined with '.'.
std::string flatten_csv(const nlohmann::ordered_json& body);

}  // namespace osclab::cli
