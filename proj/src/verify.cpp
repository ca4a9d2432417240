#include "osclab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "osclab/error.hpp"
#include "suites.hpp"

namespace osclab {

namespace {

struct SuiteDef {
  std::string name;
  std::vector<int> criteria;
  suites::SuiteFn fn;
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs{
      {"lp-sharp", {1}, suites::lp_sharp},
      {"lp-rate", {2}, suites::lp_rate},
      {"luxemburg", {3}, suites::luxemburg},
      {"cz", {4}, suites::cz},
      {"young", {5}, suites::young},
      {"theorem-constant", {6}, suites::theorem_constant},
      {"laplace", {7}, suites::laplace},
      {"variable", {8}, suites::variable},
      {"wr", {9}, suites::wr},
      {"fujii-wilson", {10}, suites::fujii_wilson},
      {"profile", {11}, suites::profile},
      {"sparse", {12}, suites::sparse},
      {"subcube", {13}, suites::subcube},
      {"jn-tail", {14}, suites::jn_tail},
  };
  return defs;
}

// Non-finite doubles have no JSON literal; they are written as strings.
nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

bool Report::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "osclab";
  j["seed"] = options.seed;
  j["depth"] = options.depth;
  j["quick"] = options.quick;
  j["jn"] = {{"c1", options.jn.c1}, {"c2", options.jn.c2}};
  std::size_t total = 0;
  std::size_t failed = 0;
  auto& list = j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : suites) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["criteria"] = s.criteria;
    js["pass"] = s.pass();
    auto& checks = js["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : s.checks) {
      ++total;
      if (!c.pass) ++failed;
      checks.push_back({{"name", c.name},
                        {"ref", c.ref},
                        {"criterion", c.criterion},
                        {"value", number(c.value)},
                        {"bound", number(c.bound)},
                        {"pass", c.pass},
                        {"detail", c.detail}});
    }
    list.push_back(std::move(js));
  }
  j["summary"] = {{"checks", total}, {"failed", failed}, {"pass", failed == 0}};
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : registry()) out.push_back(d.name);
    return out;
  }();
  return names;
}

Report run_suites(const VerifyOptions& options) {
  options.jn.validate();
  if (options.depth < 0 || options.depth > 20) throw Error(ErrorKind::parameter, "depth must be in [1, 20]");
  std::vector<const SuiteDef*> chosen;
  for (const auto& d : registry()) {
    const bool wanted = std::any_of(options.suites.begin(), options.suites.end(),
                                    [&](const std::string& s) { return s == "all" || s == d.name; });
    if (wanted) chosen.push_back(&d);
  }
  for (const auto& s : options.suites) {
    if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw Error(ErrorKind::parameter, "unknown suite '" + s + "'");
    }
  }

  suites::Goldens goldens(options.goldens);
  Report report;
  report.options = options;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const SuiteDef& def = *chosen[i];
    SuiteResult result;
    result.name = def.name;
    result.criteria = def.criteria;
    // the suite seed depends on the suite, not on which other suites run
    const auto index = static_cast<std::uint64_t>(std::find(suite_names().begin(), suite_names().end(), def.name) -
                                                  suite_names().begin());
    suites::Context ctx{options, goldens, options.seed * 1000003ULL + index};
    suites::Recorder rec(result);
    const auto start = std::chrono::steady_clock::now();
    try {
      def.fn(ctx, rec);
    } catch (const Error& e) {
      rec.add("suite-error", "suite completed without an exception", 0, 0, false,
              std::string(to_string(e.kind())) + ": " + e.what(), 0);
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::stable_sort(result.checks.begin(), result.checks.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    report.suites.push_back(std::move(result));
  }
  goldens.save();
  return report;
}

std::vector<std::filesystem::path> emit_plot_data(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& s : report.suites) {
    for (const auto& table : s.plots) {
      const auto path = dir / table.file;
      std::ofstream out(path);
      if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
      for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
      out << '\n' << std::setprecision(17);
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
      }
      if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
      written.push_back(path);
    }
  }
  return written;
}

namespace suites {

Goldens::Goldens(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& [k, v] : j.items()) values_[k] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "golden file " + path_.string() + ": " + e.what());
  }
}

std::optional<double> Goldens::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void Goldens::record(const std::string& key, double value) {
  values_[key] = value;
  dirty_ = true;
}

void Goldens::save() const {
  if (!dirty_ || path_.empty()) return;
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  std::ofstream out(path_);
  if (!out) throw Error(ErrorKind::io, "cannot write golden file " + path_.string());
  out << std::setw(2) << j << '\n';
  std::fprintf(stderr, "osclab: recorded new reference bands in %s\n", path_.string().c_str());
}

int Context::depth(int full, int quick) const {
  if (options.depth > 0) return options.depth;
  return options.quick ? quick : full;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void Recorder::add(std::string name, std::string ref, double value, double bound, bool pass, std::string detail,
                   int criterion) {
  out_.checks.push_back({std::move(name), std::move(ref), value, bound, pass, std::move(detail), criterion});
}

void Recorder::at_most(std::string name, std::string ref, double value, double bound, int criterion,
                       std::string detail) {
  add(std::move(name), std::move(ref), value, bound, value <= bound, std::move(detail), criterion);
}

void Recorder::at_least(std::string name, std::string ref, double value, double bound, int criterion,
                        std::string detail) {
  add(std::move(name), std::move(ref), value, bound, value >= bound, std::move(detail), criterion);
}

void Recorder::golden_band(Context& ctx, const std::string& key, std::string ref, double lo, double hi,
                           int criterion) {
  const auto g_lo = ctx.goldens.get(key + ".lo");
  const auto g_hi = ctx.goldens.get(key + ".hi");
  const std::string detail = "band [" + fmt(lo) + ", " + fmt(hi) + "]";
  if (!g_lo || !g_hi) {
    ctx.goldens.record(key + ".lo", lo);
    ctx.goldens.record(key + ".hi", hi);
    add(key, std::move(ref), 0.0, 1e-9, std::isfinite(lo) && std::isfinite(hi), detail, criterion);
    return;
  }
  const double drift = std::max(std::abs(lo - *g_lo) / std::abs(*g_lo), std::abs(hi - *g_hi) / std::abs(*g_hi));
  add(key, std::move(ref), drift, 1e-9, drift <= 1e-9, detail, criterion);
}

PlotTable& Recorder::plot(std::string file, std::vector<std::string> header) {
  out_.plots.push_back({std::move(file), std::move(header), {}});
  return out_.plots.back();
}

}  // namespace suites

}  // namespace osclab
