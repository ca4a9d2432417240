#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "osclab/ainfty.hpp"
#include "osclab/constants.hpp"
#include "osclab/error.hpp"
#include "osclab/io.hpp"
#include "osclab/norms.hpp"
#include "osclab/oscillation.hpp"
#include "osclab/testfunctions.hpp"
#include "osclab/verify.hpp"

namespace osclab::cli {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double parse_number(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorKind::parameter, "bad number '" + std::string(text) + "' in " + what);
  }
  return v;
}

DyadicCube parse_cube(const Grid& grid, const std::string& text) {
  if (text.empty()) return grid.root();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::parameter, "cube must be level:i0,i1,... (got '" + text + "')");
  DyadicCube cube;
  cube.level = static_cast<int>(parse_number(std::string_view(text).substr(0, colon), "cube level"));
  std::string_view rest = std::string_view(text).substr(colon + 1);
  int axis = 0;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    if (axis >= grid.dimension()) throw Error(ErrorKind::parameter, "cube '" + text + "' has too many indices");
    cube.index[static_cast<std::size_t>(axis++)] =
        static_cast<std::uint32_t>(parse_number(rest.substr(0, comma), "cube index"));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (axis != grid.dimension()) throw Error(ErrorKind::parameter, "cube '" + text + "' needs one index per axis");
  grid.validate(cube);
  return cube;
}

struct Loaded {
  CellFunction f;
  CellMeasure mu;
  DyadicCube cube;
};

Loaded load(const Common& common, const Source& src) {
  if (src.input.empty() == src.function.empty()) {
    throw Error(ErrorKind::parameter, "give exactly one of --input or --function");
  }
  CellFunction f = src.input.empty() ? builtin_function(Grid(common.dimension, src.depth), src.function)
                                     : load_function(src.input, common.dimension);
  CellMeasure mu = src.measure.empty() ? CellMeasure::lebesgue(f.grid()) : load_measure(src.measure, common.dimension);
  if (!mu.grid().same_shape(f.grid())) throw Error(ErrorKind::parameter, "measure and function grids differ");
  const DyadicCube cube = parse_cube(f.grid(), src.cube);
  return {std::move(f), std::move(mu), cube};
}

Json source_json(const Source& src) {
  return src.input.empty() ? Json{{"function", src.function}, {"depth", src.depth}} : Json{{"input", src.input}};
}

Json header(const Common& common, const char* command) {
  return Json{{"command", command}, {"seed", common.seed}, {"dimension", common.dimension}};
}

NormFamily parse_family(const std::string& text, const Common& common, const Grid& grid) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
  if (kind == "lp") return Lp{parse_number(arg, "--family")};
  if (kind == "weak-lp") return WeakLp{parse_number(arg, "--family")};
  if (kind == "orlicz") return Orlicz{parse_young(arg)};
  if (kind == "weak-orlicz") return WeakOrlicz{parse_young(arg)};
  if (kind == "variable") {
    auto p = load_function(arg, common.dimension);
    if (!p.grid().same_shape(grid)) throw Error(ErrorKind::parameter, "exponent and function grids differ");
    return Variable{ExponentFunction(std::move(p))};
  }
  throw Error(ErrorKind::parameter,
              "unknown family '" + text + "' (lp:p, weak-lp:p, orlicz:<young>, weak-orlicz:<young>, variable:<file>)");
}

Bijection parse_psi(const std::string& text) {
  if (text == "identity") return Bijection::identity();
  if (text.rfind("power:", 0) == 0) return Bijection::power(parse_number(std::string_view(text).substr(6), "--psi"));
  if (text.rfind("orlicz:", 0) == 0) return Bijection::orlicz(parse_young(text.substr(7)));
  throw Error(ErrorKind::parameter, "unknown Psi '" + text + "' (identity, power:s, orlicz:<young>)");
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string flatten_csv(const nlohmann::ordered_json& body) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(body, "", out);
  return out.str();
}

Result run_norm(const Common& common, const NormArgs& args) {
  const auto [f, mu, q] = load(common, args.source);
  const LocalNormSpec spec(parse_family(args.family, common, f.grid()), mu, CubeFunctional::measure(mu));
  double value = 0.0;
  if (args.centered) {
    const double avg = cube_average(f, q, mu);
    value = detail::evaluate(spec.family(), detail::gather(f, q, spec, avg));
  } else {
    value = local_norm(f, q, spec);
  }
  Result r;
  r.body = header(common, "norm");
  r.body["source"] = source_json(args.source);
  r.body["family"] = spec.name();
  r.body["cube"] = to_string(q, f.grid().dimension());
  r.body["centered"] = args.centered;
  r.body["value"] = number(value);
  return r;
}

Result run_bmo(const Common& common, const BmoArgs& args) {
  const auto [f, mu, q] = load(common, args.source);
  const CubeMax m = bmo_norm(f, mu, args.min_level);
  Result r;
  r.body = header(common, "bmo");
  r.body["source"] = source_json(args.source);
  r.body["min_level"] = args.min_level;
  r.body["value"] = number(m.value);
  r.body["argmax"] = to_string(m.argmax, f.grid().dimension());
  return r;
}

Result run_czd(const Common& common, const CzdArgs& args) {
  const auto [f, mu0, q] = load(common, args.source);
  const CellMeasure mu = mu0.with_estimated_doubling();
  const CZResult cz = cz_decompose(f, q, mu, args.level);
  const CZCheck chk = check_cz(cz, f, mu);
  Result r;
  r.body = header(common, "czd");
  r.body["source"] = source_json(args.source);
  r.body["cube"] = to_string(q, f.grid().dimension());
  r.body["L"] = args.level;
  r.body["parent_average"] = cz.parent_average;
  Json cubes = Json::array();
  for (std::size_t i = 0; i < cz.selected.members.size(); ++i) {
    cubes.push_back({{"cube", to_string(cz.selected.members[i], f.grid().dimension())}, {"average", cz.averages[i]}});
  }
  r.body["selected"] = std::move(cubes);
  r.body["checks"] = {{"antichain", chk.antichain},
                      {"sandwich", chk.sandwich},
                      {"smallness", chk.smallness},
                      {"off_union", chk.off_union},
                      {"sandwich_factor", number(chk.sandwich_factor)},
                      {"smallness_ratio", number(chk.smallness_ratio)}};
  r.pass = chk.ok();
  return r;
}

Result run_sparse(const Common& common, const SparseArgs& args) {
  const auto [f, mu, q] = load(common, args.source);
  const SparseFamily fam = sparse_dominate(f, q, mu, args.lambda);
  double worst = 0.0;
  for (std::size_t k = 0; k < fam.members.size(); ++k) worst = std::max(worst, fam.member_mass[k] / fam.major_mass[k]);
  Result r;
  r.body = header(common, "sparse");
  r.body["source"] = source_json(args.source);
  r.body["lambda"] = args.lambda;
  r.body["members"] = fam.members.size();
  r.body["truncated"] = fam.truncated;
  r.body["c_dom"] = number(fam.c_dom);
  r.body["worst_mass_over_major"] = number(worst);
  r.body["sparse_with_2"] = worst <= 2.0;
  r.pass = worst <= 2.0 && !fam.truncated;
  return r;
}

Result run_ainfty(const Common& common, const AinftyArgs& args) {
  const auto [w, mu, q] = load(common, args.weight);
  CubeFunctional y = CubeFunctional::measure(mu);
  if (args.functional == "weight") {
    y = CubeFunctional::weight_mass(w, mu);
  } else if (args.functional.rfind("wr:", 0) == 0) {
    y = CubeFunctional::wr(w, mu, parse_number(std::string_view(args.functional).substr(3), "--functional"));
  } else if (args.functional != "measure") {
    throw Error(ErrorKind::parameter, "unknown functional '" + args.functional + "' (measure, weight, wr:r)");
  }
  const CubeMax fw = fujii_wilson(w, y, mu);
  Result r;
  r.body = header(common, "ainfty");
  r.body["source"] = source_json(args.weight);
  r.body["functional"] = y.name();
  r.body["fujii_wilson"] = number(fw.value);
  r.body["argmax"] = to_string(fw.argmax, w.grid().dimension());
  if (args.embedding) {
    const Grid& g = w.grid();
    const std::vector<CellFunction> tests{log_reciprocal(g), indicator(g, 0.5), random_step(g, common.seed)};
    const auto emb = embedding_constant(w, y, mu, tests);
    r.body["embedding"] = number(emb.value);
  }
  return r;
}

Result run_constants(const Common& common, const ConstantsArgs& args) {
  if (args.psi.empty() && args.young.empty()) throw Error(ErrorKind::parameter, "give --psi and/or --young");
  Result r;
  r.body = header(common, "constants");
  if (!args.psi.empty()) {
    const Bijection psi = parse_psi(args.psi);
    psi.validate();
    const auto tc = theorem_constant(psi, args.c_y, args.k, args.c_mu, args.n_mu);
    r.body["theorem"] = {{"psi", psi.name},         {"c_y", args.c_y},           {"k", args.k},
                         {"c_mu", args.c_mu},       {"n_mu", args.n_mu},         {"value", number(tc.value)},
                         {"argmin_L", number(tc.argmin_L)}, {"L_min", number(tc.L_min)}};
  }
  if (!args.young.empty()) {
    const YoungFunction phi = parse_young(args.young);
    const auto lb = laplace_bound(phi, JNParams{args.c1, args.c2});
    Json y{{"young", phi.name()}, {"c1", args.c1}, {"c2", args.c2}, {"laplace_bound", number(lb.value)},
           {"s_star", number(lb.s_star)}};
    if (phi.bounds()) {
      y["orlicz_constant"] = number(orlicz_constant(phi, phi.submult_c(), args.c_mu, args.n_mu));
      y["growth_lower"] = phi.bounds()->lower;
      y["growth_upper"] = phi.bounds()->upper;
    }
    r.body["young"] = std::move(y);
  }
  return r;
}

Result run_verify(const Common& common, const VerifyArgs& args) {
  VerifyOptions options;
  options.suites = args.suites;
  options.depth = args.depth;
  options.seed = common.seed;
  options.quick = args.quick;
  options.jn = JNParams{args.c1, args.c2};
  options.goldens = args.goldens;
  const Report report = run_suites(options);

  Result r;
  r.pass = report.pass();
  r.body = report.to_json();
  for (const auto& s : report.suites) {
    for (const auto& c : s.checks) {
      if (c.pass) continue;
      std::ostringstream line;
      line << std::setprecision(10) << "FAIL " << s.name << '/' << c.name << ": value " << c.value << ", bound "
           << c.bound << " [" << c.ref << "]" << (c.detail.empty() ? "" : " " + c.detail);
      r.failures.push_back(line.str());
    }
  }
  if (!args.report.empty()) {
    std::ofstream out(args.report);
    if (!out) throw Error(ErrorKind::io, "cannot write report " + args.report);
    out << r.body.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::io, "write failed for " + args.report);
  }
  if (!args.plots.empty()) emit_plot_data(report, args.plots);

  std::ostringstream csv;
  csv << "suite,check,criterion,value,bound,pass\n" << std::setprecision(17);
  for (const auto& s : report.suites) {
    for (const auto& c : s.checks) {
      csv << s.name << ',' << c.name << ',' << c.criterion << ',' << c.value << ',' << c.bound << ','
          << (c.pass ? "true" : "false") << '\n';
    }
  }
  r.csv = csv.str();
  if (!args.report.empty()) {
    r.body = Json{{"command", "verify"}, {"seed", common.seed}, {"report", args.report}, {"summary", r.body["summary"]}};
    r.csv.clear();
  }
  return r;
}

}  // namespace osclab::cli
