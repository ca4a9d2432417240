#include "osclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"

namespace osclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, v);
  return m;
}

/// Smallest lambda with modular(lambda) <= 1 for a nonincreasing modular;
/// returns the upper end of the final bracket, so the modular there is <= 1.
template <class Modular>
double solve_luxemburg(const Modular& modular, double amax) {
  auto within = [&](double lambda) {
    const double v = modular(lambda);
    return std::isfinite(v) && v <= 1.0;
  };
  double hi = amax;
  int widen = 0;
  while (!within(hi)) {
    hi *= 2.0;
    if (++widen > 1000 || !std::isfinite(hi)) {
      throw Error(ErrorKind::overflow_range, "modular never drops to 1 within the bracket cap");
    }
  }
  double lo = 0.5 * hi;
  int shrink = 0;
  while (within(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++shrink > 2000 || lo == 0.0) return hi;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (within(mid)) hi = mid; else lo = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return hi;
}

void require_y(const detail::Gathered& g) {
  if (!(g.y > 0.0) || !std::isfinite(g.y)) throw Error(ErrorKind::functional, "Y(Q) must be positive and finite");
}

/// Distinct positive values in decreasing order with nu({a >= v}).
struct Distribution {
  std::vector<double> v;
  std::vector<double> mass_at_least;
};

Distribution distribution(const detail::Gathered& g) {
  std::vector<std::size_t> order(g.a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return g.a[i] != g.a[j] ? g.a[i] > g.a[j] : i < j;
  });
  Distribution d;
  double running = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = g.a[order[k]];
    if (!(v > 0.0)) break;
    running += g.m[order[k]];
    const bool last_of_value = k + 1 == order.size() || g.a[order[k + 1]] != v;
    if (last_of_value) {
      d.v.push_back(v);
      d.mass_at_least.push_back(running);
    }
  }
  return d;
}

bool has_positive_support(const detail::Gathered& g) {
  for (std::size_t i = 0; i < g.a.size(); ++i) {
    if (g.a[i] > 0.0 && g.m[i] > 0.0) return true;
  }
  return false;
}

double lp_kernel(double p, const detail::Gathered& g) {
  if (!(p >= 1.0)) throw Error(ErrorKind::parameter, "L^p needs p >= 1");
  require_y(g);
  const double amax = max_abs(g.a);
  if (amax == 0.0) return 0.0;
  const double sum = pairwise_sum(g.a.size(), [&](std::size_t i) { return std::pow(g.a[i] / amax, p) * g.m[i]; });
  return amax * std::pow(sum / g.y, 1.0 / p);
}

double weak_lp_kernel(double p, const detail::Gathered& g) {
  if (!(p > 0.0)) throw Error(ErrorKind::parameter, "weak L^p needs p > 0");
  require_y(g);
  const Distribution d = distribution(g);
  double best = 0.0;
  for (std::size_t k = 0; k < d.v.size(); ++k) best = std::max(best, d.v[k] * std::pow(d.mass_at_least[k] / g.y, 1.0 / p));
  return best;
}

double orlicz_modular_kernel(const YoungFunction& phi, const detail::Gathered& g, double lambda) {
  return pairwise_sum(g.a.size(), [&](std::size_t i) { return g.m[i] == 0.0 ? 0.0 : phi(g.a[i] / lambda) * g.m[i]; }) / g.y;
}

double weak_orlicz_modular_kernel(const YoungFunction& phi, const Distribution& d, double y, double lambda) {
  double best = 0.0;
  for (std::size_t k = 0; k < d.v.size(); ++k) best = std::max(best, phi(d.v[k] / lambda) * d.mass_at_least[k] / y);
  return best;
}

double variable_modular_kernel(const detail::Gathered& g, double lambda) {
  if (!(g.nu > 0.0)) throw Error(ErrorKind::degenerate_measure, "variable modular on a zero-mass cube");
  return pairwise_sum(g.a.size(), [&](std::size_t i) { return g.m[i] == 0.0 ? 0.0 : std::pow(g.a[i] / lambda, g.e[i]) * g.m[i]; }) / g.nu;
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::parameter, "modular needs lambda > 0");
}

template <class T>
const T& require_family(const LocalNormSpec& spec, const char* what) {
  if (const T* p = std::get_if<T>(&spec.family())) return *p;
  throw Error(ErrorKind::parameter, std::string(what) + " called with a " + spec.name() + " spec");
}

}  // namespace

// ---------------------------------------------------------------------------

ExponentFunction::ExponentFunction(CellFunction values) : values_(std::move(values)) {
  p_minus_ = kInf;
  p_plus_ = -kInf;
  for (double p : values_.values()) {
    if (!(p >= 1.0)) throw Error(ErrorKind::parameter, "variable exponent below 1");
    p_minus_ = std::min(p_minus_, p);
    p_plus_ = std::max(p_plus_, p);
  }
}

ExponentFunction ExponentFunction::constant(const Grid& grid, double p) {
  return ExponentFunction(CellFunction::constant(grid, p));
}

ExponentFunction ExponentFunction::scaled(double s) const {
  std::vector<double> v(values_.values().begin(), values_.values().end());
  for (double& p : v) p *= s;
  return ExponentFunction(CellFunction(grid(), std::move(v)));
}

std::string family_name(const NormFamily& family) {
  return std::visit(Overloaded{
                        [](const Lp&) { return std::string("lp"); },
                        [](const WeakLp&) { return std::string("weak-lp"); },
                        [](const Orlicz&) { return std::string("orlicz"); },
                        [](const WeakOrlicz&) { return std::string("weak-orlicz"); },
                        [](const Variable&) { return std::string("variable"); },
                    },
                    family);
}

double geometric_constant(const NormFamily& family) {
  return std::holds_alternative<WeakLp>(family) || std::holds_alternative<WeakOrlicz>(family) ? 2.0 : 1.0;
}

LocalNormSpec::LocalNormSpec(NormFamily family, CellMeasure nu, CubeFunctional y, bool check_average_property)
    : family_(std::move(family)), nu_(std::move(nu)), y_(std::move(y)) {
  const Grid& grid = nu_.grid();
  if (!y_.grid().same_shape(grid)) throw Error(ErrorKind::functional, "functional and measure grids differ");
  if (const auto* v = std::get_if<Variable>(&family_); v && !v->p.grid().same_shape(grid)) {
    throw Error(ErrorKind::parameter, "exponent and measure grids differ");
  }
  if (!check_average_property) return;
  for (int l = 0; l <= grid.depth(); ++l) {
    for (std::uint64_t m = 0; m < grid.cubes_at(l); ++m) {
      const double mass = nu_.mass(l, m);
      const double y_value = y_.value(l, m);
      if (mass > y_value * (1.0 + 1e-12)) {
        throw Error(ErrorKind::functional, "average property fails: nu(Q) > Y(Q) on cube " +
                                               to_string(grid.cube(l, m), grid.dimension()));
      }
    }
  }
}

LocalNormSpec LocalNormSpec::plain(NormFamily family, const CellMeasure& mu) {
  return LocalNormSpec(std::move(family), mu, CubeFunctional::measure(mu), false);
}

namespace detail {

Gathered gather(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double shift, double scale) {
  const CellMeasure& nu = spec.measure();
  if (!f.grid().same_shape(nu.grid())) throw Error(ErrorKind::parameter, "function and measure grids differ");
  const std::uint64_t code = nu.grid().code(q);
  const CellRange range = nu.grid().cells(q.level, code);
  Gathered g;
  g.a.resize(range.size());
  g.m.assign(nu.masses().begin() + range.first, nu.masses().begin() + range.last);
  for (std::size_t i = 0; i < range.size(); ++i) g.a[i] = std::abs(f[range.first + i] - shift) * scale;
  if (const auto* v = std::get_if<Variable>(&spec.family())) {
    const auto values = v->p.values().values();
    g.e.assign(values.begin() + range.first, values.begin() + range.last);
  }
  g.nu = nu.mass(q.level, code);
  g.y = spec.functional().value(q.level, code);
  return g;
}

double modular(const NormFamily& family, const Gathered& g, double lambda) {
  check_lambda(lambda);
  return std::visit(Overloaded{
                        [&](const Lp& f) {
                          require_y(g);
                          return pairwise_sum(g.a.size(), [&](std::size_t i) { return std::pow(g.a[i] / lambda, f.p) * g.m[i]; }) / g.y;
                        },
                        [&](const WeakLp& f) {
                          require_y(g);
                          const Distribution d = distribution(g);
                          double best = 0.0;
                          for (std::size_t k = 0; k < d.v.size(); ++k) {
                            best = std::max(best, std::pow(d.v[k] / lambda, f.p) * d.mass_at_least[k] / g.y);
                          }
                          return best;
                        },
                        [&](const Orlicz& f) {
                          require_y(g);
                          return orlicz_modular_kernel(f.phi, g, lambda);
                        },
                        [&](const WeakOrlicz& f) {
                          require_y(g);
                          return weak_orlicz_modular_kernel(f.phi, distribution(g), g.y, lambda);
                        },
                        [&](const Variable&) { return variable_modular_kernel(g, lambda); },
                    },
                    family);
}

double evaluate(const NormFamily& family, const Gathered& g) {
  return std::visit(Overloaded{
                        [&](const Lp& f) { return lp_kernel(f.p, g); },
                        [&](const WeakLp& f) { return weak_lp_kernel(f.p, g); },
                        [&](const Orlicz& f) {
                          require_y(g);
                          if (!has_positive_support(g)) return 0.0;
                          return solve_luxemburg([&](double lambda) { return orlicz_modular_kernel(f.phi, g, lambda); },
                                                 max_abs(g.a));
                        },
                        [&](const WeakOrlicz& f) {
                          require_y(g);
                          if (!has_positive_support(g)) return 0.0;
                          const Distribution d = distribution(g);
                          return solve_luxemburg(
                              [&](double lambda) { return weak_orlicz_modular_kernel(f.phi, d, g.y, lambda); },
                              max_abs(g.a));
                        },
                        [&](const Variable&) {
                          if (!has_positive_support(g)) return 0.0;
                          return solve_luxemburg([&](double lambda) { return variable_modular_kernel(g, lambda); },
                                                 max_abs(g.a));
                        },
                    },
                    family);
}

}  // namespace detail

double lp_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  return lp_kernel(require_family<Lp>(spec, "lp_norm").p, detail::gather(f, q, spec));
}

double weak_lp_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  return weak_lp_kernel(require_family<WeakLp>(spec, "weak_lp_norm").p, detail::gather(f, q, spec));
}

double orlicz_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda) {
  const auto& family = require_family<Orlicz>(spec, "orlicz_modular");
  check_lambda(lambda);
  const auto g = detail::gather(f, q, spec);
  require_y(g);
  const double value = orlicz_modular_kernel(family.phi, g, lambda);
  if (!std::isfinite(value)) throw Error(ErrorKind::overflow_range, "phi overflows at |f|/lambda; widen lambda");
  return value;
}

double luxemburg_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  require_family<Orlicz>(spec, "luxemburg_norm");
  return detail::evaluate(spec.family(), detail::gather(f, q, spec));
}

double weak_orlicz_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  require_family<WeakOrlicz>(spec, "weak_orlicz_norm");
  return detail::evaluate(spec.family(), detail::gather(f, q, spec));
}

double variable_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda) {
  require_family<Variable>(spec, "variable_modular");
  const double value = detail::modular(spec.family(), detail::gather(f, q, spec), lambda);
  if (!std::isfinite(value)) throw Error(ErrorKind::overflow_range, "variable modular overflows; widen lambda");
  return value;
}

double variable_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  require_family<Variable>(spec, "variable_norm");
  return detail::evaluate(spec.family(), detail::gather(f, q, spec));
}

double local_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec) {
  return detail::evaluate(spec.family(), detail::gather(f, q, spec));
}

double local_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda) {
  return detail::modular(spec.family(), detail::gather(f, q, spec), lambda);
}

}  // namespace osclab
