#include "osclab/testfunctions.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"

namespace osclab {

CellFunction log_reciprocal(const Grid& grid, std::vector<double> x0) {
  if (x0.empty()) x0 = grid.origin();
  if (static_cast<int>(x0.size()) != grid.dimension()) throw Error(ErrorKind::parameter, "x0 needs one coordinate per axis");
  std::vector<double> v(grid.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) {
    const auto x = grid.cell_center(c);
    double r2 = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) r2 += (x[a] - x0[a]) * (x[a] - x0[a]);
    v[c] = -0.5 * std::log(r2);
  }
  return CellFunction(grid, std::move(v));
}

CellFunction indicator(const Grid& grid, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorKind::parameter, "indicator needs theta in [0, 1]");
  const double cut = theta * std::ldexp(1.0, grid.depth());
  std::vector<double> v(grid.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = grid.cell_coords(c)[0] + 0.5 < cut ? 1.0 : 0.0;
  return CellFunction(grid, std::move(v));
}

CellFunction random_step(const Grid& grid, std::uint64_t seed) {
  Rng rng(seed);
  const int top = std::max(1, std::min(grid.depth(), 6));
  const int level = grid.depth() == 0 ? 0 : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(top)));
  std::vector<double> pieces(grid.cubes_at(level));
  for (double& p : pieces) {
    p = rng.uniform(-1.0, 1.0);
    if (rng.uniform() < 0.1) p *= rng.log_uniform(2.0, 50.0);
  }
  const int shift = grid.dimension() * (grid.depth() - level);
  std::vector<double> v(grid.cell_count());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = pieces[c >> shift];
  return CellFunction(grid, std::move(v));
}

CellFunction power_weight(const Grid& grid, double delta) {
  if (!(delta > -1.0)) throw Error(ErrorKind::parameter, "power weight needs delta > -1");
  std::vector<double> v(grid.cell_count());
  const double h = grid.side_length(grid.depth());
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (grid.dimension() == 1) {
      const double a = grid.cell_coords(c)[0] * h;
      const double b = a + h;
      v[c] = (std::pow(b, delta + 1.0) - std::pow(a, delta + 1.0)) / ((delta + 1.0) * h);
    } else {
      const auto x = grid.cell_center(c);
      double r2 = 0.0;
      for (int a = 0; a < grid.dimension(); ++a) r2 += (x[a] - grid.origin()[a]) * (x[a] - grid.origin()[a]);
      v[c] = std::pow(r2, 0.5 * delta);
    }
  }
  return CellFunction(grid, std::move(v));
}

CellMeasure recursive_split_measure(const Grid& grid, std::uint64_t seed, double ratio) {
  if (!(ratio >= 1.0)) throw Error(ErrorKind::parameter, "split ratio must be >= 1");
  Rng rng(seed);
  const std::size_t fan = grid.children_per_cube();
  std::vector<double> level_mass{1.0};
  for (int l = 1; l <= grid.depth(); ++l) {
    std::vector<double> next(level_mass.size() * fan);
    for (std::size_t m = 0; m < level_mass.size(); ++m) {
      double total = 0.0;
      for (std::size_t k = 0; k < fan; ++k) total += next[m * fan + k] = rng.uniform(1.0, ratio);
      for (std::size_t k = 0; k < fan; ++k) next[m * fan + k] *= level_mass[m] / total;
    }
    level_mass = std::move(next);
  }
  return CellMeasure(grid, std::move(level_mass));
}

ExponentFunction random_exponent(const Grid& grid, std::uint64_t seed, double p_min, double p_max) {
  if (!(p_min >= 1.0) || !(p_max >= p_min)) throw Error(ErrorKind::parameter, "random exponent needs 1 <= p_min <= p_max");
  Rng rng(seed);
  std::vector<double> v(grid.cell_count());
  for (double& p : v) p = rng.uniform(p_min, p_max);
  v[rng.below(v.size())] = p_max;
  if (v.size() > 1) {
    std::size_t low = rng.below(v.size());
    if (v[low] == p_max) low = (low + 1) % v.size();
    v[low] = p_min;
  }
  return ExponentFunction(CellFunction(grid, std::move(v)));
}

CellFunction builtin_function(const Grid& grid, std::string_view name) {
  const auto colon = name.find(':');
  const std::string_view kind = name.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
  auto number = [&]() {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (arg.empty() || ec != std::errc{} || end != arg.data() + arg.size()) {
      throw Error(ErrorKind::parameter, "bad argument in builtin function '" + std::string(name) + "'");
    }
    return v;
  };
  if (kind == "log-reciprocal" && arg.empty()) return log_reciprocal(grid);
  if (kind == "indicator") return indicator(grid, arg.empty() ? 0.5 : number());
  if (kind == "random-step") return random_step(grid, arg.empty() ? 7 : static_cast<std::uint64_t>(number()));
  if (kind == "power") return power_weight(grid, number());
  throw Error(ErrorKind::parameter, "unknown builtin function '" + std::string(name) +
                                        "' (log-reciprocal, indicator:theta, random-step:seed, power:delta)");
}

}  // namespace osclab
