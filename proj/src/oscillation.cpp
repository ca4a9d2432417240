#include "osclab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"
#include "cube_max.hpp"

namespace osclab {

namespace {

void require_same_grid(const CellFunction& f, const CellMeasure& mu) {
  if (!f.grid().same_shape(mu.grid())) throw Error(ErrorKind::parameter, "function and measure grids differ");
}

/// Integral of |f - c| over the cells of a range.
double abs_dev_integral(std::span<const double> f, std::span<const double> m, CellRange r, double c) {
  return pairwise_sum(r.size(), [&](std::size_t i) { return std::abs(f[r.first + i] - c) * m[r.first + i]; });
}

/// Clamped to the value range on positive-mass cells, so constants average
/// to themselves exactly.
double mean_on(std::span<const double> f, std::span<const double> m, CellRange r, double mass) {
  const double mean = pairwise_sum(r.size(), [&](std::size_t i) { return f[r.first + i] * m[r.first + i]; }) / mass;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = r.first; i < r.last; ++i) {
    if (m[i] > 0.0) {
      lo = std::min(lo, f[i]);
      hi = std::max(hi, f[i]);
    }
  }
  return std::clamp(mean, lo, hi);
}

double oscillation_code(const CellFunction& f, const CellMeasure& mu, int level, std::uint64_t code) {
  const double mass = mu.mass(level, code);
  const CellRange r = mu.grid().cells(level, code);
  const double avg = mean_on(f.values(), mu.masses(), r, mass);
  return abs_dev_integral(f.values(), mu.masses(), r, avg) / mass;
}

}  // namespace

double oscillation(const CellFunction& f, const DyadicCube& q, const CellMeasure& mu) {
  require_same_grid(f, mu);
  const std::uint64_t code = mu.grid().code(q);
  if (!(mu.mass(q.level, code) > 0.0)) {
    throw Error(ErrorKind::degenerate_measure, "oscillation on zero-mass cube " + to_string(q, mu.grid().dimension()));
  }
  return oscillation_code(f, mu, q.level, code);
}

CubeMax bmo_norm(const CellFunction& f, const CellMeasure& mu, int min_level) {
  require_same_grid(f, mu);
  const Grid& grid = mu.grid();
  if (min_level < 0) throw Error(ErrorKind::parameter, "min_level must be >= 0");
  const int max_level = grid.depth() - min_level;
  if (max_level < 0) throw Error(ErrorKind::parameter, "min_level exceeds the grid depth");
  return detail::cube_max(grid, max_level, mu, [&](int l, std::uint64_t m) { return oscillation_code(f, mu, l, m); });
}

CellFunction truncate(const CellFunction& f, double lower, double upper) {
  if (!(lower < upper)) throw Error(ErrorKind::parameter, "truncation needs L < U");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = std::clamp(x, lower, upper);
  return CellFunction(f.grid(), std::move(v));
}

CZResult cz_decompose(const CellFunction& g, const DyadicCube& q, const CellMeasure& mu, double L) {
  require_same_grid(g, mu);
  const Grid& grid = mu.grid();
  const std::uint64_t root_code = grid.code(q);
  const double root_mass = mu.mass(q.level, root_code);
  if (!(root_mass > 0.0)) throw Error(ErrorKind::degenerate_measure, "CZ decomposition of a zero-mass cube");
  const auto values = g.values();
  const auto masses = mu.masses();
  auto abs_avg = [&](int level, std::uint64_t code) {
    const CellRange r = grid.cells(level, code);
    return abs_dev_integral(values, masses, r, 0.0) / mu.mass(level, code);
  };
  CZResult out;
  out.parent = q;
  out.level_L = L;
  out.selected.parent = q;
  out.parent_average = abs_avg(q.level, root_code);
  if (!(out.parent_average <= L)) {
    throw Error(ErrorKind::stopping_precondition,
                "average of |g| on the root cube is " + std::to_string(out.parent_average) + " > L = " + std::to_string(L));
  }
  // depth-first in Morton order, children visited in increasing code
  std::vector<std::pair<int, std::uint64_t>> stack;
  const std::size_t fan = grid.children_per_cube();
  auto push_children = [&](int level, std::uint64_t code) {
    if (level >= grid.depth()) return;
    for (std::size_t k = fan; k-- > 0;) stack.emplace_back(level + 1, code * fan + k);
  };
  push_children(q.level, root_code);
  while (!stack.empty()) {
    const auto [level, code] = stack.back();
    stack.pop_back();
    if (!(mu.mass(level, code) > 0.0)) continue;
    const double avg = abs_avg(level, code);
    if (avg > L) {
      out.selected.members.push_back(grid.cube(level, code));
      out.averages.push_back(avg);
    } else {
      push_children(level, code);
    }
  }
  return out;
}

CZCheck check_cz(const CZResult& result, const CellFunction& g, const CellMeasure& mu, double tol) {
  const Grid& grid = mu.grid();
  CZCheck check;
  check.antichain = is_disjoint_family(grid, result.selected);
  check.sandwich_factor = mu.doubling_or_estimate().parent_factor();
  const double L = result.level_L;
  std::vector<char> covered(grid.cell_count(), 0);
  std::vector<double> selected_mass;
  for (std::size_t j = 0; j < result.selected.members.size(); ++j) {
    const auto& cube = result.selected.members[j];
    const double avg = result.averages[j];
    if (!(avg > L)) check.sandwich = false;
    check.worst_upper = std::max(check.worst_upper, avg / (check.sandwich_factor * L));
    const CellRange r = grid.cells(cube);
    std::fill(covered.begin() + r.first, covered.begin() + r.last, 1);
    selected_mass.push_back(cube_mass(mu, cube));
  }
  if (check.worst_upper > 1.0 + tol) check.sandwich = false;
  const double budget = cube_mass(mu, result.parent) * result.parent_average / L;
  const double total = pairwise_sum(selected_mass);
  check.smallness_ratio = budget > 0.0 ? total / budget : (total > 0.0 ? INFINITY : 0.0);
  check.smallness = total <= budget * (1.0 + tol);
  const CellRange root = grid.cells(result.parent);
  for (std::size_t c = root.first; c < root.last; ++c) {
    if (covered[c] || !(mu.masses()[c] > 0.0)) continue;
    check.worst_outside = std::max(check.worst_outside, std::abs(g[c]));
  }
  check.off_union = check.worst_outside <= L * (1.0 + tol);
  return check;
}

double jn_tail(const CellFunction& f, const DyadicCube& q, const CellMeasure& mu, double t) {
  require_same_grid(f, mu);
  if (!(t >= 0.0)) throw Error(ErrorKind::parameter, "jn_tail needs t >= 0");
  const double mass = cube_mass(mu, q);
  if (!(mass > 0.0)) throw Error(ErrorKind::degenerate_measure, "jn_tail on a zero-mass cube");
  const double avg = cube_average(f, q, mu);
  const CellRange r = mu.grid().cells(q);
  const auto masses = mu.masses();
  const double above = pairwise_sum(r.size(), [&](std::size_t i) {
    return std::abs(f[r.first + i] - avg) > t ? masses[r.first + i] : 0.0;
  });
  return above / mass;
}

SparseFamily sparse_dominate(const CellFunction& f, const DyadicCube& q0, const CellMeasure& mu, double lambda,
                             std::size_t max_members) {
  require_same_grid(f, mu);
  if (!(lambda > 1.0)) throw Error(ErrorKind::parameter, "sparse stopping factor must exceed 1");
  const Grid& grid = mu.grid();
  const std::uint64_t root_code = grid.code(q0);
  if (!(mu.mass(q0.level, root_code) > 0.0)) throw Error(ErrorKind::degenerate_measure, "sparse family of a zero-mass cube");
  const CellRange root = grid.cells(q0.level, root_code);
  const auto values = f.values();
  const auto masses = mu.masses();
  const std::size_t fan = grid.children_per_cube();

  SparseFamily out;
  out.root = q0;
  out.stopping_factor = lambda;
  out.owner.assign(root.size(), 0);
  std::vector<double> average;

  struct Pending {
    int level;
    std::uint64_t code;
  };
  std::deque<Pending> queue{{q0.level, root_code}};
  while (!queue.empty()) {
    const Pending p = queue.front();
    queue.pop_front();
    if (out.members.size() >= max_members) {
      out.truncated = true;
      break;
    }
    const int index = static_cast<int>(out.members.size());
    const CellRange r = grid.cells(p.level, p.code);
    const double mass = mu.mass(p.level, p.code);
    const double avg = mean_on(values, masses, r, mass);
    const double osc = abs_dev_integral(values, masses, r, avg) / mass;
    out.members.push_back(grid.cube(p.level, p.code));
    out.member_mass.push_back(mass);
    out.member_oscillation.push_back(osc);
    average.push_back(avg);
    std::fill(out.owner.begin() + (r.first - root.first), out.owner.begin() + (r.last - root.first), index);
    if (!(osc > 0.0)) continue;  // constant on Q: nothing to select
    const double threshold = lambda * osc;
    std::vector<std::pair<int, std::uint64_t>> stack;
    auto push_children = [&](int level, std::uint64_t code) {
      if (level >= grid.depth()) return;
      for (std::size_t k = fan; k-- > 0;) stack.emplace_back(level + 1, code * fan + k);
    };
    push_children(p.level, p.code);
    while (!stack.empty()) {
      const auto [level, code] = stack.back();
      stack.pop_back();
      const double sub_mass = mu.mass(level, code);
      if (!(sub_mass > 0.0)) continue;
      const double dev = abs_dev_integral(values, masses, grid.cells(level, code), avg) / sub_mass;
      if (dev > threshold) queue.push_back({level, code});
      else push_children(level, code);
    }
  }

  out.major_mass.assign(out.members.size(), 0.0);
  for (std::size_t i = 0; i < root.size(); ++i) out.major_mass[out.owner[i]] += masses[root.first + i];

  std::vector<double> dominating(root.size(), 0.0);
  for (std::size_t k = 0; k < out.members.size(); ++k) {
    const CellRange r = grid.cells(out.members[k]);
    for (std::size_t c = r.first; c < r.last; ++c) dominating[c - root.first] += out.member_oscillation[k];
  }
  const double f_root = average.front();
  for (std::size_t i = 0; i < root.size(); ++i) {
    const double dev = std::abs(values[root.first + i] - f_root);
    if (dev == 0.0 || !(masses[root.first + i] > 0.0)) continue;
    out.c_dom = dominating[i] > 0.0 ? std::max(out.c_dom, dev / dominating[i]) : INFINITY;
  }
  return out;
}

LocalizedSup sup_localized_oscillation(const CellFunction& f, const LocalNormSpec& spec, const CellMeasure& mu,
                                       int min_level, int max_level) {
  require_same_grid(f, mu);
  const Grid& grid = mu.grid();
  const CubeMax bmo = bmo_norm(f, mu, min_level);
  if (!(bmo.value > 0.0)) throw Error(ErrorKind::degenerate_measure, "BMO norm vanishes; nothing to normalize");
  int top = grid.depth() - min_level;
  if (max_level >= 0) top = std::min(top, max_level);
  const double scale = 1.0 / bmo.value;
  const CubeMax best = detail::cube_max(grid, top, mu, [&](int l, std::uint64_t m) {
    const DyadicCube cube = grid.cube(l, m);
    const double avg = cube_average(f, cube, mu);
    return detail::evaluate(spec.family(), detail::gather(f, cube, spec, avg, scale));
  });
  return {best.value, best.argmax, bmo.value};
}

}  // namespace osclab
