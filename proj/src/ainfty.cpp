#include "osclab/ainfty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cube_max.hpp"
#include "osclab/error.hpp"

namespace osclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_grid(const CellFunction& f, const CellMeasure& mu) {
  if (!f.grid().same_shape(mu.grid())) throw Error(ErrorKind::parameter, "function and measure grids differ");
}

double slack(double lhs, double rhs) {
  if (rhs > 0.0) return (rhs - lhs) / rhs;
  return lhs > 0.0 ? -kInf : 0.0;
}

DyadicCube random_cube(const Grid& grid, const CellMeasure& mu, int max_level, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_level) + 1));
    const std::uint64_t code = rng.below(grid.cubes_at(level));
    if (mu.mass(level, code) > 0.0) return grid.cube(level, code);
  }
  return grid.root();
}

/// Sums over an explicit cell set.
struct SetSums {
  double mu = 0.0;
  double w = 0.0;
  double wr = 0.0;  // integral of w^r
};

SetSums set_sums(const std::vector<std::size_t>& cells, const CellFunction& w, const CellMeasure& mu, double r) {
  SetSums s;
  const auto m = mu.masses();
  s.mu = pairwise_sum(cells.size(), [&](std::size_t i) { return m[cells[i]]; });
  s.w = pairwise_sum(cells.size(), [&](std::size_t i) { return w[cells[i]] * m[cells[i]]; });
  s.wr = pairwise_sum(cells.size(), [&](std::size_t i) { return std::pow(w[cells[i]], r) * m[cells[i]]; });
  return s;
}

double wr_of(const SetSums& s, double r) { return std::pow(s.mu, 1.0 - 1.0 / r) * std::pow(s.wr, 1.0 / r); }

/// M(w chi_Q) on the cells of Q, given the tree of w dmu.
std::vector<double> maximal_on(const CellFunction& w, const CellMeasure& mu, const CellMeasure& wmu, int level,
                               std::uint64_t code) {
  const Grid& grid = mu.grid();
  const std::size_t fan = grid.children_per_cube();
  // a single cell averages to its own value; dividing w m by m could lose an ulp
  auto average = [&](int l, std::uint64_t m, double fallback) {
    const double mass = mu.mass(l, m);
    if (!(mass > 0.0)) return fallback;
    return std::max(fallback, l == grid.depth() ? w[m] : wmu.mass(l, m) / mass);
  };
  std::vector<double> running{average(level, code, 0.0)};
  for (int l = level + 1; l <= grid.depth(); ++l) {
    std::vector<double> next(running.size() * fan);
    const std::uint64_t base = code << (grid.dimension() * (l - level));
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = average(l, base + i, running[i / fan]);
    running = std::move(next);
  }
  return running;
}

}  // namespace

double WrReport::worst() const {
  return std::min({mass_below_wr, subset_scaling, superadditive, monotone, ainfty});
}

double wr_value(const CellFunction& w, const CellMeasure& mu, const DyadicCube& q, double r) {
  require_same_grid(w, mu);
  if (!(r > 1.0)) throw Error(ErrorKind::parameter, "w_r needs r > 1");
  const std::uint64_t code = mu.grid().code(q);
  const double mass = mu.mass(q.level, code);
  if (!(mass > 0.0)) throw Error(ErrorKind::degenerate_measure, "w_r on a zero-mass cube");
  const CellRange range = mu.grid().cells(q.level, code);
  const auto m = mu.masses();
  const double s = pairwise_sum(range.size(), [&](std::size_t i) {
    return std::pow(w[range.first + i], r) * m[range.first + i];
  });
  return std::pow(mass, 1.0 - 1.0 / r) * std::pow(s, 1.0 / r);
}

WrReport check_wr_properties(const CellFunction& w, const CellMeasure& mu, double r, int trials, std::uint64_t seed) {
  require_same_grid(w, mu);
  if (!(r > 1.0)) throw Error(ErrorKind::parameter, "w_r needs r > 1");
  if (trials < 1) throw Error(ErrorKind::parameter, "check_wr_properties needs trials >= 1");
  const Grid& grid = mu.grid();
  const double r_prime = r / (r - 1.0);
  Rng rng(seed);
  WrReport report;
  report.trials = trials;
  report.mass_below_wr = report.subset_scaling = report.superadditive = report.monotone = report.ainfty = kInf;
  auto note = [](double& worst, double value) { worst = std::min(worst, value); };

  for (int t = 0; t < trials; ++t) {
    const DyadicCube q = random_cube(grid, mu, std::max(0, grid.depth() - 2), rng);
    const CellRange range = grid.cells(q);
    const double p_e = rng.uniform(0.05, 0.95);
    const double p_extra = rng.uniform(0.0, 1.0);
    std::vector<std::size_t> e_cells;
    std::vector<std::size_t> f_cells;
    for (std::size_t c = range.first; c < range.last; ++c) {
      if (rng.uniform() < p_e) {
        e_cells.push_back(c);
        f_cells.push_back(c);
      } else if (rng.uniform() < p_extra) {
        f_cells.push_back(c);
      }
    }
    if (e_cells.empty()) {
      if (f_cells.empty()) f_cells.push_back(range.first);
      e_cells.push_back(f_cells.front());
    }
    const SetSums se = set_sums(e_cells, w, mu, r);
    const SetSums sf = set_sums(f_cells, w, mu, r);
    if (se.mu > 0.0) {
      note(report.mass_below_wr, slack(se.w, wr_of(se, r)));
      note(report.subset_scaling, slack(wr_of(se, r), std::pow(se.mu / sf.mu, 1.0 / r_prime) * wr_of(sf, r)));
      note(report.monotone, slack(wr_of(se, r), wr_of(sf, r)));
    }

    // disjoint pieces of F
    const std::size_t pieces = 2 + rng.below(4);
    std::vector<std::vector<std::size_t>> parts(pieces);
    for (std::size_t c : f_cells) parts[rng.below(pieces)].push_back(c);
    double sum_parts = 0.0;
    for (const auto& part : parts) {
      if (!part.empty()) sum_parts += wr_of(set_sums(part, w, mu, r), r);
    }
    note(report.superadditive, slack(sum_parts, wr_of(sf, r)));

    // dyadic antichain consequence
    if (q.level < grid.depth()) {
      const auto family = random_antichain(mu, q, rng);
      if (!family.empty()) {
        const double wq = wr_value(w, mu, q, r);
        double sum = 0.0;
        double covered = 0.0;
        for (const auto& qj : family) {
          sum += wr_value(w, mu, qj, r);
          covered += cube_mass(mu, qj);
        }
        note(report.ainfty, slack(sum / wq, std::pow(covered / cube_mass(mu, q), 1.0 / r_prime)));
      }
    }
  }
  for (double* v : {&report.mass_below_wr, &report.subset_scaling, &report.superadditive, &report.monotone, &report.ainfty}) {
    if (*v == kInf) *v = 0.0;
  }
  return report;
}

CellFunction local_maximal(const CellFunction& w, const DyadicCube& q, const CellMeasure& mu) {
  require_same_grid(w, mu);
  const std::uint64_t code = mu.grid().code(q);
  if (!(mu.mass(q.level, code) > 0.0)) throw Error(ErrorKind::degenerate_measure, "maximal function on a zero-mass cube");
  const CellMeasure wmu = mu.weighted(w);
  const auto values = maximal_on(w, mu, wmu, q.level, code);
  std::vector<double> out(w.size(), 0.0);
  const CellRange range = mu.grid().cells(q.level, code);
  std::copy(values.begin(), values.end(), out.begin() + range.first);
  return CellFunction(w.grid(), std::move(out));
}

CubeMax fujii_wilson(const CellFunction& w, const CubeFunctional& y, const CellMeasure& mu, int min_level) {
  require_same_grid(w, mu);
  const Grid& grid = mu.grid();
  if (min_level < 0 || min_level > grid.depth()) throw Error(ErrorKind::parameter, "min_level out of range");
  const CellMeasure wmu = mu.weighted(w);
  const auto masses = mu.masses();
  return detail::cube_max(grid, grid.depth() - min_level, mu, [&](int l, std::uint64_t m) {
    const double y_value = y.value(l, m);
    const auto values = maximal_on(w, mu, wmu, l, m);
    const CellRange range = grid.cells(l, m);
    const double integral = pairwise_sum(values.size(), [&](std::size_t i) { return values[i] * masses[range.first + i]; });
    if (!(y_value > 0.0)) {
      // w vanishing on Q with Y = w(Q) is 0/0; count it as 0
      if (integral == 0.0) return 0.0;
      throw Error(ErrorKind::functional, "Y vanishes on cube " + to_string(grid.cube(l, m), grid.dimension()));
    }
    return integral / y_value;
  });
}

std::vector<DyadicCube> random_antichain(const CellMeasure& mu, const DyadicCube& q, Rng& rng) {
  const Grid& grid = mu.grid();
  const std::size_t fan = grid.children_per_cube();
  const double tau = rng.uniform();
  std::vector<DyadicCube> out;
  std::vector<std::pair<int, std::uint64_t>> stack;
  auto push_children = [&](int level, std::uint64_t code) {
    for (std::size_t k = fan; k-- > 0;) stack.emplace_back(level + 1, code * fan + k);
  };
  if (q.level < grid.depth()) push_children(q.level, grid.code(q));
  while (!stack.empty()) {
    const auto [level, code] = stack.back();
    stack.pop_back();
    const double u = rng.uniform();
    const double v = rng.uniform();
    if (!(mu.mass(level, code) > 0.0)) continue;
    if (u < tau) {
      out.push_back(grid.cube(level, code));
    } else if (v < 0.5 && level < grid.depth()) {
      push_children(level, code);
    }
  }
  return out;
}

SdResult sd_check(const CubeFunctional& a, const CellFunction& w, const CellMeasure& mu, double p, double s,
                  int trials, std::uint64_t seed) {
  require_same_grid(w, mu);
  if (!(p >= 1.0) || !(s > 1.0)) throw Error(ErrorKind::parameter, "sd_check needs p >= 1 and s > 1");
  if (trials < 1) throw Error(ErrorKind::parameter, "sd_check needs trials >= 1");
  const Grid& grid = mu.grid();
  const int depth = grid.depth();
  const int n = grid.dimension();
  const CellMeasure wmu = mu.weighted(w);
  SdResult out;

  auto record = [&](double lhs_p, double fraction, int deepest) {
    if (!(fraction > 0.0)) return;
    const double ratio = std::pow(lhs_p, 1.0 / p) / std::pow(fraction, 1.0 / s);
    out.estimate = std::max(out.estimate, ratio);
    if (deepest < depth) out.coarse_estimate = std::max(out.coarse_estimate, ratio);
    ++out.samples;
  };

  // every (ancestor, strict descendant) pair
  for (int l = 1; l <= depth; ++l) {
    for (std::uint64_t m = 0; m < grid.cubes_at(l); ++m) {
      const double mass = mu.mass(l, m);
      const double wm = wmu.mass(l, m);
      if (!(mass > 0.0)) continue;
      const double a_r = a.value(l, m);
      for (int k = 1; k <= l; ++k) {
        const int lq = l - k;
        const std::uint64_t mq = m >> (n * k);
        const double wq = wmu.mass(lq, mq);
        if (!(wq > 0.0)) continue;
        const double term = std::pow(a_r / a.value(lq, mq), p) * wm / wq;
        record(term, mass / mu.mass(lq, mq), l);
      }
    }
  }

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const DyadicCube q = random_cube(grid, mu, std::max(0, depth - 1), rng);
    const std::uint64_t code = grid.code(q);
    const double wq = wmu.mass(q.level, code);
    if (!(wq > 0.0)) continue;
    const auto family = random_antichain(mu, q, rng);
    if (family.empty()) continue;
    const double a_q = a.value(q.level, code);
    double lhs = 0.0;
    double covered = 0.0;
    int deepest = 0;
    for (const auto& qj : family) {
      const std::uint64_t cj = grid.code(qj);
      lhs += std::pow(a.value(qj.level, cj) / a_q, p) * wmu.mass(qj.level, cj) / wq;
      covered += mu.mass(qj.level, cj);
      deepest = std::max(deepest, qj.level);
    }
    record(lhs, covered / mu.mass(q.level, code), deepest);
  }
  out.holds = std::isfinite(out.estimate) && out.estimate <= 1.1 * out.coarse_estimate;
  return out;
}

Bijection candidate_bijection(const NormFamily& family) {
  if (const auto* f = std::get_if<Lp>(&family)) return Bijection::power(f->p);
  if (const auto* f = std::get_if<WeakLp>(&family)) return Bijection::power(f->p);
  if (const auto* f = std::get_if<Orlicz>(&family)) return Bijection::orlicz(f->phi);
  if (const auto* f = std::get_if<WeakOrlicz>(&family)) return Bijection::orlicz(f->phi);
  return Bijection::power(std::get<Variable>(family).p.p_plus());
}

AinftyProfile ainfty_char_profile(const LocalNormSpec& spec, const CellMeasure& mu, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::parameter, "profile needs trials >= 1");
  const Grid& grid = mu.grid();
  if (grid.depth() < 1) throw Error(ErrorKind::resolution, "profile needs depth >= 1");
  AinftyProfile out;
  out.candidate = candidate_bijection(spec.family());
  const auto& family = spec.family();
  if (std::holds_alternative<Lp>(family) || std::holds_alternative<Orlicz>(family)) {
    out.label = "characteristic-exact";
  } else if (std::holds_alternative<Variable>(family)) {
    out.label = "variable-modular";
  } else {
    out.label = "characteristic-restricted";
  }
  Rng rng(seed);
  std::vector<double> indicator(grid.cell_count(), 0.0);
  for (int t = 0; t < trials; ++t) {
    DyadicCube q;
    std::vector<DyadicCube> members;
    for (int attempt = 0; attempt < 1000 && members.empty(); ++attempt) {
      q = random_cube(grid, mu, grid.depth() - 1, rng);
      members = random_antichain(mu, q, rng);
    }
    if (members.empty()) throw Error(ErrorKind::degenerate_measure, "no nonempty antichain found");
    std::fill(indicator.begin(), indicator.end(), 0.0);
    double covered = 0.0;
    for (const auto& qj : members) {
      const CellRange r = grid.cells(qj);
      std::fill(indicator.begin() + r.first, indicator.begin() + r.last, 1.0);
      covered += cube_mass(mu, qj);
    }
    ProfileSample sample;
    sample.cube = q;
    sample.members = members.size();
    sample.fraction = covered / cube_mass(mu, q);
    sample.norm = local_norm(CellFunction(grid, indicator), q, spec);
    out.c_y = std::max(out.c_y, sample.norm / out.candidate.inverse(sample.fraction));
    out.samples.push_back(sample);
  }
  return out;
}

EmbeddingResult embedding_constant(const CellFunction& w, const CubeFunctional& y, const CellMeasure& mu,
                                   const std::vector<CellFunction>& test_functions, int min_level) {
  require_same_grid(w, mu);
  const Grid& grid = mu.grid();
  const CellMeasure wmu = mu.weighted(w);
  const auto wm = wmu.masses();
  const auto m = mu.masses();
  EmbeddingResult out;
  bool have = false;
  for (std::size_t i = 0; i < test_functions.size(); ++i) {
    const CellFunction& f = test_functions[i];
    require_same_grid(f, mu);
    const double bmo = bmo_norm(f, mu, min_level).value;
    if (!(bmo > 0.0)) {
      ++out.skipped;
      continue;
    }
    const CubeMax best = detail::cube_max(grid, grid.depth() - min_level, mu, [&](int l, std::uint64_t c) {
      const double y_value = y.value(l, c);
      if (!(y_value > 0.0)) throw Error(ErrorKind::functional, "Y vanishes on an admissible cube");
      const CellRange r = grid.cells(l, c);
      const double mass = mu.mass(l, c);
      const double avg = pairwise_sum(r.size(), [&](std::size_t k) { return f[r.first + k] * m[r.first + k]; }) / mass;
      const double integral = pairwise_sum(r.size(), [&](std::size_t k) { return std::abs(f[r.first + k] - avg) * wm[r.first + k]; });
      return integral / (y_value * bmo);
    });
    if (!have || best.value > out.value) {
      out.value = best.value;
      out.argmax = best.argmax;
      out.argmax_function = i;
      have = true;
    }
  }
  return out;
}

}  // namespace osclab
