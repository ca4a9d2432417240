#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "osclab/error.hpp"
#include "osclab/grid.hpp"
#include "osclab/numeric.hpp"
#include "osclab/testfunctions.hpp"

using namespace osclab;

namespace {

DyadicCube cube1(int level, std::uint32_t i) { return DyadicCube{level, {i, 0, 0, 0}}; }

// Mass of a cube by scanning every cell and testing coordinates directly.
double brute_mass(const CellMeasure& mu, const DyadicCube& q) {
  const Grid& g = mu.grid();
  const int shift = g.depth() - q.level;
  double total = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto idx = g.cell_coords(c);
    bool inside = true;
    for (int a = 0; a < g.dimension(); ++a) inside = inside && (idx[a] >> shift) == q.index[a];
    if (inside) total += mu.masses()[c];
  }
  return total;
}

// Largest ancestor/descendant ratio over every pair, from brute-force masses.
double brute_doubling(const CellMeasure& mu) {
  const Grid& g = mu.grid();
  double c = 1.0;
  for (int l = 1; l <= g.depth(); ++l) {
    for (std::uint64_t m = 0; m < g.cubes_at(l); ++m) {
      const DyadicCube q = g.cube(l, m);
      const double mq = brute_mass(mu, q);
      for (int k = 1; k <= l; ++k) {
        DyadicCube anc{l - k, {}};
        for (int a = 0; a < g.dimension(); ++a) anc.index[a] = q.index[a] >> k;
        c = std::max(c, brute_mass(mu, anc) / (std::exp2(k * g.dimension()) * mq));
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("uniform left half has mass one half") {
  const Grid g(1, 6);
  const auto mu = CellMeasure::lebesgue(g);
  CHECK(cube_mass(mu, cube1(1, 0)) == 0.5);
}

TEST_CASE("cube masses match their children exactly") {
  const Grid g(2, 5);
  const auto mu = recursive_split_measure(g, 11, 5.0);
  for (int l = 0; l < g.depth(); ++l) {
    for (std::uint64_t m = 0; m < g.cubes_at(l); ++m) {
      double sum = 0.0;
      for (const auto& child : g.children(g.cube(l, m))) sum += cube_mass(mu, child);
      // tree sums are formed from the children in the same order
      CHECK(pairwise_sum(4, [&](std::size_t k) { return cube_mass(mu, g.children(g.cube(l, m))[k]); }) ==
            mu.mass(l, m));
      CHECK(std::abs(sum - mu.mass(l, m)) <= 1e-15 * mu.mass(l, m));
    }
  }
}

TEST_CASE("cube mass against a direct coordinate scan") {
  const Grid g(1, 2);
  const CellMeasure mu(g, {1, 2, 3, 4});
  CHECK(cube_mass(mu, cube1(1, 1)) == 7.0);
  const Grid g2(2, 3);
  const auto mu2 = recursive_split_measure(g2, 5, 3.0);
  for (int l = 0; l <= 3; ++l) {
    for (std::uint64_t m = 0; m < g2.cubes_at(l); ++m) {
      const auto q = g2.cube(l, m);
      CHECK(std::abs(cube_mass(mu2, q) - brute_mass(mu2, q)) <= 1e-14);
    }
  }
}

TEST_CASE("cube outside the grid is a domain error") {
  const Grid g(1, 3);
  const auto mu = CellMeasure::lebesgue(g);
  try {
    cube_mass(mu, cube1(2, 4));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK_THROWS_AS(cube_mass(mu, cube1(4, 0)), Error);
}

TEST_CASE("cube averages") {
  const Grid g(1, 2);
  const auto mu = CellMeasure::lebesgue(g);
  CHECK(cube_average(CellFunction::constant(g, 3.25), g.root(), mu) == 3.25);
  CHECK(cube_average(indicator(g, 0.5), g.root(), mu) == 0.5);
  CHECK(cube_average(CellFunction(g, {0, 1, 2, 3}), g.root(), mu) == 1.5);

  const CellMeasure holes(g, {1, 0, 1, 1});
  try {
    cube_average(CellFunction::constant(g, 1.0), cube1(2, 1), holes);
    FAIL("expected a degenerate-measure error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_measure);
  }
}

TEST_CASE("cube average is affine equivariant") {
  const Grid g(2, 4);
  const auto mu = recursive_split_measure(g, 3, 4.0);
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_step(g, 100 + trial);
    const double a = rng.uniform(-5, 5);
    const double b = rng.uniform(-5, 5);
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x = a * x + b;
    const DyadicCube q = g.cube(1, rng.below(4));
    const double lhs = cube_average(CellFunction(g, v), q, mu);
    const double rhs = a * cube_average(f, q, mu) + b;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("row-major and Morton orders are inverse permutations") {
  for (int n = 1; n <= 3; ++n) {
    const Grid g(n, 3);
    std::vector<char> seen(g.cell_count(), 0);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const std::size_t r = g.morton_to_row_major(c);
      CHECK(g.row_major_to_morton(r) == c);
      seen[r] = 1;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](char s) { return s == 1; }));
  }
  const Grid g(2, 1);
  // row-major (y slowest) cell (x=1, y=0) is entry 1 when axis 0 is the slow axis
  const auto f = CellFunction::from_row_major(g, std::vector<double>{10, 11, 12, 13});
  CHECK(f.to_row_major() == std::vector<double>{10, 11, 12, 13});
}

TEST_CASE("uniform measure is 1-doubling") {
  const Grid g(1, 8);
  const auto d = estimate_doubling(CellMeasure(g, std::vector<double>(g.cell_count(), 1.0)));
  CHECK(d.c == 1.0);
  CHECK(d.dimension == 1.0);
}

TEST_CASE("alternating masses: doubling constant from brute force") {
  const Grid g(1, 5);
  std::vector<double> m(g.cell_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = i % 2 == 0 ? 3.0 : 1.0;
  const CellMeasure mu(g, m);
  const double oracle = brute_doubling(mu);
  CHECK(std::abs(estimate_doubling(mu).c - oracle) <= 1e-14);
  // the light cell against its parent: 4 / (2 * 1)
  CHECK(oracle == 2.0);
}

TEST_CASE("recursive split measures: estimate equals brute force") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Grid g(2, 3);
    const auto mu = recursive_split_measure(g, seed, 6.0);
    CHECK(std::abs(estimate_doubling(mu).c - brute_doubling(mu)) <= 1e-12);
  }
}

TEST_CASE("power weight doubling constant is stable under refinement") {
  // x^{1/2} dx has doubling dimension 3/2: with n_mu = 1 the cells at the
  // origin push the ratio up by sqrt(2) per level, with n_mu = 3/2 it settles.
  auto c_at = [](int depth, std::optional<double> nmu) {
    const Grid g(1, depth);
    return estimate_doubling(CellMeasure::lebesgue(g).weighted(power_weight(g, 0.5)), nmu).c;
  };
  const double c10 = c_at(10, 1.5);
  const double c12 = c_at(12, 1.5);
  CHECK(std::isfinite(c10));
  CHECK(std::abs(c12 - c10) <= 0.05 * c10);
  CHECK(c_at(12, {}) > 1.9 * c_at(10, {}));
}

TEST_CASE("refinement never lowers the doubling estimate") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    double prev = 1.0;
    for (int depth = 1; depth <= 8; ++depth) {
      const double c = estimate_doubling(recursive_split_measure(Grid(1, depth), seed, 8.0)).c;
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("zero-mass cube inside a positive ancestor is non-doubling") {
  const Grid g(1, 2);
  try {
    estimate_doubling(CellMeasure(g, {1, 0, 1, 1}));
    FAIL("expected a non-doubling error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_doubling);
  }
}

TEST_CASE("disjoint family invariants") {
  const Grid g(1, 4);
  CHECK(is_disjoint_family(g, {g.root(), {cube1(1, 0), cube1(2, 2), cube1(3, 7)}}));
  CHECK_FALSE(is_disjoint_family(g, {g.root(), {cube1(1, 0), cube1(2, 1)}}));
  CHECK_FALSE(is_disjoint_family(g, {cube1(1, 0), {cube1(1, 0)}}));
}

TEST_CASE("subcube search on a uniform measure returns one half") {
  for (int n = 1; n <= 2; ++n) {
    const Grid g(n, n == 1 ? 8 : 4);
    const auto res = subcube_alpha(CellMeasure::lebesgue(g), g.root());
    if (n == 1) CHECK(res.alpha == 0.5);
    CHECK(res.min_fraction() >= res.bound - res.slack);
  }
}

TEST_CASE("subcube search on four equal cells") {
  const Grid g(1, 2);
  const CellMeasure mu(g, {1, 1, 1, 1});
  // chain of boxes: {1}, {1,2}, {0,1,2} with fractions 1/4, 1/2, 3/4
  CHECK(box_offset(4, 1) == 1);
  CHECK(box_offset(4, 2) == 1);
  CHECK(box_offset(4, 3) == 0);
  const auto res = subcube_alpha(mu, g.root());
  CHECK(res.alpha == 0.5);
  CHECK(res.box.side == 2);
  CHECK(res.box.lower[0] == 1);
}

TEST_CASE("subcube search agrees with box enumeration") {
  // heavy centre cell carrying 0.6 of the cube
  const Grid g(1, 2);
  const std::vector<double> m{0.4 / 3, 0.6, 0.4 / 3, 0.4 / 3};
  const auto mu = CellMeasure(g, m).with_estimated_doubling();
  const auto res = subcube_alpha(mu, g.root());
  double best = -1.0;
  for (std::uint32_t k = 1; k < 4; ++k) {
    const std::uint32_t off = box_offset(4, k);
    double frac = 0.0;
    for (std::uint32_t i = off; i < off + k; ++i) frac += m[i];
    if (best < 0 || std::abs(frac - 0.5) < std::abs(best - 0.5)) best = frac;
  }
  CHECK(std::abs(res.alpha - best) <= 1e-15);
  CHECK(res.min_fraction() >= 1.0 / (4.0 * mu.doubling()->c) - res.slack);
}

TEST_CASE("subcube bound holds on random bounded-ratio measures") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(2));
    const Grid g(n, n == 1 ? 7 : 4);
    const auto mu = recursive_split_measure(g, 1000 + trial, rng.uniform(1.0, 20.0)).with_estimated_doubling();
    const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.depth())));
    const auto q = g.cube(level, rng.below(g.cubes_at(level)));
    const auto res = subcube_alpha(mu, q);
    CHECK(res.min_fraction() >= res.bound - res.slack);
    CHECK(res.alpha > 0.0);
    CHECK(res.alpha < 1.0);
  }
}

TEST_CASE("single-cell cube has no proper sub-box") {
  const Grid g(1, 3);
  try {
    subcube_alpha(CellMeasure::lebesgue(g), cube1(3, 2));
    FAIL("expected a resolution error");
  } catch (const ResolutionError& e) {
    CHECK(e.kind() == ErrorKind::resolution);
  }
}

TEST_CASE("cell functions reject non-finite values and wrong sizes") {
  const Grid g(1, 2);
  CHECK_THROWS_AS(CellFunction(g, {1, 2, 3}), Error);
  CHECK_THROWS_AS(CellFunction(g, {1, 2, 3, NAN}), Error);
  CHECK_THROWS_AS(CellMeasure(g, {1, -1, 0, 0}), Error);
  CHECK_THROWS_AS(CellMeasure(g, {0, 0, 0, 0}), Error);
}
