#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"
#include "osclab/oscillation.hpp"
#include "osclab/testfunctions.hpp"

using namespace osclab;

namespace {

CellFunction normalized(const CellFunction& f, const CellMeasure& mu) {
  const double avg = cube_average(f, f.grid().root(), mu);
  const double bmo = bmo_norm(f, mu).value;
  std::vector<double> v(f.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = (f[c] - avg) / bmo;
  return CellFunction(f.grid(), v);
}

}  // namespace

TEST_CASE("oscillation of simple functions") {
  const Grid g(1, 2);
  const auto mu = CellMeasure::lebesgue(g);
  CHECK(oscillation(CellFunction::constant(g, 7), g.root(), mu) == 0.0);
  CHECK(oscillation(indicator(g, 0.5), g.root(), mu) == 0.5);
  CHECK(oscillation(indicator(g, 0.25), g.root(), mu) == 2 * 0.25 * 0.75);
  CHECK(oscillation(CellFunction(g, {0, 1, 2, 3}), g.root(), mu) == 1.0);
  CHECK_THROWS_AS(oscillation(CellFunction(g, {0, 1, 2, 3}), DyadicCube{2, {1}}, CellMeasure(g, {1, 0, 1, 1})),
                  Error);
}

TEST_CASE("dyadic BMO norm") {
  const Grid g(1, 6);
  const auto mu = CellMeasure::lebesgue(g);
  CHECK(bmo_norm(CellFunction::constant(g, 2), mu).value == 0.0);
  const auto half = bmo_norm(indicator(g, 0.5), mu);
  CHECK(half.value == 0.5);
  CHECK(half.argmax == g.root());

  auto log_bmo = [](int depth) {
    const Grid h(1, depth);
    return bmo_norm(log_reciprocal(h), CellMeasure::lebesgue(h)).value;
  };
  const double b14 = log_bmo(14);
  const double b16 = log_bmo(16);
  CHECK(std::isfinite(b14));
  CHECK(std::abs(b16 - b14) <= 0.02 * b14);
}

TEST_CASE("BMO vanishes exactly on cellwise constants") {
  const Grid g(2, 3);
  const auto mu = recursive_split_measure(g, 1, 3.0);
  CHECK(bmo_norm(CellFunction::constant(g, -1.5), mu, 0).value == 0.0);
  std::vector<double> v(g.cell_count(), 1.0);
  v[17] = 1.0 + 1e-9;
  CHECK(bmo_norm(CellFunction(g, v), mu, 0).value > 0.0);
}

TEST_CASE("oscillation is within a factor two of the best constant") {
  const Grid g(1, 5);
  const auto mu = recursive_split_measure(g, 6, 4.0);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_step(g, 60 + i);
    double best = INFINITY;
    for (double c : f.values()) {
      best = std::min(best, pairwise_sum(g.cell_count(), [&](std::size_t k) { return std::abs(f[k] - c) * mu.masses()[k]; }) /
                                mu.total());
    }
    const double osc = oscillation(f, g.root(), mu);
    CHECK(best <= osc * (1 + 1e-12));
    CHECK(osc <= 2 * best * (1 + 1e-12));
  }
}

TEST_CASE("truncation") {
  const Grid g(1, 5);
  const auto mu = CellMeasure::lebesgue(g);
  const auto f = random_step(g, 5);
  const auto same = truncate(f, -1e3, 1e3);
  CHECK(std::equal(same.values().begin(), same.values().end(), f.values().begin()));
  CHECK_THROWS_AS(truncate(f, 1, 1), Error);

  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_step(g, 200 + i);
    const double a = rng.uniform(-2, 2);
    const double b = a + rng.uniform(0.01, 3);
    const double osc = oscillation(h, g.root(), mu);
    CHECK(oscillation(truncate(h, a, b), g.root(), mu) <= 2 * osc + 1e-12);
    double widest = 0.0;
    for (double w = 1; w <= 128; w *= 2) widest = std::max(widest, oscillation(truncate(h, a - w, b + w), g.root(), mu));
    CHECK(widest >= osc - 1e-12);
  }
}

TEST_CASE("Calderon-Zygmund selection by hand") {
  const Grid g(1, 4);
  const auto mu = CellMeasure::lebesgue(g).with_estimated_doubling();
  std::vector<double> v(g.cell_count(), 0.0);
  for (int c = 0; c < 4; ++c) v[c] = 4.0;
  const CellFunction gfun(g, v);
  const auto cz = cz_decompose(gfun, g.root(), mu, 2.0);
  REQUIRE(cz.selected.members.size() == 1);
  CHECK(cz.selected.members[0] == DyadicCube{2, {0}});
  CHECK(cz.averages[0] == 4.0);
  const auto chk = check_cz(cz, gfun, mu);
  CHECK(chk.ok());
  CHECK(chk.worst_upper == 1.0);
  CHECK(chk.smallness_ratio == 0.5);

  CHECK(cz_decompose(CellFunction::constant(g, 1), g.root(), mu, 1.5).selected.members.empty());
  try {
    cz_decompose(gfun, g.root(), mu, 0.5);
    FAIL("expected stopping_precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::stopping_precondition);
  }
}

TEST_CASE("Calderon-Zygmund invariants on the normalized log function") {
  const Grid g(1, 12);
  const auto mu = CellMeasure::lebesgue(g).with_estimated_doubling();
  const auto h = normalized(log_reciprocal(g), mu);
  std::vector<double> a(h.size());
  for (std::size_t c = 0; c < a.size(); ++c) a[c] = std::abs(h[c]);
  const CellFunction abs_h(g, a);
  for (double L : {2.0, 4.0, 8.0}) {
    const auto cz = cz_decompose(h, g.root(), mu, L);
    const auto chk = check_cz(cz, h, mu);
    CHECK(chk.ok());
    CHECK(is_disjoint_family(g, cz.selected));
    double total = 0.0;
    for (const auto& q : cz.selected.members) total += cube_mass(mu, q);
    CHECK(total <= mu.total() / L);
  }
}

TEST_CASE("random Calderon-Zygmund decompositions") {
  Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const Grid g(1 + i % 2, i % 2 == 0 ? 8 : 4);
    const auto mu = recursive_split_measure(g, 80 + i, 6.0).with_estimated_doubling();
    const auto f = random_step(g, 90 + i);
    const double avg = pairwise_sum(g.cell_count(), [&](std::size_t c) { return std::abs(f[c]) * mu.masses()[c]; }) /
                       mu.total();
    const double L = avg * rng.uniform(1.0, 4.0);
    const auto cz = cz_decompose(f, g.root(), mu, L);
    CHECK(check_cz(cz, f, mu).ok());
  }
}

TEST_CASE("John-Nirenberg tail of the log function") {
  const Grid g(1, 14);
  const auto mu = CellMeasure::lebesgue(g);
  const auto f = log_reciprocal(g);
  const double a = cube_average(f, g.root(), mu);
  const double h = std::ldexp(1.0, -14);
  double prev = 1.0;
  for (double t = 0.0; t <= 6.0; t += 0.25) {
    // |log(1/x) - a| > t  <=>  x < e^{-a-t}  or  x > e^{t-a}
    const double oracle = std::min(1.0, std::exp(-a - t)) + std::max(0.0, 1.0 - std::exp(t - a));
    const double tail = jn_tail(f, g.root(), mu, t);
    CHECK(std::abs(tail - std::min(1.0, oracle)) <= 2 * h);
    CHECK(tail <= prev);
    prev = tail;
  }

  // exponential decay fitted on [bmo, last t with tail > 10 / cells]
  const double t0 = bmo_norm(f, mu).value;
  std::vector<double> ts, ls;
  for (double t = t0; jn_tail(f, g.root(), mu, t) > 10.0 / g.cell_count(); t += 0.1) {
    ts.push_back(t);
    ls.push_back(std::log(jn_tail(f, g.root(), mu, t)));
  }
  REQUIRE(ts.size() >= 3);
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) mt += ts[i], ml += ls[i];
  mt /= ts.size();
  ml /= ts.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) num += (ts[i] - mt) * (ls[i] - ml), den += (ts[i] - mt) * (ts[i] - mt);
  CHECK(-num / den > 0.0);

  const Grid s(1, 2);
  CHECK(jn_tail(CellFunction(s, {0, 0, 0, 4}), s.root(), CellMeasure::lebesgue(s), 0.0) == 1.0);
  CHECK(jn_tail(CellFunction(s, {0, 2, 1, 1}), s.root(), CellMeasure::lebesgue(s), 0.0) == 0.5);
}

TEST_CASE("sparse families") {
  const Grid g(1, 6);
  const auto mu = CellMeasure::lebesgue(g);
  const auto flat = sparse_dominate(CellFunction::constant(g, 3), g.root(), mu);
  CHECK(flat.members.size() == 1);
  CHECK(flat.c_dom == 0.0);
  CHECK(flat.major_mass[0] == mu.total());

  const auto half = sparse_dominate(indicator(g, 0.5), g.root(), mu);
  CHECK(half.members.size() == 1);
  CHECK(half.major_mass[0] == mu.total());
  // |chi - 1/2| = 1/2 everywhere against an oscillation of 1/2
  CHECK(half.c_dom == 1.0);

  auto build = [](int depth) {
    const Grid h(1, depth);
    const auto leb = CellMeasure::lebesgue(h);
    return sparse_dominate(log_reciprocal(h), h.root(), leb);
  };
  const auto s14 = build(14);
  const auto s16 = build(16);
  for (const auto* s : {&s14, &s16}) {
    CHECK_FALSE(s->truncated);
    for (std::size_t i = 0; i < s->members.size(); ++i) CHECK(s->member_mass[i] <= 2 * s->major_mass[i]);
    // the major sets partition the root
    double total = 0.0;
    for (double m : s->major_mass) total += m;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
  CHECK(std::isfinite(s14.c_dom));
  CHECK(std::abs(s16.c_dom - s14.c_dom) <= 0.1 * s14.c_dom);
}

TEST_CASE("sparse families with other stopping factors") {
  const Grid g(2, 5);
  const auto mu = recursive_split_measure(g, 33, 3.0);
  for (double lambda : {1.5, 3.0, 8.0}) {
    const auto s = sparse_dominate(random_step(g, 77), g.root(), mu, lambda);
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      CHECK(s.member_mass[i] <= lambda / (lambda - 1) * s.major_mass[i] * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(sparse_dominate(random_step(g, 77), g.root(), mu, 1.0), Error);
}

TEST_CASE("localized oscillation supremum") {
  const Grid g(1, 8);
  const auto mu = CellMeasure::lebesgue(g);
  const auto chi = indicator(g, 0.5);
  const auto x1 = sup_localized_oscillation(chi, LocalNormSpec::plain(Lp{1}, mu), mu);
  CHECK(std::abs(x1.value - 1.0) <= 1e-12);
  CHECK(x1.argmax == g.root());

  const auto f = random_step(g, 3);
  const double top = std::abs(*std::max_element(f.values().begin(), f.values().end(),
                                                [](double a, double b) { return std::abs(a) < std::abs(b); }));
  const auto xb = sup_localized_oscillation(f, LocalNormSpec::plain(Lp{3}, mu), mu);
  CHECK(xb.value <= 2 * top / xb.bmo);

  const Grid h(1, 12);
  const auto leb = CellMeasure::lebesgue(h);
  const auto lf = log_reciprocal(h);
  for (double p : {1.0, 2.0, 4.0}) {
    const auto x = sup_localized_oscillation(lf, LocalNormSpec::plain(Lp{p}, leb), leb);
    CHECK(x.value <= 1.0 * 2.0 * std::exp(1.0) * (p + 1));
  }
}
