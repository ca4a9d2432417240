#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"
#include "osclab/young.hpp"

using namespace osclab;

TEST_CASE("constructor enforces the normalization") {
  CHECK_THROWS_AS(YoungFunction("bad", [](double t) { return 2 * t; }, {}, 1.0), Error);
  CHECK_THROWS_AS(YoungFunction("bad", [](double t) { return t + 1e-9; }, {}, 1.0), Error);
  try {
    YoungFunction("concave", [](double t) { return std::sqrt(t); }, {}, 1.0);
    FAIL("expected malformed_young");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::malformed_young);
  }
  CHECK_NOTHROW(YoungFunction("square", [](double t) { return t * t; }, {}, 1.0));
}

TEST_CASE("inverse of simple values") {
  CHECK(std::abs(young_inverse(YoungFunction::power(2), 4.0) - 2.0) <= 1e-10);
  CHECK(young_inverse(YoungFunction::power(3), 0.0) == 0.0);
  for (const auto& phi : {YoungFunction::power(1.5), YoungFunction::plog(2, 1), YoungFunction::plog_alt(2, 1)}) {
    CHECK(std::abs(young_inverse(phi, 1.0) - 1.0) <= 1e-10);
  }
}

TEST_CASE("plog inverse agrees with a grid scan") {
  const auto phi = YoungFunction::plog(1, 1);
  const double y = 2 * std::numbers::e;
  const double t = young_inverse(phi, y);
  // scan [1, 4] on a fine grid for the sign change of t(1 + log t) - y
  double lo = 1.0;
  const double step = 1e-5;
  while ((lo + step) * (1 + std::log(lo + step)) < y) lo += step;
  double hi = lo + step;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * (1 + std::log(mid)) < y ? lo : hi) = mid;
  }
  CHECK(std::abs(t - lo) <= 1e-8);
  CHECK(std::abs(phi(t) - y) <= 1e-10 * y);
}

TEST_CASE("inverse beyond the bracketing cap overflows") {
  try {
    young_inverse(YoungFunction::power(1), 1e13);
    FAIL("expected overflow_range");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::overflow_range);
  }
}

TEST_CASE("inverse composed with eval is the identity on a log grid") {
  for (const auto& phi : {YoungFunction::power(2.5), YoungFunction::plog(2, 1), YoungFunction::plog_alt(2, 1)}) {
    for (double lt = -6; lt <= 9; lt += 0.25) {
      const double t = std::pow(10.0, lt);
      const double y = phi(t);
      if (!(y < 1e300)) continue;
      CHECK(close_rel(young_inverse(phi, y), t, 1e-8));
    }
  }
}

TEST_CASE("growth bounds of powers are exact") {
  const auto b = growth_bounds(YoungFunction::power(3), 1e6, 200);
  CHECK(std::abs(b.lower - 3) <= 1e-12);
  CHECK(std::abs(b.upper - 3) <= 1e-12);
  CHECK_FALSE(b.exact);
  CHECK(YoungFunction::power(3).bounds()->exact);
}

TEST_CASE("growth bounds of plog approach (p, p + alpha)") {
  const auto phi = YoungFunction::plog(2, 1);
  const auto b = growth_bounds(phi, 1e9, 25000);
  // t phi'/phi = 2 + 1/(1 + log t): the sup is approached at t -> 1+
  CHECK(std::abs(b.upper - 3) <= 1e-3);
  CHECK(b.lower >= 2);
  // at t = 1e9 the ratio is still 2 + 1/(1 + 9 log 10)
  CHECK(std::abs(b.lower - (2 + 1 / (1 + 9 * std::log(10.0)))) <= 1e-6);
  CHECK(phi.bounds()->lower == 2);
  CHECK(phi.bounds()->upper == 3);
}

TEST_CASE("alternative plog bounds agree with a dense grid") {
  const auto phi = YoungFunction::plog_alt(2, 1);
  const auto b = growth_bounds(phi, 1e9, 400);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 1; i <= 200000; ++i) {
    const double t = std::pow(1e9, i / 200000.0);
    const double r = 2 + t / ((std::numbers::e + t) * std::log(std::numbers::e + t));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(std::abs(b.lower - lo) <= 1e-3);
  CHECK(std::abs(b.upper - hi) <= 1e-3);
  CHECK(std::isfinite(b.upper));
  CHECK_FALSE(phi.bounds()->exact);
  CHECK(phi.bounds()->upper >= hi - 1e-9);
}

TEST_CASE("analytic derivatives match finite differences") {
  for (const auto& phi : {YoungFunction::power(2.5), YoungFunction::plog(2, 1.5), YoungFunction::plog_alt(1.5, 2)}) {
    REQUIRE(phi.has_analytic_deriv());
    for (double t : {0.01, 0.3, 0.9, 1.1, 2.0, 10.0, 1e3}) {
      const double h = 1e-6 * t;
      const double fd = (phi(t + h) - phi(t - h)) / (2 * h);
      CHECK(close_rel(phi.deriv(t), fd, 1e-6));
    }
  }
}

TEST_CASE("submultiplicativity") {
  const auto pw = check_submultiplicative(YoungFunction::power(2), 10000);
  CHECK(pw.holds);
  CHECK(std::abs(pw.worst_c - 1) <= 1e-12);

  const auto pl = check_submultiplicative(YoungFunction::plog(2, 1), 10000);
  CHECK(pl.holds);
  CHECK(pl.worst_c <= 1 + 1e-12);

  const auto alt = YoungFunction::plog_alt(2, 1);
  const auto al = check_submultiplicative(alt, 10000);
  CHECK(al.holds);
  CHECK(al.worst_c > 1);
  CHECK(al.worst_c <= alt.submult_c() * (1 + 1e-12));
}

TEST_CASE("parsing young function names") {
  CHECK(parse_young("power:3")(2.0) == 8.0);
  CHECK(std::abs(parse_young("plog:1:1")(std::numbers::e) - 2 * std::numbers::e) <= 1e-12);
  CHECK(parse_young("plog-alt:2:1").name().find("plog-alt") == 0);
  CHECK_THROWS_AS(parse_young("power"), Error);
  CHECK_THROWS_AS(parse_young("power:0.5"), Error);
  CHECK_THROWS_AS(parse_young("cubic:3"), Error);
}
