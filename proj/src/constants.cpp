#include "osclab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "osclab/error.hpp"

namespace osclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) { return std::to_string(v); }

}  // namespace

void JNParams::validate() const {
  if (!(c1 > 1.0) || !(c2 > 1.0)) throw Error(ErrorKind::parameter, "John-Nirenberg constants must exceed 1");
}

Bijection Bijection::identity() {
  return {"identity", [](double t) { return t; }, [](double t) { return t; }};
}

Bijection Bijection::power(double s) {
  if (!(s > 0.0)) throw Error(ErrorKind::parameter, "power bijection needs s > 0");
  return {"power:" + num(s), [s](double t) { return std::pow(t, s); }, [s](double t) { return std::pow(t, 1.0 / s); }};
}

Bijection Bijection::orlicz(const YoungFunction& phi) {
  return {"orlicz:" + phi.name(),
          [phi](double u) { return u == 0.0 ? 0.0 : 1.0 / phi(1.0 / u); },
          [phi](double t) { return t == 0.0 ? 0.0 : 1.0 / phi.inverse(1.0 / t); }};
}

void Bijection::validate() const {
  if (!(std::abs(forward(0.0)) <= 1e-12) || !(std::abs(forward(1.0) - 1.0) <= 1e-12) ||
      !(std::abs(inverse(0.0)) <= 1e-12) || !(std::abs(inverse(1.0) - 1.0) <= 1e-12)) {
    throw Error(ErrorKind::parameter, name + ": endpoints must map 0 -> 0 and 1 -> 1");
  }
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const double u = inverse(t);
    if (!(u > prev)) throw Error(ErrorKind::parameter, name + ": inverse not increasing at t = " + num(t));
    if (!(std::abs(forward(u) - t) <= 1e-10)) throw Error(ErrorKind::parameter, name + ": round trip fails at t = " + num(t));
    prev = u;
  }
}

double theorem_objective(const Bijection& psi, double c_y, double k, double c_mu, double n_mu, double L) {
  if (!(L > 1.0)) return kInf;
  const double denom = 1.0 - c_y * k * psi.inverse(1.0 / L);
  if (!(denom > 0.0)) return kInf;
  return c_mu * std::exp2(n_mu) * L / denom;
}

TheoremConstant theorem_constant(const Bijection& psi, double c_y, double k, double c_mu, double n_mu) {
  if (!(c_y > 0.0) || !(k >= 1.0) || !(c_mu >= 1.0) || !(n_mu > 0.0)) {
    throw Error(ErrorKind::parameter, "theorem_constant needs C_Y > 0, K >= 1, c_mu >= 1, n_mu > 0");
  }
  const double a = c_y * k;
  double L_min = 1.0;
  if (a >= 1.0) {
    const double psi_at = psi.forward(1.0 / a);
    L_min = psi_at > 0.0 ? std::max(1.0, 1.0 / psi_at) : kInf;
  }
  if (!std::isfinite(L_min)) throw Error(ErrorKind::infeasible, "Psi(1/(C_Y K)) vanishes; no admissible L");
  auto g = [&](double x) {
    try {
      return theorem_objective(psi, c_y, k, c_mu, n_mu, std::exp(x));
    } catch (const Error&) {
      return kInf;  // Psi^{-1} out of range: treat as inadmissible
    }
  };

  // scan x = log L in small steps until the objective has grown for a long
  // stretch past the best point, then golden section around it
  const double x0 = std::log(L_min);
  const double x_cap = 690.0;
  constexpr double step = 1e-3;
  int best = -1;
  double best_value = kInf;
  for (int i = 1;; ++i) {
    const double x = x0 + i * step;
    if (x > x_cap || (best >= 0 && x > x0 + best * step + 12.0)) break;
    const double v = g(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best < 0) throw Error(ErrorKind::infeasible, "denominator never positive below L = e^690");
  double lo = x0 + (best - 1) * step;
  double hi = x0 + (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a1 = hi - inv_phi * (hi - lo);
  double b1 = lo + inv_phi * (hi - lo);
  double ga = g(a1);
  double gb = g(b1);
  for (int it = 0; it < 300 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    if (ga < gb) {
      hi = b1;
      b1 = a1;
      gb = ga;
      a1 = hi - inv_phi * (hi - lo);
      ga = g(a1);
    } else {
      lo = a1;
      a1 = b1;
      ga = gb;
      b1 = lo + inv_phi * (hi - lo);
      gb = g(b1);
    }
  }
  double x_best = x0 + best * step;
  for (double x : {a1, b1}) {
    if (g(x) < best_value) {
      best_value = g(x);
      x_best = x;
    }
  }
  return {best_value, std::exp(x_best), L_min};
}

double laplace_transform_deriv(const YoungFunction& phi, double s) {
  if (!(s > 0.0)) throw Error(ErrorKind::parameter, "Laplace transform needs s > 0");
  // in u = s t the kernel is e^{-u}: segments stay O(1) wide whatever s is,
  // which the adaptive Kronrod error test needs
  auto h = [&](double u) {
    const double d = phi.deriv(u / s);
    if (d == 0.0) return 0.0;
    if (!std::isfinite(d)) return kInf;
    return std::exp(std::log(d) - u) / s;
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  // breakpoints: u = s (t = 1, the kink of the log families), then doubling segments
  double a = 0.0;
  double width = std::min(1.0, s);
  for (int segment = 0; segment < 4000; ++segment) {
    double b = a + width;
    if (a < s && b > s) b = s;
    if (!std::isfinite(h(b))) return kInf;
    const double piece = gauss_kronrod<double, 15>::integrate(h, a, b, 15, 1e-12);
    if (!std::isfinite(piece)) return kInf;
    total += piece;
    const bool decaying = h(b) <= h(a) && b > 1.0;
    if (decaying && piece <= 1e-17 * total) {
      // growth bounds certify phi' <= C t^{[phi]_2 - 1}, so the tail converges;
      // otherwise probe further out for a late rise of phi'(t) e^{-st}
      if (phi.bounds() && std::isfinite(phi.bounds()->upper)) return total;
      for (double t = 2.0 * b / s; t < 1e300; t *= 2.0) {
        const double d = phi.deriv(t);
        if (!std::isfinite(d)) return kInf;
        const double u = s * t;
        if (d > 0.0 && std::isfinite(u) && !(std::exp(std::log(d) - u) / s * u <= 1e-17 * total)) return kInf;
      }
      return total;
    }
    if (b > 1e300) return kInf;
    a = b;
    if (segment >= 1) width *= 2.0;
  }
  return kInf;
}

LaplaceBound laplace_bound(const YoungFunction& phi, const JNParams& jn) {
  jn.validate();
  const double target = 1.0 / jn.c1;
  auto above = [&](double s) { return laplace_transform_deriv(phi, s) > target; };
  double s = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  if (above(s)) {
    lo = s;
    while (above(s)) {
      lo = s;
      s *= 2.0;
      if (s > 1e300) throw Error(ErrorKind::growth_too_fast, "Laplace transform of phi' stays above 1/c1: " + phi.name());
    }
    hi = s;
  } else {
    hi = s;
    while (!above(s)) {
      hi = s;
      s *= 0.5;
      if (s < 1e-300) throw Error(ErrorKind::parameter, "Laplace transform of phi' never exceeds 1/c1");
    }
    lo = s;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (above(mid)) lo = mid; else hi = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  const double s_star = 0.5 * (lo + hi);
  return {jn.c2 * s_star, s_star};
}

double orlicz_constant(const YoungFunction& phi, double c, double c_mu, double n_mu) {
  if (!phi.bounds()) throw Error(ErrorKind::parameter, phi.name() + " carries no growth bounds");
  const GrowthBounds b = *phi.bounds();
  if (!(b.lower > 0.0)) throw Error(ErrorKind::parameter, "[phi]_1 must be positive");
  if (!(c >= 1.0)) throw Error(ErrorKind::parameter, "submultiplicativity constant must be >= 1");
  return c_mu * std::exp2(n_mu) * phi(c * (1.0 + 1.0 / b.lower)) * (b.upper + 1.0);
}

double alt_orlicz_bound(double p, double alpha, double c_mu, double n_mu) {
  constexpr double e = std::numbers::e;
  const double l1 = std::log(e + 1.0);
  return c_mu * std::exp2(n_mu) * e * std::pow(l1, alpha * (p - 1.0)) *
         std::pow(std::log(e + 2.0 * std::pow(l1, alpha)), alpha) * (p + alpha + 1.0);
}

double variable_jn_constant(double c_n, double p_plus) {
  if (!(c_n > 0.0) || !(p_plus >= 1.0)) throw Error(ErrorKind::parameter, "variable_jn_constant needs C_n > 0, p+ >= 1");
  return std::log(2.0) / (2.0 * c_n * p_plus);
}

double variable_cn(double p_plus, double c_mu, double n_mu) {
  return theorem_constant(Bijection::power(p_plus), 1.0, 1.0, c_mu, n_mu).value / p_plus;
}

ChebyshevChain chebyshev_chain(const CellFunction& f, const ExponentFunction& p, const DyadicCube& q,
                               const CellMeasure& mu, double t, double r) {
  if (!(t > 0.0)) throw Error(ErrorKind::parameter, "Chebyshev chain needs t > 0");
  if (!(r >= 1.0)) throw Error(ErrorKind::parameter, "Chebyshev chain needs r >= 1");
  const double avg = cube_average(f, q, mu);
  const CellRange range = mu.grid().cells(q);
  std::vector<double> indicator(f.size(), 0.0);
  for (std::size_t c = range.first; c < range.last; ++c) indicator[c] = std::abs(f[c] - avg) > t ? 1.0 : 0.0;
  const auto spec = LocalNormSpec::plain(Variable{p}, mu);
  ChebyshevChain out;
  out.lhs = variable_norm(CellFunction(f.grid(), std::move(indicator)), q, spec);
  const auto spec_r = LocalNormSpec::plain(Variable{p.scaled(r)}, mu);
  const double norm_r = detail::evaluate(spec_r.family(), detail::gather(f, q, spec_r, avg));
  out.rhs = std::pow(t, -r) * std::pow(norm_r, r);
  return out;
}

}  // namespace osclab
