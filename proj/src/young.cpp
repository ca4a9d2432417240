#include "osclab/young.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numbers>
#include <vector>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"

namespace osclab {

namespace {

constexpr double kInverseCap = 1e12;

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_axioms(const std::string& name, const YoungFunction::Map& eval) {
  const double at0 = eval(0.0);
  const double at1 = eval(1.0);
  if (!(std::abs(at0) <= 1e-12)) {
    throw Error(ErrorKind::malformed_young, name + ": phi(0) = " + fmt(at0) + ", expected 0");
  }
  if (!(std::abs(at1 - 1.0) <= 1e-12)) {
    throw Error(ErrorKind::malformed_young, name + ": phi(1) = " + fmt(at1) + ", expected 1");
  }
  // Monotonicity and convexity on uniform grids at several scales: slopes of
  // consecutive chords must be positive and nondecreasing.
  for (double scale : {1e-3, 1e-1, 1.0, 10.0, 1e3}) {
    constexpr int kPoints = 128;
    const double h = scale / 64.0;
    double prev_value = eval(0.0);
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kPoints; ++k) {
      const double value = eval(k * h);
      if (!std::isfinite(value)) break;
      const double slope = (value - prev_value) / h;
      if (!(value > prev_value)) {
        throw Error(ErrorKind::malformed_young, name + ": not strictly increasing near t = " + fmt(k * h));
      }
      if (slope < prev_slope - 1e-9 * std::max(1.0, std::abs(prev_slope))) {
        throw Error(ErrorKind::malformed_young, name + ": not convex near t = " + fmt(k * h));
      }
      prev_value = value;
      prev_slope = slope;
    }
  }
}

void require_exponent(double p, double alpha) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::parameter, "Young exponent p must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::parameter, "Young log exponent alpha must be >= 0");
  }
}

}  // namespace

YoungFunction::YoungFunction(std::string name, Map eval, Map deriv, double submult_c, Map inverse,
                             std::optional<GrowthBounds> bounds)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      submult_c_(submult_c),
      inverse_(std::move(inverse)),
      bounds_(bounds) {
  if (!eval_) throw Error(ErrorKind::malformed_young, name_ + ": missing evaluation map");
  if (!(submult_c_ >= 1.0)) throw Error(ErrorKind::malformed_young, name_ + ": submultiplicativity constant below 1");
  check_axioms(name_, eval_);
}

double YoungFunction::deriv(double t) const {
  if (deriv_) return deriv_(t);
  const double h = kFiniteDifferenceStep * std::max(1.0, t);
  if (t < h) return (eval_(t + h) - eval_(t)) / h;
  return (eval_(t + h) - eval_(t - h)) / (2.0 * h);
}

double YoungFunction::inverse(double y) const {
  if (inverse_) return inverse_(y);
  return young_inverse(*this, y);
}

YoungFunction YoungFunction::power(double p) {
  require_exponent(p, 0.0);
  return YoungFunction(
      "power:" + fmt(p), [p](double t) { return std::pow(t, p); },
      [p](double t) { return p == 1.0 ? 1.0 : p * std::pow(t, p - 1.0); }, 1.0,
      [p](double y) {
        if (y < 0.0) throw Error(ErrorKind::domain, "inverse of a negative value");
        return std::pow(y, 1.0 / p);
      },
      GrowthBounds{p, p, true});
}

YoungFunction YoungFunction::plog(double p, double alpha) {
  require_exponent(p, alpha);
  auto eval = [p, alpha](double t) {
    if (t <= 1.0) return std::pow(t, p);
    return std::pow(t, p) * std::pow(1.0 + std::log(t), alpha);
  };
  auto deriv = [p, alpha](double t) {
    const double tp1 = p == 1.0 ? 1.0 : std::pow(t, p - 1.0);
    if (t <= 1.0) return p * tp1;
    const double l = 1.0 + std::log(t);
    return p * tp1 * std::pow(l, alpha) + alpha * tp1 * std::pow(l, alpha - 1.0);
  };
  return YoungFunction("plog:" + fmt(p) + ":" + fmt(alpha), eval, deriv, 1.0, {},
                       GrowthBounds{p, p + alpha, true});
}

YoungFunction YoungFunction::plog_alt(double p, double alpha) {
  require_exponent(p, alpha);
  constexpr double e = std::numbers::e;
  const double k = std::pow(std::log(e + 1.0), -alpha);
  auto eval = [p, alpha, k](double t) { return k * std::pow(t, p) * std::pow(std::log(e + t), alpha); };
  auto deriv = [p, alpha, k](double t) {
    const double l = std::log(e + t);
    const double tp1 = p == 1.0 ? 1.0 : std::pow(t, p - 1.0);
    return k * (p * tp1 * std::pow(l, alpha) + alpha * tp1 * t * std::pow(l, alpha - 1.0) / (e + t));
  };
  // t phi'/phi = p + alpha g(t), g(t) = t / ((e+t) log(e+t)); g -> 0 at infinity,
  // so the infimum is p and the supremum is p + alpha max g.
  auto g = [](double t) { return t / ((e + t) * std::log(e + t)); };
  double best_t = 1.0;
  double best = g(1.0);
  for (int i = 0; i <= 4000; ++i) {
    const double t = std::pow(10.0, 12.0 * i / 4000.0);
    if (g(t) > best) {
      best = g(t);
      best_t = t;
    }
  }
  double lo = std::log(std::max(1.0, best_t / 1.01));
  double hi = std::log(best_t * 1.01);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double a = hi - inv_phi * (hi - lo);
    const double b = lo + inv_phi * (hi - lo);
    if (g(std::exp(a)) < g(std::exp(b))) lo = a; else hi = b;
  }
  best = std::max(best, g(std::exp(0.5 * (lo + hi))));
  return YoungFunction("plog-alt:" + fmt(p) + ":" + fmt(alpha), eval, deriv,
                       std::pow(std::log(e + 1.0), alpha), {},
                       GrowthBounds{p, p + alpha * best, false});
}

double young_inverse(const YoungFunction& phi, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw Error(ErrorKind::domain, "young_inverse needs a finite y >= 0");
  if (y == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  if (phi(1.0) < y) {
    while (phi(hi) < y) {
      lo = hi;
      hi *= 2.0;
      if (hi > kInverseCap) {
        if (phi(kInverseCap) < y) {
          throw Error(ErrorKind::overflow_range, "phi(1e12) < " + fmt(y) + " in " + phi.name());
        }
        hi = kInverseCap;
        break;
      }
    }
  } else {
    lo = 0.5;
    while (phi(lo) > y && lo > 0.0) {
      hi = lo;
      lo *= 0.5;
    }
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) < y) lo = mid; else hi = mid;
  }
  return std::abs(phi(lo) - y) <= std::abs(phi(hi) - y) ? lo : hi;
}

GrowthBounds growth_bounds(const YoungFunction& phi, double t_max, int samples) {
  if (!(t_max > 1.0)) throw Error(ErrorKind::parameter, "growth_bounds needs t_max > 1");
  if (samples < 100) throw Error(ErrorKind::parameter, "growth_bounds needs at least 100 samples");
  GrowthBounds out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), false};
  const double log_max = std::log(t_max);
  int used = 0;
  for (int i = 1; i <= samples; ++i) {
    const double t = std::exp(log_max * i / samples);
    const double value = phi(t);
    if (!(value > 0.0)) {
      throw Error(ErrorKind::malformed_young, phi.name() + ": phi(" + fmt(t) + ") = 0 for t > 1");
    }
    // past the overflow point of phi or phi' the ratio is not representable
    const double d = phi.deriv(t);
    if (!std::isfinite(value) || !std::isfinite(d)) continue;
    const double ratio = t * (d / value);
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
    ++used;
  }
  if (used == 0) throw Error(ErrorKind::overflow_range, phi.name() + ": phi overflows on every sample of (1, t_max]");
  return out;
}

SubmultCheck check_submultiplicative(const YoungFunction& phi, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::parameter, "check_submultiplicative needs trials >= 1");
  Rng rng(seed);
  SubmultCheck out{true, 0.0};
  for (int i = 0; i < trials; ++i) {
    const double s = rng.log_uniform(1e-3, 1e6);
    const double t = rng.log_uniform(1e-3, 1e6);
    const double denom = phi(s) * phi(t);
    const double ratio = phi(s * t) / denom;
    if (!std::isfinite(ratio)) continue;
    out.worst_c = std::max(out.worst_c, ratio);
  }
  // rounding slack only; a genuine violation exceeds it by orders of magnitude
  out.holds = out.worst_c <= phi.submult_c() * (1.0 + 1e-12);
  return out;
}

YoungFunction parse_young(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = text.find(':');
    parts.push_back(text.substr(0, colon));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  auto number = [&](std::size_t i) {
    double v = 0.0;
    const auto s = parts[i];
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw Error(ErrorKind::parameter, "bad number '" + std::string(s) + "' in Young function spec");
    }
    return v;
  };
  const auto& kind = parts[0];
  if (kind == "power" && parts.size() == 2) return YoungFunction::power(number(1));
  if (kind == "plog" && parts.size() == 3) return YoungFunction::plog(number(1), number(2));
  if (kind == "plog-alt" && parts.size() == 3) return YoungFunction::plog_alt(number(1), number(2));
  throw Error(ErrorKind::parameter,
              "unknown Young function '" + std::string(kind) + "' (expected power:p, plog:p:a, plog-alt:p:a)");
}

}  // namespace osclab
