#pragma once

// Young functions: convex phi with phi(0) = 0, phi(1) = 1, plus the
// quasi-submultiplicativity constant c with phi(st) <= c phi(s) phi(t).
//
// Built-in families:
//   power:p        t^p
//   plog:p:a       t^p (1 + log+ t)^a
//   plog-alt:p:a   log(e+1)^-a t^p log(e+t)^a

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace osclab {

/// Best constants with b1 phi(t) <= t phi'(t) <= b2 phi(t) for t > 1.
struct GrowthBounds {
  double lower = 0.0;  // [phi]_1
  double upper = 0.0;  // [phi]_2
  bool exact = false;  // analytic values rather than sampled estimates
};

class YoungFunction {
 public:
  using Map = std::function<double(double)>;

  /// An empty `deriv` selects a centred finite difference with relative step
  /// kFiniteDifferenceStep. Throws malformed_young when the axioms fail on
  /// the sampled check grid.
  YoungFunction(std::string name, Map eval, Map deriv, double submult_c,
                Map inverse = {}, std::optional<GrowthBounds> bounds = {});

  static YoungFunction power(double p);
  static YoungFunction plog(double p, double alpha);
  static YoungFunction plog_alt(double p, double alpha);

  static constexpr double kFiniteDifferenceStep = 1e-6;

  double operator()(double t) const { return eval_(t); }
  double eval(double t) const { return eval_(t); }
  double deriv(double t) const;
  bool has_analytic_deriv() const { return static_cast<bool>(deriv_); }
  double submult_c() const { return submult_c_; }
  const std::string& name() const { return name_; }

  /// phi^{-1}(y); analytic when the family provides one, else young_inverse.
  double inverse(double y) const;
  bool has_analytic_inverse() const { return static_cast<bool>(inverse_); }

  const std::optional<GrowthBounds>& bounds() const { return bounds_; }

 private:
  std::string name_;
  Map eval_;
  Map deriv_;
  double submult_c_;
  Map inverse_;
  std::optional<GrowthBounds> bounds_;
};

/// t with |phi(t) - y| <= 1e-10 max(1, y), by bracketing and bisection.
/// Throws overflow_range when phi(1e12) < y.
double young_inverse(const YoungFunction& phi, double y);

/// Sampled inf and sup of t phi'(t) / phi(t) over `samples` log-spaced points
/// of (1, t_max]. Samples where phi or phi' overflows are skipped; throws
/// overflow_range when none is left. The result is flagged inexact.
GrowthBounds growth_bounds(const YoungFunction& phi, double t_max, int samples);

struct SubmultCheck {
  bool holds = false;
  double worst_c = 0.0;  // max observed phi(st) / (phi(s) phi(t))
};

/// Pairs (s, t) log-uniform in [1e-3, 1e6]^2.
SubmultCheck check_submultiplicative(const YoungFunction& phi, int trials, std::uint64_t seed = 1);

/// "power:p", "plog:p:a" or "plog-alt:p:a".
YoungFunction parse_young(std::string_view text);

/// log+ t = max(log t, 0).
inline double log_plus(double t) { return t > 1.0 ? std::log(t) : 0.0; }

}  // namespace osclab
