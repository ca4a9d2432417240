#pragma once

// Explicit constants of the quantitative John-Nirenberg program: the
// optimized bootstrap constant, the Laplace-transform bound, the Orlicz
// constant and its log-variant, the variable-exponent constant and the
// Chebyshev chain.

#include <functional>
#include <string>

#include "osclab/grid.hpp"
#include "osclab/norms.hpp"
#include "osclab/young.hpp"

namespace osclab {

/// mu({|f - f_Q| > t}) <= c1 exp(-t / (c2 ||f||_BMO)) mu(Q).
struct JNParams {
  double c1 = 2.0;
  double c2 = 2.0;
  void validate() const;
};

/// Increasing bijection Psi of [0, 1] with its inverse.
struct Bijection {
  std::string name;
  std::function<double(double)> forward;
  std::function<double(double)> inverse;

  static Bijection identity();
  /// Psi^{-1}(t) = t^{1/s}, Psi(t) = t^s.
  static Bijection power(double s);
  /// Psi^{-1}(t) = 1 / phi^{-1}(1/t), Psi(u) = 1 / phi(1/u).
  static Bijection orlicz(const YoungFunction& phi);

  /// Round trip, monotonicity and endpoint checks on a grid; throws a
  /// parameter error naming the first failure.
  void validate() const;
};

struct TheoremConstant {
  double value = 0.0;
  double argmin_L = 0.0;
  double L_min = 0.0;  // left end of the admissible range
};

/// inf over L > max{1, 1/Psi(1/(C_Y K))} of c_mu 2^{n_mu} L / (1 - C_Y K Psi^{-1}(1/L)).
TheoremConstant theorem_constant(const Bijection& psi, double c_y, double k, double c_mu, double n_mu);

/// The objective above; +inf where the denominator is not positive.
double theorem_objective(const Bijection& psi, double c_y, double k, double c_mu, double n_mu, double L);

/// Integral of phi'(t) exp(-s t) over (0, inf); +inf when it diverges.
double laplace_transform_deriv(const YoungFunction& phi, double s);

struct LaplaceBound {
  double value = 0.0;   // c2 * s_star
  double s_star = 0.0;  // Laplace transform of phi' equals 1/c1 here
};
LaplaceBound laplace_bound(const YoungFunction& phi, const JNParams& jn);

/// c_mu 2^{n_mu} phi(c (1 + 1/[phi]_1)) ([phi]_2 + 1) with the function's own bounds.
double orlicz_constant(const YoungFunction& phi, double c, double c_mu, double n_mu);

/// The closed-form upper bound for the log-variant t^p log(e+t)^a:
/// c_mu 2^{n_mu} e log(e+1)^{a(p-1)} log(e + 2 log(1+e)^a)^a (p + a + 1).
double alt_orlicz_bound(double p, double alpha, double c_mu, double n_mu);

/// log 2 / (2 C_n p_plus).
double variable_jn_constant(double c_n, double p_plus);

/// C(n) such that theorem_constant for Psi^{-1}(t) = t^{1/p_plus} with
/// C_Y = K = 1 equals C(n) p_plus.
double variable_cn(double p_plus, double c_mu, double n_mu);

struct ChebyshevChain {
  double lhs = 0.0;  // || chi_{E_t} ||_{L^{p(.)}}
  double rhs = 0.0;  // t^{-r} || f - f_Q ||_{L^{r p(.)}}^r
};

/// Both sides against the normalized measure dmu / mu(Q); E_t = {|f - f_Q| > t}.
ChebyshevChain chebyshev_chain(const CellFunction& f, const ExponentFunction& p, const DyadicCube& q,
                               const CellMeasure& mu, double t, double r);

}  // namespace osclab
