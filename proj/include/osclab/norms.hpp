#pragma once

// Localized norms over a dyadic cube Q against a measure nu and a cube
// functional Y: L^p and weak L^p averages, Orlicz (Luxemburg) and weak
// Orlicz norms, and variable-exponent Lebesgue norms.
//
// Every norm of the zero function is 0.

#include <string>
#include <variant>
#include <vector>

#include "osclab/functional.hpp"
#include "osclab/grid.hpp"
#include "osclab/young.hpp"

namespace osclab {

/// p(.) with 1 <= p_minus <= p <= p_plus < inf on every cell.
class ExponentFunction {
 public:
  explicit ExponentFunction(CellFunction values);
  static ExponentFunction constant(const Grid& grid, double p);

  const Grid& grid() const { return values_.grid(); }
  const CellFunction& values() const { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }

  /// s * p(.); s * p_minus must stay >= 1.
  ExponentFunction scaled(double s) const;

 private:
  CellFunction values_;
  double p_minus_;
  double p_plus_;
};

struct Lp { double p; };
struct WeakLp { double p; };
struct Orlicz { YoungFunction phi; };
struct WeakOrlicz { YoungFunction phi; };
struct Variable { ExponentFunction p; };

using NormFamily = std::variant<Lp, WeakLp, Orlicz, WeakOrlicz, Variable>;

std::string family_name(const NormFamily& family);
/// Geometric constant K of the quasi-triangle inequality: 2 for the weak families.
double geometric_constant(const NormFamily& family);

class LocalNormSpec {
 public:
  /// Checks nu(Q) <= Y(Q) on every cube (the average property) unless
  /// `check_average_property` is false; throws a functional error otherwise.
  LocalNormSpec(NormFamily family, CellMeasure nu, CubeFunctional y, bool check_average_property = true);

  /// nu = mu and Y(Q) = mu(Q).
  static LocalNormSpec plain(NormFamily family, const CellMeasure& mu);

  const NormFamily& family() const { return family_; }
  const CellMeasure& measure() const { return nu_; }
  const CubeFunctional& functional() const { return y_; }
  double geom_K() const { return geometric_constant(family_); }
  std::string name() const { return family_name(family_); }

 private:
  NormFamily family_;
  CellMeasure nu_;
  CubeFunctional y_;
};

double lp_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);
double weak_lp_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);
double orlicz_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda);
double luxemburg_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);
double weak_orlicz_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);
double variable_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda);
double variable_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);

/// Norm in whichever family the spec carries.
double local_norm(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec);
/// The family's modular at lambda (for L^p: the p-average of |f|/lambda; for
/// the weak families: the distributional supremum).
double local_modular(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double lambda);

namespace detail {

/// |f - shift| * scale on the cells of Q with their nu-masses.
struct Gathered {
  std::vector<double> a;
  std::vector<double> m;
  std::vector<double> e;  // exponents, variable family only
  double y = 0.0;         // Y(Q)
  double nu = 0.0;        // nu(Q)
};

Gathered gather(const CellFunction& f, const DyadicCube& q, const LocalNormSpec& spec, double shift = 0.0,
                double scale = 1.0);
double evaluate(const NormFamily& family, const Gathered& g);
double modular(const NormFamily& family, const Gathered& g, double lambda);

}  // namespace detail

}  // namespace osclab
