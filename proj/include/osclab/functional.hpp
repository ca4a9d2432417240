#pragma once

// Cube functionals Y: cubes -> (0, inf) used to normalize local averages.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "osclab/grid.hpp"

namespace osclab {

class CubeFunctional {
 public:
  enum class Kind { measure, weight_mass, wr, table };

  /// Y(Q) = mu(Q).
  static CubeFunctional measure(const CellMeasure& mu);
  /// Y(Q) = w(Q) = integral of w over Q against mu.
  static CubeFunctional weight_mass(const CellFunction& w, const CellMeasure& mu);
  /// Y(Q) = w_r(Q) = mu(Q)^{1/r'} (integral of w^r over Q against mu)^{1/r}, r > 1.
  static CubeFunctional wr(const CellFunction& w, const CellMeasure& mu, double r);
  /// Explicit per-level table: values[l][code].
  static CubeFunctional table(const Grid& grid, std::vector<std::vector<double>> values, std::string name);
  static CubeFunctional from_function(const Grid& grid, const std::function<double(const DyadicCube&)>& y,
                                      std::string name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Grid& grid() const { return grid_; }
  double r() const { return r_; }
  double r_prime() const { return r_prime_; }

  double value(int level, std::uint64_t code) const;
  double value(const DyadicCube& cube) const { return value(cube.level, grid_.code(cube)); }

 private:
  CubeFunctional(Kind kind, Grid grid, std::string name) : kind_(kind), grid_(std::move(grid)), name_(std::move(name)) {}

  Kind kind_;
  Grid grid_;
  std::string name_;
  double r_ = 0.0;
  double r_prime_ = 0.0;
  std::shared_ptr<const CellMeasure> primary_;    // mu, or w dmu
  std::shared_ptr<const CellMeasure> secondary_;  // w^r dmu for wr
  std::shared_ptr<const std::vector<std::vector<double>>> table_;
};

}  // namespace osclab
