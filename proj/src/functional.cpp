#include "osclab/functional.hpp"

#include <cmath>

#include "osclab/error.hpp"

namespace osclab {

namespace {

std::string fmt_r(double r) {
  std::string s = std::to_string(r);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

CubeFunctional CubeFunctional::measure(const CellMeasure& mu) {
  CubeFunctional y(Kind::measure, mu.grid(), "measure");
  y.primary_ = std::make_shared<const CellMeasure>(mu);
  return y;
}

CubeFunctional CubeFunctional::weight_mass(const CellFunction& w, const CellMeasure& mu) {
  CubeFunctional y(Kind::weight_mass, mu.grid(), "weight");
  y.primary_ = std::make_shared<const CellMeasure>(mu.weighted(w));
  return y;
}

CubeFunctional CubeFunctional::wr(const CellFunction& w, const CellMeasure& mu, double r) {
  if (!(r > 1.0) || !std::isfinite(r)) throw Error(ErrorKind::parameter, "w_r needs a finite r > 1");
  std::vector<double> wr_values(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) throw Error(ErrorKind::parameter, "weights must be nonnegative");
    wr_values[i] = std::pow(w[i], r);
  }
  CubeFunctional y(Kind::wr, mu.grid(), "wr:" + fmt_r(r));
  y.r_ = r;
  y.r_prime_ = r / (r - 1.0);
  y.primary_ = std::make_shared<const CellMeasure>(mu);
  y.secondary_ = std::make_shared<const CellMeasure>(mu.weighted(CellFunction(w.grid(), std::move(wr_values))));
  return y;
}

CubeFunctional CubeFunctional::table(const Grid& grid, std::vector<std::vector<double>> values, std::string name) {
  if (static_cast<int>(values.size()) != grid.depth() + 1) {
    throw Error(ErrorKind::functional, "functional table needs one row per level");
  }
  for (int l = 0; l <= grid.depth(); ++l) {
    if (values[l].size() != grid.cubes_at(l)) {
      throw Error(ErrorKind::functional, "functional table row " + std::to_string(l) + " has the wrong length");
    }
  }
  CubeFunctional y(Kind::table, grid, std::move(name));
  y.table_ = std::make_shared<const std::vector<std::vector<double>>>(std::move(values));
  return y;
}

CubeFunctional CubeFunctional::from_function(const Grid& grid, const std::function<double(const DyadicCube&)>& fn,
                                             std::string name) {
  std::vector<std::vector<double>> values(grid.depth() + 1);
  for (int l = 0; l <= grid.depth(); ++l) {
    values[l].resize(grid.cubes_at(l));
    for (std::uint64_t m = 0; m < values[l].size(); ++m) values[l][m] = fn(grid.cube(l, m));
  }
  return table(grid, std::move(values), std::move(name));
}

double CubeFunctional::value(int level, std::uint64_t code) const {
  switch (kind_) {
    case Kind::measure:
    case Kind::weight_mass:
      return primary_->mass(level, code);
    case Kind::wr: {
      const double m = primary_->mass(level, code);
      const double s = secondary_->mass(level, code);
      return std::pow(m, 1.0 / r_prime_) * std::pow(s, 1.0 / r_);
    }
    case Kind::table:
      return (*table_)[level][code];
  }
  return 0.0;
}

}  // namespace osclab
