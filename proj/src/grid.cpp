#include "osclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "osclab/error.hpp"
#include "osclab/numeric.hpp"

namespace osclab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::degenerate_measure: return "degenerate measure";
    case ErrorKind::non_doubling: return "non-doubling measure";
    case ErrorKind::resolution: return "resolution too coarse";
    case ErrorKind::overflow_range: return "overflow range";
    case ErrorKind::malformed_young: return "malformed Young function";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::functional: return "functional error";
    case ErrorKind::stopping_precondition: return "stopping precondition";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::growth_too_fast: return "growth too fast";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::parse: return "parse error";
  }
  return "error";
}

std::string to_string(const DyadicCube& cube, int dimension) {
  std::ostringstream out;
  out << cube.level << ':';
  for (int a = 0; a < dimension; ++a) {
    if (a) out << ',';
    out << cube.index[a];
  }
  return out.str();
}

namespace {

// Bit b of axis a lands at position b * n + (n - 1 - a): axis 0 is the most
// significant within each group, so for n = 1 the code equals the index.
std::uint64_t interleave(const std::array<std::uint32_t, kMaxDimension>& idx, int n, int bits) {
  std::uint64_t code = 0;
  for (int b = 0; b < bits; ++b) {
    for (int a = 0; a < n; ++a) {
      code |= static_cast<std::uint64_t>((idx[a] >> b) & 1u) << (b * n + (n - 1 - a));
    }
  }
  return code;
}

std::array<std::uint32_t, kMaxDimension> deinterleave(std::uint64_t code, int n, int bits) {
  std::array<std::uint32_t, kMaxDimension> idx{};
  for (int b = 0; b < bits; ++b) {
    for (int a = 0; a < n; ++a) {
      idx[a] |= static_cast<std::uint32_t>((code >> (b * n + (n - 1 - a))) & 1u) << b;
    }
  }
  return idx;
}

}  // namespace

Grid::Grid(int dimension, int depth, std::vector<double> origin, double side)
    : dimension_(dimension), depth_(depth), origin_(std::move(origin)), side_(side) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw Error(ErrorKind::parameter, "grid dimension must be in [1, " +
                                          std::to_string(kMaxDimension) + "]");
  }
  if (depth < 0 || dimension * depth > 26) {
    throw Error(ErrorKind::parameter, "grid depth must satisfy 0 <= n*depth <= 26");
  }
  if (!(side > 0.0)) throw Error(ErrorKind::parameter, "root side length must be positive");
  if (origin_.empty()) origin_.assign(dimension, 0.0);
  if (static_cast<int>(origin_.size()) != dimension) {
    throw Error(ErrorKind::parameter, "origin must have one coordinate per axis");
  }
}

double Grid::side_length(int level) const { return std::ldexp(side_, -level); }

void Grid::validate(const DyadicCube& cube) const {
  if (cube.level < 0 || cube.level > depth_) {
    throw Error(ErrorKind::domain, "cube level " + std::to_string(cube.level) +
                                       " outside [0, " + std::to_string(depth_) + "]");
  }
  const std::uint64_t extent = std::uint64_t{1} << cube.level;
  for (int a = 0; a < kMaxDimension; ++a) {
    const bool used = a < dimension_;
    if ((used && cube.index[a] >= extent) || (!used && cube.index[a] != 0)) {
      throw Error(ErrorKind::domain, "cube " + to_string(cube, dimension_) + " outside the grid");
    }
  }
}

std::uint64_t Grid::code(const DyadicCube& cube) const {
  validate(cube);
  return interleave(cube.index, dimension_, cube.level);
}

DyadicCube Grid::cube(int level, std::uint64_t code) const {
  if (level < 0 || level > depth_ || code >= cubes_at(level)) {
    throw Error(ErrorKind::domain, "cube code outside the grid");
  }
  return DyadicCube{level, deinterleave(code, dimension_, level)};
}

CellRange Grid::cells(int level, std::uint64_t code) const {
  const int shift = dimension_ * (depth_ - level);
  return {static_cast<std::size_t>(code << shift), static_cast<std::size_t>((code + 1) << shift)};
}

std::vector<DyadicCube> Grid::children(const DyadicCube& cube) const {
  const std::uint64_t c = code(cube);
  if (cube.level >= depth_) return {};
  std::vector<DyadicCube> out;
  out.reserve(children_per_cube());
  for (std::uint64_t k = 0; k < children_per_cube(); ++k) {
    out.push_back(this->cube(cube.level + 1, (c << dimension_) | k));
  }
  return out;
}

bool Grid::contains(const DyadicCube& outer, const DyadicCube& inner) const {
  if (inner.level < outer.level) return false;
  const int shift = inner.level - outer.level;
  for (int a = 0; a < dimension_; ++a) {
    if ((inner.index[a] >> shift) != outer.index[a]) return false;
  }
  return true;
}

std::array<std::uint32_t, kMaxDimension> Grid::cell_coords(std::size_t cell) const {
  return deinterleave(cell, dimension_, depth_);
}

std::vector<double> Grid::cell_center(std::size_t cell) const {
  const auto idx = cell_coords(cell);
  const double h = side_length(depth_);
  std::vector<double> x(dimension_);
  for (int a = 0; a < dimension_; ++a) x[a] = origin_[a] + (idx[a] + 0.5) * h;
  return x;
}

std::size_t Grid::morton_to_row_major(std::size_t cell) const {
  const auto idx = cell_coords(cell);
  std::size_t r = 0;
  for (int a = 0; a < dimension_; ++a) r = (r << depth_) | idx[a];
  return r;
}

std::size_t Grid::row_major_to_morton(std::size_t row_major) const {
  std::array<std::uint32_t, kMaxDimension> idx{};
  const std::size_t mask = (std::size_t{1} << depth_) - 1;
  for (int a = dimension_ - 1; a >= 0; --a) {
    idx[a] = static_cast<std::uint32_t>(row_major & mask);
    row_major >>= depth_;
  }
  return interleave(idx, dimension_, depth_);
}

// ---------------------------------------------------------------------------

CellFunction::CellFunction(Grid grid, std::vector<double> morton_values)
    : grid_(std::move(grid)), values_(std::move(morton_values)) {
  if (values_.size() != grid_.cell_count()) {
    throw Error(ErrorKind::parameter, "cell function needs " + std::to_string(grid_.cell_count()) +
                                          " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::parameter, "cell function values must be finite");
  }
}

CellFunction CellFunction::constant(const Grid& grid, double value) {
  return CellFunction(grid, std::vector<double>(grid.cell_count(), value));
}

CellFunction CellFunction::from_row_major(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.cell_count()) {
    throw Error(ErrorKind::parameter, "row-major input has the wrong number of cells");
  }
  std::vector<double> morton(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) morton[grid.row_major_to_morton(r)] = values[r];
  return CellFunction(grid, std::move(morton));
}

std::vector<double> CellFunction::to_row_major() const {
  std::vector<double> out(values_.size());
  for (std::size_t c = 0; c < values_.size(); ++c) out[grid_.morton_to_row_major(c)] = values_[c];
  return out;
}

// ---------------------------------------------------------------------------

double Doubling::parent_factor() const { return c * std::exp2(dimension); }

CellMeasure::CellMeasure(Grid grid, std::vector<double> morton_masses) {
  if (morton_masses.size() != grid.cell_count()) {
    throw Error(ErrorKind::parameter, "measure needs " + std::to_string(grid.cell_count()) +
                                          " masses, got " + std::to_string(morton_masses.size()));
  }
  for (double m : morton_masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorKind::parameter, "measure masses must be finite and nonnegative");
    }
  }
  const int depth = grid.depth();
  const std::size_t fan = grid.children_per_cube();
  std::vector<std::vector<double>> levels(depth + 1);
  levels[depth] = std::move(morton_masses);
  for (int l = depth - 1; l >= 0; --l) {
    const auto& below = levels[l + 1];
    auto& here = levels[l];
    here.resize(grid.cubes_at(l));
    for (std::size_t m = 0; m < here.size(); ++m) {
      here[m] = pairwise_sum(fan, [&](std::size_t k) { return below[m * fan + k]; });
    }
  }
  if (!(levels[0][0] > 0.0)) throw Error(ErrorKind::degenerate_measure, "measure has zero total mass");
  data_ = std::make_shared<const Data>(Data{std::move(grid), std::move(levels), std::nullopt});
}

CellMeasure CellMeasure::lebesgue(const Grid& grid) {
  double cell_volume = std::pow(grid.side_length(grid.depth()), grid.dimension());
  return CellMeasure(grid, std::vector<double>(grid.cell_count(), cell_volume))
      .with_doubling(Doubling{1.0, static_cast<double>(grid.dimension())});
}

CellMeasure CellMeasure::from_row_major(const Grid& grid, std::span<const double> masses) {
  auto as_function = CellFunction::from_row_major(grid, masses);
  return CellMeasure(grid, std::vector<double>(as_function.values().begin(), as_function.values().end()));
}

CellMeasure CellMeasure::weighted(const CellFunction& weight) const {
  if (!weight.grid().same_shape(grid())) throw Error(ErrorKind::parameter, "weight grid mismatch");
  std::vector<double> masses(grid().cell_count());
  auto base = this->masses();
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (weight[i] < 0.0) throw Error(ErrorKind::parameter, "weights must be nonnegative");
    masses[i] = weight[i] * base[i];
  }
  return CellMeasure(grid(), std::move(masses));
}

Doubling CellMeasure::doubling_or_estimate() const {
  if (data_->doubling) return *data_->doubling;
  return estimate_doubling(*this);
}

CellMeasure CellMeasure::with_doubling(Doubling d) const {
  if (!(d.c >= 1.0) || !(d.dimension > 0.0)) {
    throw Error(ErrorKind::parameter, "doubling constants need c >= 1 and n > 0");
  }
  auto copy = std::make_shared<Data>(*data_);
  copy->doubling = d;
  return CellMeasure(std::shared_ptr<const Data>(std::move(copy)));
}

CellMeasure CellMeasure::with_estimated_doubling() const { return with_doubling(estimate_doubling(*this)); }

// ---------------------------------------------------------------------------

bool is_disjoint_family(const Grid& grid, const DisjointFamily& family) {
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& q = family.members[i];
    if (q.level <= family.parent.level || !grid.contains(family.parent, q)) return false;
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      const auto& r = family.members[j];
      if (grid.contains(q, r) || grid.contains(r, q)) return false;
    }
  }
  return true;
}

double cube_mass(const CellMeasure& measure, const DyadicCube& cube) {
  return measure.mass(cube.level, measure.grid().code(cube));
}

double cube_average(const CellFunction& f, const DyadicCube& cube, const CellMeasure& measure) {
  if (!f.grid().same_shape(measure.grid())) throw Error(ErrorKind::parameter, "grid mismatch");
  const std::uint64_t code = measure.grid().code(cube);
  const double mass = measure.mass(cube.level, code);
  if (!(mass > 0.0)) {
    throw Error(ErrorKind::degenerate_measure,
                "cube " + to_string(cube, f.grid().dimension()) + " has zero mass");
  }
  const auto range = measure.grid().cells(cube.level, code);
  auto values = f.values();
  auto masses = measure.masses();
  const double integral = pairwise_sum(range.size(), [&](std::size_t i) {
    return values[range.first + i] * masses[range.first + i];
  });
  return integral / mass;
}

Doubling estimate_doubling(const CellMeasure& measure, std::optional<double> doubling_dimension) {
  const Grid& grid = measure.grid();
  const int n = grid.dimension();
  const double nmu = doubling_dimension.value_or(static_cast<double>(n));
  if (!(nmu > 0.0)) throw Error(ErrorKind::parameter, "doubling dimension must be positive");
  double c = 1.0;
  for (int l = 1; l <= grid.depth(); ++l) {
    auto here = measure.level_masses(l);
    for (std::uint64_t m = 0; m < here.size(); ++m) {
      const double q = here[m];
      for (int k = 1; k <= l; ++k) {
        const double ancestor = measure.mass(l - k, m >> (n * k));
        if (q == 0.0) {
          if (ancestor > 0.0) {
            throw Error(ErrorKind::non_doubling,
                        "cube " + to_string(grid.cube(l, m), n) +
                            " has zero mass inside a positive-mass ancestor");
          }
          continue;
        }
        c = std::max(c, ancestor / (std::exp2(k * nmu) * q));
      }
    }
  }
  return Doubling{c, nmu};
}

std::uint32_t box_offset(std::uint32_t side, std::uint32_t k) { return (side - k) / 2; }

SubcubeResult subcube_alpha(const CellMeasure& measure, const DyadicCube& cube) {
  const Grid& grid = measure.grid();
  const std::uint64_t code = grid.code(cube);
  if (cube.level >= grid.depth()) {
    throw ResolutionError("cube " + to_string(cube, grid.dimension()) +
                              " is a single cell; no proper sub-box exists",
                          0.0);
  }
  const double total = measure.mass(cube.level, code);
  if (!(total > 0.0)) throw Error(ErrorKind::degenerate_measure, "subcube search on a zero-mass cube");
  const Doubling doubling = measure.doubling_or_estimate();

  const auto side = static_cast<std::uint32_t>(1u << (grid.depth() - cube.level));
  // rank[c] = smallest chain size k whose box contains relative coordinate c
  std::vector<std::uint32_t> rank(side);
  for (std::uint32_t k = 1; k <= side; ++k) {
    const std::uint32_t off = box_offset(side, k);
    const std::uint32_t added = (k > 1 && off < box_offset(side, k - 1)) ? off : off + k - 1;
    rank[added] = k;
  }

  const int n = grid.dimension();
  const auto range = grid.cells(cube.level, code);
  std::vector<double> shell(side + 1, 0.0);
  auto masses = measure.masses();
  for (std::size_t cell = range.first; cell < range.last; ++cell) {
    const auto coords = grid.cell_coords(cell);
    std::uint32_t k = 0;
    for (int a = 0; a < n; ++a) k = std::max(k, rank[coords[a] - cube.index[a] * side]);
    shell[k] += masses[cell];
  }

  std::vector<double> frac(side + 1, 0.0);
  double running = 0.0;
  for (std::uint32_t k = 1; k <= side; ++k) {
    running += shell[k];
    frac[k] = running / total;
  }
  frac[side] = 1.0;

  std::uint32_t best = 1;
  for (std::uint32_t k = 2; k < side; ++k) {
    if (std::abs(frac[k] - 0.5) < std::abs(frac[best] - 0.5)) best = k;
  }
  // shell whose inclusion crosses 1/2
  std::uint32_t cross = side;
  for (std::uint32_t k = 1; k <= side; ++k) {
    if (frac[k] >= 0.5) {
      cross = k;
      break;
    }
  }

  SubcubeResult out;
  out.alpha = frac[best];
  out.slack = frac[cross] - frac[cross - 1];
  out.bound = 1.0 / (4.0 * doubling.c);
  out.box.side = best;
  for (int a = 0; a < n; ++a) out.box.lower[a] = cube.index[a] * side + box_offset(side, best);
  if (out.min_fraction() < out.bound - out.slack) {
    throw ResolutionError("no admissible sub-box at this resolution", out.alpha);
  }
  return out;
}

}  // namespace osclab
