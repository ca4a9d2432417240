#pragma once

// Dyadic geometry over a root cube, functions sampled on the finest cells and
// discrete measures with cached cube sums.
//
// Cells are stored in Morton (Z) order: the finest cells of every dyadic cube
// form one contiguous range, and the children of the cube with code m at
// level l are the codes m * 2^n + c at level l + 1. Row-major order is only
// used at the I/O boundary.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace osclab {

inline constexpr int kMaxDimension = 4;

struct DyadicCube {
  int level = 0;
  std::array<std::uint32_t, kMaxDimension> index{};

  /// Ordering used for deterministic tie breaks: level, then index lexicographic.
  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

std::string to_string(const DyadicCube& cube, int dimension);

/// Half-open range of Morton cell positions.
struct CellRange {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const { return last - first; }
};

class Grid {
 public:
  /// Root cube [origin, origin + side)^n refined `depth` times.
  Grid(int dimension, int depth, std::vector<double> origin = {}, double side = 1.0);

  int dimension() const { return dimension_; }
  int depth() const { return depth_; }
  double side() const { return side_; }
  const std::vector<double>& origin() const { return origin_; }

  std::size_t cell_count() const { return cubes_at(depth_); }
  std::size_t cubes_at(int level) const { return std::size_t{1} << (dimension_ * level); }
  std::size_t children_per_cube() const { return std::size_t{1} << dimension_; }
  double side_length(int level) const;

  DyadicCube root() const { return DyadicCube{}; }

  /// Morton code of a cube at its own level; throws a domain error when the
  /// cube does not belong to this grid.
  std::uint64_t code(const DyadicCube& cube) const;
  DyadicCube cube(int level, std::uint64_t code) const;
  void validate(const DyadicCube& cube) const;

  CellRange cells(int level, std::uint64_t code) const;
  CellRange cells(const DyadicCube& cube) const { return cells(cube.level, code(cube)); }

  std::vector<DyadicCube> children(const DyadicCube& cube) const;
  bool contains(const DyadicCube& outer, const DyadicCube& inner) const;

  /// Finest-cell coordinates (per axis) of a Morton cell position.
  std::array<std::uint32_t, kMaxDimension> cell_coords(std::size_t cell) const;
  std::vector<double> cell_center(std::size_t cell) const;

  std::size_t morton_to_row_major(std::size_t cell) const;
  std::size_t row_major_to_morton(std::size_t row_major) const;

  bool same_shape(const Grid& other) const {
    return dimension_ == other.dimension_ && depth_ == other.depth_;
  }

 private:
  int dimension_;
  int depth_;
  std::vector<double> origin_;
  double side_;
};

/// A real value on every finest cell.
class CellFunction {
 public:
  CellFunction(Grid grid, std::vector<double> morton_values);
  static CellFunction constant(const Grid& grid, double value);
  static CellFunction from_row_major(const Grid& grid, std::span<const double> values);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }
  std::size_t size() const { return values_.size(); }
  std::vector<double> to_row_major() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct Doubling {
  double c = 1.0;          // doubling constant c_mu
  double dimension = 1.0;  // doubling dimension n_mu
  /// c_mu * 2^{n_mu}, the dyadic parent/child mass ratio bound.
  double parent_factor() const;
};

/// Nonnegative mass per finest cell with a tree of per-cube sums. Copies share
/// the immutable storage.
class CellMeasure {
 public:
  CellMeasure(Grid grid, std::vector<double> morton_masses);
  static CellMeasure lebesgue(const Grid& grid);
  static CellMeasure from_row_major(const Grid& grid, std::span<const double> masses);

  const Grid& grid() const { return data_->grid; }
  std::span<const double> masses() const { return data_->levels.back(); }
  double total() const { return data_->levels.front().front(); }

  double mass(int level, std::uint64_t code) const { return data_->levels[level][code]; }
  std::span<const double> level_masses(int level) const { return data_->levels[level]; }

  /// Masses w_i * m_i, the measure dw = w dmu.
  CellMeasure weighted(const CellFunction& weight) const;

  /// Doubling constants, set by with_doubling(); empty until then.
  const std::optional<Doubling>& doubling() const { return data_->doubling; }
  /// Estimated doubling constants, computing them when not yet attached.
  Doubling doubling_or_estimate() const;
  CellMeasure with_doubling(Doubling d) const;
  CellMeasure with_estimated_doubling() const;

 private:
  struct Data {
    Grid grid;
    std::vector<std::vector<double>> levels;  // levels[l][code]
    std::optional<Doubling> doubling;
  };
  explicit CellMeasure(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// A parent cube with pairwise disjoint strict subcubes.
struct DisjointFamily {
  DyadicCube parent;
  std::vector<DyadicCube> members;
};

/// Checks the DisjointFamily invariants (members pairwise disjoint and strictly
/// inside the parent).
bool is_disjoint_family(const Grid& grid, const DisjointFamily& family);

double cube_mass(const CellMeasure& measure, const DyadicCube& cube);
double cube_average(const CellFunction& f, const DyadicCube& cube, const CellMeasure& measure);

/// Largest ancestor-pair ratio mass(Q^)/((l(Q^)/l(Q))^n_mu mass(Q)), floored
/// at 1. Only dyadic ancestor chains are inspected.
Doubling estimate_doubling(const CellMeasure& measure, std::optional<double> doubling_dimension = {});

/// Cell-aligned box inside a cube: lower corner and side, both in finest cells.
struct CellBox {
  std::array<std::uint32_t, kMaxDimension> lower{};
  std::uint32_t side = 0;
};

struct SubcubeResult {
  CellBox box;
  double alpha = 0.0;      // mass(box) / mass(cube)
  double slack = 0.0;      // relative mass of the shell straddling alpha = 1/2
  double bound = 0.0;      // 1 / (4 c_mu)
  double min_fraction() const { return alpha < 1.0 - alpha ? alpha : 1.0 - alpha; }
};

/// Near-concentric sub-box search on h(t) = mass of the box of side t around
/// the centre, t quantized to whole cells. Picks the proper box whose fraction
/// is closest to 1/2 (smaller box on ties).
SubcubeResult subcube_alpha(const CellMeasure& measure, const DyadicCube& cube);

/// Lower corner of the size-k box of the nested chain inside a cube of `side`
/// cells (exactly centred when side - k is even).
std::uint32_t box_offset(std::uint32_t side, std::uint32_t k);

}  // namespace osclab
