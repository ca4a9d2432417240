#pragma once

// Built-in functions, weights, measures and exponents used by the suites
// and addressable by name from the command line.

#include <cstdint>
#include <string_view>
#include <vector>

#include "osclab/grid.hpp"
#include "osclab/norms.hpp"

namespace osclab {

/// log(1/|x - x0|) at cell midpoints; x0 defaults to the grid origin.
CellFunction log_reciprocal(const Grid& grid, std::vector<double> x0 = {});

/// Indicator of the slab x_0 < origin_0 + theta * side.
CellFunction indicator(const Grid& grid, double theta);

/// Piecewise constant on the cubes of a random level in [1, min(depth, 6)],
/// values uniform in [-1, 1] with an occasional large spike.
CellFunction random_step(const Grid& grid, std::uint64_t seed);

/// |x - origin|^delta; in one dimension the exact cell averages, elsewhere
/// midpoint values. delta > -1.
CellFunction power_weight(const Grid& grid, double delta);

/// Each cube splits its mass among its children with weights drawn from
/// [1, ratio], so parent/child mass ratios stay below 2^n ratio.
CellMeasure recursive_split_measure(const Grid& grid, std::uint64_t seed, double ratio);

/// Exponent uniform in [p_min, p_max] per cell, attaining both ends exactly.
ExponentFunction random_exponent(const Grid& grid, std::uint64_t seed, double p_min, double p_max);

/// "log-reciprocal", "indicator:theta", "random-step:seed", "power:delta".
CellFunction builtin_function(const Grid& grid, std::string_view name);

}  // namespace osclab
