#pragma once

// Shared max-reduction over dyadic cubes (internal to the library).

#include <vector>

#include "osclab/grid.hpp"
#include "osclab/oscillation.hpp"
#include "osclab/parallel.hpp"

namespace osclab::detail {

/// Evaluates eval(level, code) on every positive-mass cube of level <=
/// max_level, in parallel per level, and reduces serially. Negative values
/// mark skipped cubes. Ties go to the smaller cube in (level, index) order.
template <class Eval>
CubeMax cube_max(const Grid& grid, int max_level, const CellMeasure& mu, const Eval& eval) {
  CubeMax best;
  bool have = false;
  for (int l = 0; l <= max_level; ++l) {
    const std::size_t count = grid.cubes_at(l);
    std::vector<double> values(count, -1.0);
    parallel_for(count, [&](std::size_t m) {
      if (mu.mass(l, m) > 0.0) values[m] = eval(l, m);
    });
    for (std::size_t m = 0; m < count; ++m) {
      if (values[m] < 0.0) continue;
      const DyadicCube cube = grid.cube(l, m);
      if (!have || values[m] > best.value || (values[m] == best.value && cube < best.argmax)) {
        best.value = values[m];
        best.argmax = cube;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace osclab::detail
