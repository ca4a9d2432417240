#pragma once

// Mean oscillation, dyadic BMO, truncation, the local Calderon-Zygmund
// stopping time, John-Nirenberg tails and sparse families.

#include <vector>

#include "osclab/grid.hpp"
#include "osclab/norms.hpp"

namespace osclab {

/// Average of |f - f_Q| over Q against mu.
double oscillation(const CellFunction& f, const DyadicCube& q, const CellMeasure& mu);

struct CubeMax {
  double value = 0.0;
  DyadicCube argmax;
};

/// Dyadic BMO: max oscillation over cubes of level <= depth - min_level.
/// Ties go to the smallest cube in (level, index) order.
CubeMax bmo_norm(const CellFunction& f, const CellMeasure& mu, int min_level = 1);

/// Cellwise clamp to [lower, upper]; lower < upper.
CellFunction truncate(const CellFunction& f, double lower, double upper);

struct CZResult {
  DyadicCube parent;
  double level_L = 0.0;
  DisjointFamily selected;
  std::vector<double> averages;  // average of |g| on each selected cube
  double parent_average = 0.0;   // average of |g| on the parent
};

/// Maximal strict dyadic subcubes of Q with average |g| > L, scanned top-down.
/// Requires average(|g|, Q) <= L; zero-mass cubes are never selected.
CZResult cz_decompose(const CellFunction& g, const DyadicCube& q, const CellMeasure& mu, double L);

struct CZCheck {
  bool antichain = true;
  bool sandwich = true;
  bool smallness = true;
  bool off_union = true;
  double sandwich_factor = 0.0;  // c_mu 2^{n_mu} from the measure
  double worst_upper = 0.0;      // max average / (factor L)
  double smallness_ratio = 0.0;  // sum mass(Q_j) / (mass(Q) avg / L)
  double worst_outside = 0.0;    // max |g| off the union
  bool ok() const { return antichain && sandwich && smallness && off_union; }
};

/// Checks the decomposition invariants with relative tolerance `tol`.
CZCheck check_cz(const CZResult& result, const CellFunction& g, const CellMeasure& mu, double tol = 1e-12);

/// mu({x in Q : |f - f_Q| > t}) / mu(Q).
double jn_tail(const CellFunction& f, const DyadicCube& q, const CellMeasure& mu, double t);

struct SparseFamily {
  DyadicCube root;
  double stopping_factor = 2.0;   // Lambda
  std::vector<DyadicCube> members;
  std::vector<double> member_mass;
  std::vector<double> major_mass;       // mass of E_Q
  std::vector<double> member_oscillation;
  std::vector<int> owner;               // per cell of the root: index of the member whose E_Q holds it
  double c_dom = 0.0;
  bool truncated = false;
};

/// Recursive stopping construction with threshold Lambda * oscillation(f, Q).
/// Stops adding members after `max_members` and sets the truncation flag.
SparseFamily sparse_dominate(const CellFunction& f, const DyadicCube& q0, const CellMeasure& mu,
                             double lambda = 2.0, std::size_t max_members = 1u << 22);

/// Largest norm((f - f_P) / ||f||_BMO, P, spec) over admissible cubes P.
struct LocalizedSup {
  double value = 0.0;
  DyadicCube argmax;
  double bmo = 0.0;
};
LocalizedSup sup_localized_oscillation(const CellFunction& f, const LocalNormSpec& spec, const CellMeasure& mu,
                                       int min_level = 1, int max_level = -1);

}  // namespace osclab
