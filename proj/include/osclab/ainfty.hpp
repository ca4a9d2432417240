#pragma once

// A-infinity type conditions over dyadic cubes: the w_r functional, the local
// dyadic maximal operator, the Fujii-Wilson constant, the SD smallness
// condition, characteristic-function profiles and the BMO embedding constant.
//
// Conditions quantified over all disjoint families are sampled over random
// dyadic antichains; the seed and counts are explicit inputs.

#include <cstdint>
#include <string>
#include <vector>

#include "osclab/constants.hpp"
#include "osclab/functional.hpp"
#include "osclab/grid.hpp"
#include "osclab/norms.hpp"
#include "osclab/numeric.hpp"
#include "osclab/oscillation.hpp"

namespace osclab {

/// mu(Q)^{1/r'} (integral of w^r over Q against mu)^{1/r}.
double wr_value(const CellFunction& w, const CellMeasure& mu, const DyadicCube& q, double r);

struct WrReport {
  // worst relative slack (rhs - lhs) / rhs per property; >= 0 means it held
  double mass_below_wr = 0.0;   // w(E) <= w_r(E)
  double subset_scaling = 0.0;  // w_r(E) <= (mu(E)/mu(F))^{1/r'} w_r(F), E in F
  double superadditive = 0.0;   // sum w_r(E_j) <= w_r(union E_j)
  double monotone = 0.0;        // w_r(E) <= w_r(F), E in F
  double ainfty = 0.0;          // sum w_r(Q_j)/w_r(Q) <= (mu(union)/mu(Q))^{1/r'}
  int trials = 0;
  double worst() const;
};

/// Random cell-set draws inside random cubes; families for the last check
/// are random dyadic antichains.
WrReport check_wr_properties(const CellFunction& w, const CellMeasure& mu, double r, int trials, std::uint64_t seed);

/// M(w chi_Q) on the cells of Q (zero elsewhere): the largest average of w
/// over dyadic cubes R with cell in R inside Q.
CellFunction local_maximal(const CellFunction& w, const DyadicCube& q, const CellMeasure& mu);

/// max over cubes of level <= depth - min_level of (1/Y(Q)) integral_Q M(w chi_Q) dmu.
CubeMax fujii_wilson(const CellFunction& w, const CubeFunctional& y, const CellMeasure& mu, int min_level = 0);

/// Random antichain of strict dyadic subcubes of q: with tau ~ U(0,1) each
/// child is selected with probability tau, else explored with probability
/// 1/2, else dropped. Zero-mass cubes are never selected.
std::vector<DyadicCube> random_antichain(const CellMeasure& mu, const DyadicCube& q, Rng& rng);

struct SdResult {
  bool holds = false;
  double estimate = 0.0;         // max of LHS / fraction^{1/s} over all samples
  double coarse_estimate = 0.0;  // same, with members restricted to level < depth
  std::size_t samples = 0;
};

/// (sum (a(Q_j)/a(Q))^p w(Q_j)/w(Q))^{1/p} against (mu(union Q_j)/mu(Q))^{1/s}.
/// Samples every (cube, strict descendant) pair plus `trials` random
/// antichains in random cubes. Holds when the estimate is finite and grows by
/// at most 10% when the finest level is added.
SdResult sd_check(const CubeFunctional& a, const CellFunction& w, const CellMeasure& mu, double p, double s,
                  int trials, std::uint64_t seed);

struct ProfileSample {
  double fraction = 0.0;
  double norm = 0.0;
  DyadicCube cube;
  std::size_t members = 0;
};

struct AinftyProfile {
  std::vector<ProfileSample> samples;
  Bijection candidate;  // Psi^{-1} in `candidate.inverse`
  double c_y = 0.0;     // max of norm / Psi^{-1}(fraction)
  std::string label;    // "exact-characteristic" or "characteristic-restricted"
};

/// Candidate Psi^{-1} for a family: t^{1/p}, 1/phi^{-1}(1/t), or t^{1/p+}.
Bijection candidate_bijection(const NormFamily& family);

/// Samples (mu(union Q_j)/mu(Q), ||sum chi_{Q_j}||) over random antichains.
AinftyProfile ainfty_char_profile(const LocalNormSpec& spec, const CellMeasure& mu, int trials, std::uint64_t seed);

struct EmbeddingResult {
  double value = 0.0;
  DyadicCube argmax;
  std::size_t argmax_function = 0;
  std::size_t skipped = 0;  // test functions with vanishing BMO norm
};

/// max over test functions and admissible cubes of
/// (1/Y(Q)) integral_Q |f - f_{Q,mu}| w dmu / ||f||_BMO.
EmbeddingResult embedding_constant(const CellFunction& w, const CubeFunctional& y, const CellMeasure& mu,
                                   const std::vector<CellFunction>& test_functions, int min_level = 1);

}  // namespace osclab
