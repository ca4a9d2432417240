#pragma once

// Small deterministic numeric helpers shared by every module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace osclab {

/// Pairwise sum of term(i) for i in [0, n). The recursion order is fixed, so
/// results do not depend on how callers are scheduled.
namespace detail {
template <class Term>
double pairwise_sum_range(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 8) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(lo, mid, term) + pairwise_sum_range(mid, hi, term);
}
}  // namespace detail

template <class Term>
double pairwise_sum(std::size_t n, const Term& term) {
  return detail::pairwise_sum_range(0, n, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

/// Seeded generator whose derived draws are bit-identical across platforms
/// (std::uniform_real_distribution is implementation-defined, so it is not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Log-uniform in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  /// Child stream for deterministic partitioning of the seed space.
  Rng split(std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(engine_() >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 child(seq);
    return Rng(child());
  }

 private:
  std::mt19937_64 engine_;
};

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace osclab
