#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "covbounds/moments.hpp"

namespace covbounds {

/// The parabola family alpha^2 - 2 mu_i alpha + d_i, i = 0..K-1.
struct QuadFamily {
  std::vector<double> mu;
  std::vector<double> d;
};

/// Which member (or crossing of two members) attains the outer minimum.
struct QuadTerm {
  bool is_pair = false;
  std::size_t i = 0;
  std::size_t j = 0;
};

struct MinMaxResult {
  double value = 0.0;
  double argmin = 0.0;
  QuadTerm term;
};

/// Exact value of min over real alpha of max_i (alpha^2 - 2 mu_i alpha + d_i).
///
/// The minimiser of an upper envelope of parabolas with unit curvature sits
/// either at a single vertex mu_i or at the crossing of two members, clamped
/// into [min(mu_i, mu_j), max(mu_i, mu_j)]. Scanning all vertices and all
/// pairwise crossings and keeping the largest envelope height gives the
/// answer in O(K^2) with no iteration. Single terms are visited before pair
/// terms and a later term replaces the incumbent only when strictly larger,
/// so ties resolve to the lexicographically first candidate.
MinMaxResult min_max_quadratic(const QuadFamily& family);

/// Upper variance over the convex hull of K scenarios, from per-scenario
/// means and raw second moments E[X^2]. Throws kNegativeVariance when some
/// second moment is below mean^2 - 1e-9.
BoundResult upper_variance(std::span<const double> means, std::span<const double> second_moments);

/// Lower variance: the smallest scenario variance (attained at an extreme
/// point of the hull).
BoundResult lower_variance(std::span<const double> means, std::span<const double> second_moments);

BoundResult upper_variance_from_variances(std::span<const double> means,
                                          std::span<const double> variances);
BoundResult lower_variance_from_variances(std::span<const double> means,
                                          std::span<const double> variances);

}  // namespace covbounds
