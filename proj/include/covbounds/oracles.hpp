#pragma once

// Brute-force references for the closed forms. Nothing here is on a
// production path; every routine evaluates a defining optimisation directly
// on a grid or lattice.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "covbounds/moments.hpp"

namespace covbounds::oracle {

/// (steps + 1) x (steps + 1) grid over [x_lo, x_hi] x [y_lo, y_hi]; x carries
/// the X-centering parameter mu_1, y the Y-centering parameter mu_2. A
/// zero-width axis collapses to a single point.
struct GridSpec {
  int steps = 200;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  /// Box exactly M_X x M_Y.
  static GridSpec over_means(const PairMoments& p, int steps);
  /// Same centre, every half-width multiplied by `factor` (>= 1).
  GridSpec widened(double factor) const;
};

enum class Nesting {
  kMaximin,  // max over mu_2 of min over mu_1
  kMinimax,  // min over mu_1 of max over mu_2
};

enum class Sense {
  kUpper,  // objective uses the upper expectation (max over scenarios)
  kLower,  // objective uses the lower expectation (min over scenarios)
};

/// max_i { c_i + (a_i - mu1)(b_i - mu2) }: the upper expectation of
/// (X - mu1)(Y - mu2). Linear in the measure, so the hull supremum sits at a
/// scenario.
double upper_expectation_bilinear(const PairMoments& p, double mu1, double mu2);
/// min_i { c_i + (a_i - mu1)(b_i - mu2) }.
double lower_expectation_bilinear(const PairMoments& p, double mu1, double mu2);

/// Nested optimisation of the (upper or lower) expectation of
/// (X - mu_1)(Y - mu_2) over the grid. With kUpper/kMaximin this
/// approximates the upper covariance. Throws kBadBox for an invalid grid or a
/// box that misses the mean intervals.
double grid_maximin_cov(const PairMoments& p, const GridSpec& grid, Nesting order,
                        Sense sense = Sense::kUpper);

/// Calls `visit` with every point of {lambda in the K-simplex : lambda_k in
/// Z / divisions} that has at most `max_support` nonzero coordinates.
void for_each_simplex_point(std::size_t k, std::size_t divisions, std::size_t max_support,
                            const std::function<void(std::span<const double>)>& visit);

/// Extremal mixture covariance over the full simplex lattice of the given
/// step. K <= 5 (kTooManyScenarios otherwise) and 0 < step <= 0.1.
double grid_simplex_envelope(const PairMoments& p, double step, Sense sense);

/// Per-scenario moments for U = (X + Y) / 2 and V = (X - Y) / 2.
struct UvMoments {
  std::vector<double> mu;     // E[U]
  std::vector<double> nu;     // E[V]
  std::vector<double> kappa;  // E[XY]

  static UvMoments from_pair(const PairMoments& p);
};

/// Grid over the beta axis (grid y range, must contain M_V); for each beta
/// the inner minimum over alpha is solved exactly as a min-max of parabolas.
/// The x range of `grid` is ignored.
double grid_uv_maximin(const UvMoments& uv, const GridSpec& grid);

/// Default UV grid: x = M_U, y = M_V.
GridSpec uv_grid(const UvMoments& uv, int steps);

}  // namespace covbounds::oracle
