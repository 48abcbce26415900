#pragma once

#include <span>

#include "covbounds/moments.hpp"

namespace covbounds {

struct CovBounds {
  BoundResult upper;
  BoundResult lower;
};

/// Closed-form brackets around the covariance bounds built from the mean
/// intervals alone.
struct BoundsReport {
  double rho_x = 0.0;    // midpoint of M_X
  double rho_y = 0.0;    // midpoint of M_Y
  double delta_x = 0.0;  // width of M_X
  double delta_y = 0.0;  // width of M_Y
  double m_upper = 0.0;  // max of the four endpoint products
  double m_lower = 0.0;  // min of the four endpoint products
  // Upper / lower expectation of (X - rho_x)(Y - rho_y).
  double centered_upper = 0.0;
  double centered_lower = 0.0;
  // centered_upper -/+ delta_x delta_y / 4 brackets the upper covariance.
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  // centered_lower -/+ delta_x delta_y / 4 brackets the lower covariance.
  double lower_bracket_low = 0.0;
  double lower_bracket_high = 0.0;
  // Upper limit on upper_cov - lower_cov.
  double gap_bound = 0.0;
};

struct CorrelationBounds {
  double upper = 0.0;
  double lower = 0.0;
};

/// Upper covariance under two scenarios (a_i, b_i, c_i) and (a_j, b_j, c_j).
///
/// The value is max{c_i, c_j, q(mu~)} where q is the maximin profile along
/// the Y-centering parameter and mu~ its clamped vertex. When the pair term
/// wins, the witness carries the weight lambda on the first scenario,
///   lambda = 1/2 - (c_j - c_i) / (2 (a_j - a_i)(b_j - b_i)).
/// Witness indices are 0 (first scenario) and 1 (second).
BoundResult pair_upper_cov(double a_i, double b_i, double c_i, double a_j, double b_j, double c_j);

/// Upper covariance over the convex hull of K scenarios: the maximum of the
/// scenario covariances and of every pairwise term.
BoundResult upper_cov(const PairMoments& p);

/// Lower covariance, computed as -upper_cov(X, -Y).
BoundResult lower_cov(const PairMoments& p);

CovBounds cov_bounds(const PairMoments& p);

/// Covariance of the mixture sum_k lambda_k P_k. Throws kNotOnSimplex unless
/// lambda is nonnegative and sums to one within 1e-12.
double mixture_cov(const PairMoments& p, std::span<const double> lambda);

/// Shortcut when E[X] is the same under every scenario: the cross term
/// vanishes and the bound is max_i c_i. Throws kMeansNotCertain otherwise.
double mean_certain_upper_cov(const PairMoments& p);

BoundsReport bounds_report(const PairMoments& p);

/// Upper/lower correlation for zero-mean, variance-certain variables.
CorrelationBounds correlation_bounds(double var_x, double var_y, double e_xy_upper,
                                     double e_xy_lower);

/// Throws kNotOnSimplex when lambda is off the probability simplex.
void require_simplex(std::span<const double> lambda, std::size_t expected_size);

}  // namespace covbounds
