#include "covbounds/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covbounds/tolerance.hpp"

namespace covbounds {

namespace {

bool differs(double x, double y) { return !tol::nearly_equal(x, y); }

struct PairTerm {
  bool active = false;
  double value = 0.0;
  double lambda = 0.5;  // weight on the first scenario
};

// q_ij(mu~_ij) for the non-degenerate case (a_i != a_j and b_i != b_j).
// Degenerate pairs contribute nothing beyond c_i, c_j.
PairTerm pair_term(double ai, double bi, double ci, double aj, double bj, double cj) {
  if (!differs(ai, aj) || !differs(bi, bj)) return {};

  const double vertex = (cj - ci) / (2.0 * (aj - ai)) + 0.5 * (bi + bj);
  const double x = std::clamp(vertex, std::min(bi, bj), std::max(bi, bj));
  const double q = ((x - bi) * (x - bj) * (ai - aj) + (x - bi) * (cj - ci)) / (bj - bi) + ci;
  const double lambda = std::clamp(0.5 - (cj - ci) / (2.0 * (aj - ai) * (bj - bi)), 0.0, 1.0);
  return {true, q, lambda};
}

}  // namespace

void require_simplex(std::span<const double> lambda, std::size_t expected_size) {
  if (lambda.size() != expected_size) {
    throw Error(ErrorCode::kDimensionMismatch, "weight vector length differs from scenario count");
  }
  double sum = 0.0;
  for (double w : lambda) {
    if (!std::isfinite(w) || w < -1e-12) {
      throw Error(ErrorCode::kNotOnSimplex, "weights must be nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::kNotOnSimplex, "weights must sum to one");
  }
}

BoundResult pair_upper_cov(double a_i, double b_i, double c_i, double a_j, double b_j,
                           double c_j) {
  for (double v : {a_i, b_i, c_i, a_j, b_j, c_j}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite pair moment");
  }
  BoundResult best{c_i, Witness::single(0)};
  if (tol::strictly_greater(c_j, best.value)) best = {c_j, Witness::single(1)};
  const PairTerm t = pair_term(a_i, b_i, c_i, a_j, b_j, c_j);
  if (t.active && tol::strictly_greater(t.value, best.value)) {
    best = {t.value, Witness::pair(0, 1, t.lambda)};
  }
  return best;
}

BoundResult upper_cov(const PairMoments& p) {
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  const std::size_t k = p.size();

  BoundResult best{c[0], Witness::single(0)};
  for (std::size_t i = 1; i < k; ++i) {
    if (tol::strictly_greater(c[i], best.value)) best = {c[i], Witness::single(i)};
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const PairTerm t = pair_term(a[i], b[i], c[i], a[j], b[j], c[j]);
      if (t.active && tol::strictly_greater(t.value, best.value)) {
        best = {t.value, Witness::pair(i, j, t.lambda)};
      }
    }
  }
  return best;
}

BoundResult lower_cov(const PairMoments& p) {
  BoundResult r = upper_cov(p.negate_y());
  r.value = -r.value;
  return r;
}

CovBounds cov_bounds(const PairMoments& p) { return {upper_cov(p), lower_cov(p)}; }

double mixture_cov(const PairMoments& p, std::span<const double> lambda) {
  require_simplex(lambda, p.size());
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  double cross = 0.0;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    cross += lambda[k] * (c[k] + a[k] * b[k]);
    ma += lambda[k] * a[k];
    mb += lambda[k] * b[k];
  }
  return cross - ma * mb;
}

double mean_certain_upper_cov(const PairMoments& p) {
  const auto a = p.a();
  for (double x : a) {
    if (differs(x, a[0])) throw Error(ErrorCode::kMeansNotCertain, "E[X] varies across scenarios");
  }
  const auto c = p.c();
  return *std::max_element(c.begin(), c.end());
}

BoundsReport bounds_report(const PairMoments& p) {
  const MeanInterval mx = mean_interval(p.a());
  const MeanInterval my = mean_interval(p.b());

  BoundsReport r;
  r.rho_x = mx.midpoint();
  r.rho_y = my.midpoint();
  r.delta_x = mx.width();
  r.delta_y = my.width();

  const double products[] = {mx.lo * my.lo, mx.hi * my.lo, mx.lo * my.hi, mx.hi * my.hi};
  r.m_upper = *std::max_element(std::begin(products), std::end(products));
  r.m_lower = *std::min_element(std::begin(products), std::end(products));

  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  r.centered_upper = -INFINITY;
  r.centered_lower = INFINITY;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double v = c[k] + (a[k] - r.rho_x) * (b[k] - r.rho_y);
    r.centered_upper = std::max(r.centered_upper, v);
    r.centered_lower = std::min(r.centered_lower, v);
  }

  const double quarter = 0.25 * r.delta_x * r.delta_y;
  r.bracket_low = r.centered_upper - quarter;
  r.bracket_high = r.centered_upper + quarter;
  r.lower_bracket_low = r.centered_lower - quarter;
  r.lower_bracket_high = r.centered_lower + quarter;
  // E[-(X - rho_x)(Y - rho_y)] upper = -centered_lower.
  r.gap_bound = r.centered_upper - r.centered_lower + 2.0 * quarter;
  return r;
}

CorrelationBounds correlation_bounds(double var_x, double var_y, double e_xy_upper,
                                     double e_xy_lower) {
  if (!(var_x > 0.0) || !(var_y > 0.0)) {
    throw Error(ErrorCode::kNonPositiveVariance, "correlation needs positive variances");
  }
  const double scale = std::sqrt(var_x * var_y);
  return {e_xy_upper / scale, e_xy_lower / scale};
}

}  // namespace covbounds
