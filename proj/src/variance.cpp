#include "covbounds/variance.hpp"

#include <algorithm>
#include <cmath>

#include "covbounds/tolerance.hpp"

namespace covbounds {

namespace {

// |mu_i - mu_j| below this is treated as equal means.
bool same_mean(double mi, double mj) {
  return std::abs(mi - mj) <= 1e-12 * (1.0 + std::abs(mi) + std::abs(mj));
}

void check_lengths(std::span<const double> means, std::span<const double> second) {
  if (means.empty()) throw Error(ErrorCode::kEmptyInput, "no scenarios");
  if (means.size() != second.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "means and second moments differ in length");
  }
  for (std::size_t k = 0; k < means.size(); ++k) {
    if (!std::isfinite(means[k]) || !std::isfinite(second[k])) {
      throw Error(ErrorCode::kNonFinite, "non-finite moment");
    }
    if (second[k] < means[k] * means[k] - 1e-9) {
      throw Error(ErrorCode::kNegativeVariance, "second moment below squared mean");
    }
  }
}

std::vector<double> to_second_moments(std::span<const double> means,
                                      std::span<const double> variances) {
  if (means.size() != variances.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "means and variances differ in length");
  }
  std::vector<double> d(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) d[k] = variances[k] + means[k] * means[k];
  return d;
}

}  // namespace

MinMaxResult min_max_quadratic(const QuadFamily& family) {
  const auto& mu = family.mu;
  const auto& d = family.d;
  if (mu.empty()) throw Error(ErrorCode::kEmptyInput, "empty parabola family");
  if (mu.size() != d.size()) throw Error(ErrorCode::kDimensionMismatch, "mu and d lengths differ");
  const std::size_t k = mu.size();

  MinMaxResult best;
  best.value = d[0] - mu[0] * mu[0];
  best.argmin = mu[0];
  best.term = {false, 0, 0};
  for (std::size_t i = 1; i < k; ++i) {
    const double v = d[i] - mu[i] * mu[i];
    if (tol::strictly_greater(v, best.value)) best = {v, mu[i], {false, i, i}};
  }

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double x = mu[i];
      if (!same_mean(mu[i], mu[j])) {
        const double crossing = (d[j] - d[i]) / (2.0 * (mu[j] - mu[i]));
        x = std::clamp(crossing, std::min(mu[i], mu[j]), std::max(mu[i], mu[j]));
      }
      const double h = x * x - 2.0 * mu[i] * x + d[i];
      if (tol::strictly_greater(h, best.value)) best = {h, x, {true, i, j}};
    }
  }
  return best;
}

BoundResult upper_variance(std::span<const double> means, std::span<const double> second_moments) {
  check_lengths(means, second_moments);
  QuadFamily family{{means.begin(), means.end()}, {second_moments.begin(), second_moments.end()}};
  const MinMaxResult r = min_max_quadratic(family);

  if (!r.term.is_pair) return {r.value, Witness::single(r.term.i)};
  // The crossing point is the mixture mean: alpha* = lambda mu_i + (1 - lambda) mu_j.
  const double mi = means[r.term.i];
  const double mj = means[r.term.j];
  const double lambda = std::clamp((r.argmin - mj) / (mi - mj), 0.0, 1.0);
  return {r.value, Witness::pair(r.term.i, r.term.j, lambda)};
}

BoundResult lower_variance(std::span<const double> means, std::span<const double> second_moments) {
  check_lengths(means, second_moments);
  BoundResult best{second_moments[0] - means[0] * means[0], Witness::single(0)};
  for (std::size_t k = 1; k < means.size(); ++k) {
    const double v = second_moments[k] - means[k] * means[k];
    if (tol::strictly_greater(best.value, v)) best = {v, Witness::single(k)};
  }
  return best;
}

BoundResult upper_variance_from_variances(std::span<const double> means,
                                          std::span<const double> variances) {
  const auto d = to_second_moments(means, variances);
  return upper_variance(means, d);
}

BoundResult lower_variance_from_variances(std::span<const double> means,
                                          std::span<const double> variances) {
  const auto d = to_second_moments(means, variances);
  return lower_variance(means, d);
}

}  // namespace covbounds
