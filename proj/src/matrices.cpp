#include "covbounds/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "covbounds/covariance.hpp"
#include "covbounds/variance.hpp"

namespace covbounds {

CovarianceBoundMatrices cov_bounds_matrix(const ScenarioSet& set) {
  const std::size_t n = set.num_variables();
  if (n == 0 || set.num_scenarios() == 0) throw Error(ErrorCode::kEmptyInput, "empty scenario set");

  CovarianceBoundMatrices out;
  const auto nn = static_cast<Eigen::Index>(n);
  out.upper = Eigen::MatrixXd::Zero(nn, nn);
  out.lower = Eigen::MatrixXd::Zero(nn, nn);
  out.upper_witnesses.resize(n * n);
  out.lower_witnesses.resize(n * n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto means = scenario_means(set, i);
    const auto second = scenario_second_moments(set, i);
    const BoundResult up = upper_variance(means, second);
    const BoundResult lo = lower_variance(means, second);
    out.upper(ii, ii) = up.value;
    out.lower(ii, ii) = lo.value;
    out.upper_witnesses[i * n + i] = up.witness;
    out.lower_witnesses[i * n + i] = lo.witness;

    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const CovBounds b = cov_bounds(extract_pair(set, i, j));
      out.upper(ii, jj) = out.upper(jj, ii) = b.upper.value;
      out.lower(ii, jj) = out.lower(jj, ii) = b.lower.value;
      out.upper_witnesses[i * n + j] = out.upper_witnesses[j * n + i] = b.upper.witness;
      out.lower_witnesses[i * n + j] = out.lower_witnesses[j * n + i] = b.lower.witness;
    }
  }
  return out;
}

bool is_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "matrix is not square");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = r + 1; c < m.cols(); ++c) {
      if (std::abs(m(r, c) - m(c, r)) > kSymmetryTolerance * (1.0 + std::abs(m(r, c)))) {
        throw Error(ErrorCode::kNonSymmetric, "matrix is not symmetric");
      }
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return min_eigenvalue(sym) >= -kPsdTolerance * (1.0 + std::abs(sym.trace()));
}

Eigen::MatrixXd mixture_covariance_matrix(const ScenarioSet& set, std::span<const double> lambda) {
  const std::size_t k = set.num_scenarios();
  if (lambda.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "weight vector length differs from scenario count");
  }
  double sum = 0.0;
  for (double w : lambda) {
    if (!std::isfinite(w) || w < -1e-12) throw Error(ErrorCode::kNotOnSimplex, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::kNotOnSimplex, "weights must sum to one");

  const auto n = static_cast<Eigen::Index>(set.num_variables());
  Eigen::VectorXd mbar = Eigen::VectorXd::Zero(n);
  for (std::size_t s = 0; s < k; ++s) mbar += lambda[s] * set.scenarios[s].mean;

  // Within-scenario plus between-scenario spread; equal to
  // sum lambda_k (S_k + m_k m_k^T) - mbar mbar^T but PSD by construction.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < k; ++s) {
    const Eigen::VectorXd dev = set.scenarios[s].mean - mbar;
    out += lambda[s] * (set.scenarios[s].cov + dev * dev.transpose());
  }
  return 0.5 * (out + out.transpose());
}

namespace {

// Additive-recurrence generator constants: 1 / phi_d^(i+1) where phi_d is
// the positive root of x^(d+1) = x + 1.
std::vector<double> kronecker_alpha(std::size_t d) {
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(d + 1));
  std::vector<double> alpha(d);
  double p = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    p /= phi;
    alpha[i] = p;
  }
  return alpha;
}

}  // namespace

std::vector<std::vector<double>> simplex_samples(std::size_t k, std::size_t count,
                                                 std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  if (k == 0) return out;
  out.reserve(count);
  if (k == 1) {
    out.assign(count, std::vector<double>{1.0});
    return out;
  }

  const auto alpha = kronecker_alpha(k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(k);
  for (double& s : shift) s = unit(rng);

  constexpr double kFloor = 1e-300;
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<double> w(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double u = shift[i] + static_cast<double>(n + 1) * alpha[i];
      u -= std::floor(u);
      w[i] = -std::log(std::max(u, kFloor));
      total += w[i];
    }
    for (double& x : w) x /= total;
    // Push residual rounding onto the largest weight so the sum is exactly 1.
    double sum = 0.0;
    for (double x : w) sum += x;
    *std::max_element(w.begin(), w.end()) += 1.0 - sum;
    out.push_back(std::move(w));
  }
  return out;
}

UncertaintySetReport uncertainty_set_check(const ScenarioSet& set, std::size_t samples,
                                           std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  const CovarianceBoundMatrices bounds = cov_bounds_matrix(set);

  UncertaintySetReport report;
  report.samples = samples;
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.worst_eigenvalue = std::numeric_limits<double>::infinity();

  for (const auto& lambda : simplex_samples(set.num_scenarios(), samples, seed)) {
    const Eigen::MatrixXd m = mixture_covariance_matrix(set, lambda);
    report.worst_eigenvalue = std::min(report.worst_eigenvalue, min_eigenvalue(m));
    if (!is_psd(m)) ++report.psd_failures;

    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        margin = std::min({margin, m(r, c) - bounds.lower(r, c), bounds.upper(r, c) - m(r, c)});
      }
    }
    report.worst_margin = std::min(report.worst_margin, margin);
    if (margin < -1e-9) ++report.envelope_failures;
  }
  report.passed = report.psd_failures == 0 && report.envelope_failures == 0;
  return report;
}

}  // namespace covbounds
