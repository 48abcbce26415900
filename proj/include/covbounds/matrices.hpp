#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "covbounds/moments.hpp"

namespace covbounds {

struct CovarianceBoundMatrices {
  Eigen::MatrixXd upper;
  Eigen::MatrixXd lower;
  // Row-major n x n tables; entry (i, j) witnesses upper(i, j) / lower(i, j).
  std::vector<Witness> upper_witnesses;
  std::vector<Witness> lower_witnesses;

  std::size_t size() const { return static_cast<std::size_t>(upper.rows()); }
  const Witness& upper_witness(std::size_t i, std::size_t j) const {
    return upper_witnesses[i * size() + j];
  }
  const Witness& lower_witness(std::size_t i, std::size_t j) const {
    return lower_witnesses[i * size() + j];
  }
};

/// Entrywise upper/lower covariance over all variable pairs; the diagonal
/// holds upper/lower variances. Expects a validated set.
CovarianceBoundMatrices cov_bounds_matrix(const ScenarioSet& set);

/// Sign decision: smallest eigenvalue >= -1e-9 (1 + |trace|).
/// Throws kNonSymmetric when m is not symmetric within 1e-9.
bool is_psd(const Eigen::MatrixXd& m);

/// Covariance matrix of the mixture sum_k lambda_k P_k.
Eigen::MatrixXd mixture_covariance_matrix(const ScenarioSet& set, std::span<const double> lambda);

/// Deterministic, low-discrepancy points on the K-simplex (Kronecker
/// sequence mapped through normalised exponential spacings, rotated by a
/// seed-dependent shift).
std::vector<std::vector<double>> simplex_samples(std::size_t k, std::size_t count,
                                                 std::uint64_t seed);

struct UncertaintySetReport {
  bool passed = true;
  std::size_t samples = 0;
  std::size_t psd_failures = 0;
  std::size_t envelope_failures = 0;
  // min over samples and entries of min(c - lower, upper - c); >= -1e-9 on pass.
  double worst_margin = 0.0;
  // Smallest eigenvalue seen across sampled mixture matrices.
  double worst_eigenvalue = 0.0;
};

inline constexpr std::uint64_t kDefaultSampleSeed = 20240521;

UncertaintySetReport uncertainty_set_check(const ScenarioSet& set, std::size_t samples,
                                           std::uint64_t seed = kDefaultSampleSeed);

}  // namespace covbounds
