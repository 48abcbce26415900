#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace covbounds {

/// max over the K-simplex of  lambda^T k - (lambda^T m)(lambda^T n).
///
/// The quadratic part is lambda^T Q lambda with Q = (m n^T + n m^T) / 2,
/// which is indefinite in general, so generic convex QP machinery does not
/// apply. Reading m, n and k as per-scenario E[X], E[Y] and E[XY] turns the
/// objective into the covariance of a scenario mixture, and the maximum is
/// then attained on at most two scenarios.
struct BilinearQp {
  std::vector<double> m;
  std::vector<double> n;
  std::vector<double> k;

  std::size_t size() const { return m.size(); }
};

struct QpSolution {
  double value = 0.0;
  std::vector<double> lambda;
  std::vector<std::size_t> support;
};

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

struct QMatrix {
  Eigen::MatrixXd q;
  Inertia inertia;
};

/// Exact optimum and an optimiser supported on at most two indices.
/// Throws kEmptyInput, kDimensionMismatch or kNonFinite.
QpSolution solve(const BilinearQp& qp);

/// Throws kNotOnSimplex when lambda is off the simplex.
double objective(const BilinearQp& qp, std::span<const double> lambda);

/// Q and its eigenvalue sign counts (zero band 1e-9 (1 + |trace|)).
QMatrix q_matrix(const BilinearQp& qp);

}  // namespace covbounds
