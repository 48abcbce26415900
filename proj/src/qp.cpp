#include "covbounds/qp.hpp"

#include <algorithm>
#include <cmath>

#include "covbounds/covariance.hpp"
#include "covbounds/errors.hpp"
#include "covbounds/tolerance.hpp"

namespace covbounds {

namespace {

void check(const BilinearQp& qp) {
  if (qp.m.empty()) throw Error(ErrorCode::kEmptyInput, "empty quadratic program");
  if (qp.n.size() != qp.m.size() || qp.k.size() != qp.m.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "m, n and k must have equal length");
  }
  for (const auto* v : {&qp.m, &qp.n, &qp.k}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite QP coefficient");
    }
  }
}

}  // namespace

QpSolution solve(const BilinearQp& qp) {
  check(qp);
  const auto& mu = qp.m;
  const auto& nu = qp.n;
  const auto& kappa = qp.k;
  const std::size_t size = qp.size();

  // Vertex values kappa_i - mu_i nu_i.
  std::size_t i0 = 0;
  std::size_t j0 = 0;
  bool pair = false;
  double best = kappa[0] - mu[0] * nu[0];
  for (std::size_t i = 1; i < size; ++i) {
    const double v = kappa[i] - mu[i] * nu[i];
    if (tol::strictly_greater(v, best)) {
      best = v;
      i0 = i;
    }
  }

  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      if (tol::nearly_equal(mu[i], mu[j]) || tol::nearly_equal(nu[i], nu[j])) continue;
      const double ci = kappa[i] - mu[i] * nu[i];
      const double dc = kappa[j] - mu[j] * nu[j] - ci;
      const double lo = std::min(nu[i], nu[j]);
      const double hi = std::max(nu[i], nu[j]);
      const double x = std::clamp(dc / (2.0 * (mu[j] - mu[i])) + 0.5 * (nu[i] + nu[j]), lo, hi);
      const double q =
          ((x - nu[i]) * (x - nu[j]) * (mu[i] - mu[j]) + (x - nu[i]) * dc) / (nu[j] - nu[i]) + ci;
      if (tol::strictly_greater(q, best)) {
        best = q;
        i0 = i;
        j0 = j;
        pair = true;
      }
    }
  }

  QpSolution sol;
  sol.value = best;
  sol.lambda.assign(size, 0.0);
  if (!pair) {
    sol.lambda[i0] = 1.0;
    sol.support = {i0};
    return sol;
  }
  const double dc = kappa[j0] - mu[j0] * nu[j0] - kappa[i0] + mu[i0] * nu[i0];
  const double li =
      std::clamp(0.5 - dc / (2.0 * (mu[j0] - mu[i0]) * (nu[j0] - nu[i0])), 0.0, 1.0);
  sol.lambda[i0] = li;
  sol.lambda[j0] = 1.0 - li;
  for (std::size_t idx : {i0, j0}) {
    if (sol.lambda[idx] > 0.0) sol.support.push_back(idx);
  }
  return sol;
}

double objective(const BilinearQp& qp, std::span<const double> lambda) {
  check(qp);
  require_simplex(lambda, qp.size());
  double lk = 0.0;
  double lm = 0.0;
  double ln = 0.0;
  for (std::size_t i = 0; i < qp.size(); ++i) {
    lk += lambda[i] * qp.k[i];
    lm += lambda[i] * qp.m[i];
    ln += lambda[i] * qp.n[i];
  }
  return lk - lm * ln;
}

QMatrix q_matrix(const BilinearQp& qp) {
  check(qp);
  const auto size = static_cast<Eigen::Index>(qp.size());
  const Eigen::Map<const Eigen::VectorXd> m(qp.m.data(), size);
  const Eigen::Map<const Eigen::VectorXd> n(qp.n.data(), size);

  QMatrix out;
  out.q = 0.5 * (m * n.transpose() + n * m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.q, Eigen::EigenvaluesOnly);
  const double band = 1e-9 * (1.0 + std::abs(out.q.trace()));
  for (double ev : solver.eigenvalues()) {
    if (ev > band) {
      ++out.inertia.positive;
    } else if (ev < -band) {
      ++out.inertia.negative;
    } else {
      ++out.inertia.zero;
    }
  }
  return out;
}

}  // namespace covbounds
