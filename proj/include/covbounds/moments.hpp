#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "covbounds/errors.hpp"

namespace covbounds {

/// First and second central moments of the random vector under one scenario.
struct ScenarioMoments {
  std::string label;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// K scenarios over n named variables. Run `validate` before handing a set to
/// the bound computations.
struct ScenarioSet {
  std::vector<std::string> variable_names;
  std::vector<ScenarioMoments> scenarios;

  std::size_t num_variables() const { return variable_names.size(); }
  std::size_t num_scenarios() const { return scenarios.size(); }
};

/// Per-scenario (E[X], E[Y], Cov(X, Y)) for one variable pair.
class PairMoments {
 public:
  /// Throws kEmptyInput, kDimensionMismatch or kNonFinite.
  PairMoments(std::vector<double> a, std::vector<double> b, std::vector<double> c);

  std::span<const double> a() const { return a_; }
  std::span<const double> b() const { return b_; }
  std::span<const double> c() const { return c_; }
  std::size_t size() const { return a_.size(); }

  /// Moments of (X, -Y): b and c change sign.
  PairMoments negate_y() const;
  /// Moments of (Y, X).
  PairMoments swapped() const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
};

/// Mean-uncertainty interval [lower mean, upper mean].
struct MeanInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Mixture achieving a bound: a single scenario, or weight `lambda` on
/// scenario `i` and `1 - lambda` on scenario `j`.
struct Witness {
  enum class Kind { kSingleScenario, kPair };

  Kind kind = Kind::kSingleScenario;
  std::size_t i = 0;
  std::size_t j = 0;
  double lambda = 1.0;

  static Witness single(std::size_t i) { return {Kind::kSingleScenario, i, i, 1.0}; }
  static Witness pair(std::size_t i, std::size_t j, double lambda) {
    return {Kind::kPair, i, j, lambda};
  }

  bool is_pair() const { return kind == Kind::kPair; }
  /// Dense weight vector on the K-simplex.
  std::vector<double> weights(std::size_t k) const;
};

struct BoundResult {
  double value = 0.0;
  Witness witness;
};

struct ValidationOptions {
  bool allow_non_psd = false;
  // Receives downgraded NotPSD diagnostics when allow_non_psd is set.
  std::function<void(std::string_view)> on_warning;
};

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-9;

/// Checks shape, finiteness, name uniqueness, symmetry and positive
/// semi-definiteness. Returns a copy with every covariance matrix replaced by
/// (S + S^T) / 2.
ScenarioSet validate(ScenarioSet set, const ValidationOptions& options = {});

PairMoments extract_pair(const ScenarioSet& set, std::size_t i, std::size_t j);

MeanInterval mean_interval(std::span<const double> means);

/// Per-scenario means and E[X^2] of variable i.
std::vector<double> scenario_means(const ScenarioSet& set, std::size_t i);
std::vector<double> scenario_second_moments(const ScenarioSet& set, std::size_t i);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace covbounds
