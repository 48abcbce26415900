#include <gtest/gtest.h>

#include "covbounds/covariance.hpp"
#include "covbounds/errors.hpp"
#include "covbounds/matrices.hpp"
#include "covbounds/oracles.hpp"
#include "covbounds/variance.hpp"
#include "support/random_instances.hpp"

namespace covbounds {
namespace {

using testing::trivariate_set;
using testing::permissive;

TEST(CovBoundsMatrix, TrivariateUpper) {
  const auto m = cov_bounds_matrix(validate(trivariate_set(), permissive()));
  Eigen::Matrix3d expected;
  expected << 2.25, 0.40, 2.83, 0.40, 2.00, 2.55, 2.83, 2.55, 4.25;
  EXPECT_LE((m.upper - expected).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_FALSE(is_psd(m.upper));
}

TEST(CovBoundsMatrix, TrivariateLower) {
  const ScenarioSet set = validate(trivariate_set(), permissive());
  const auto m = cov_bounds_matrix(set);
  EXPECT_NEAR(m.lower(0, 0), 2.0, 1e-9);
  EXPECT_NEAR(m.lower(1, 1), 2.0, 1e-9);
  EXPECT_NEAR(m.lower(2, 2), 4.0, 1e-9);
  // Off-diagonals come from the simplex lattice oracle.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double grid =
          oracle::grid_simplex_envelope(extract_pair(set, i, j), 1e-4, oracle::Sense::kLower);
      EXPECT_NEAR(m.lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), grid, 1e-3);
    }
  }
  EXPECT_NEAR(m.lower(0, 1), -1.20, 1e-9);
  EXPECT_NEAR(m.lower(0, 2), -1.98, 1e-9);
  EXPECT_NEAR(m.lower(1, 2), -1.98, 1e-9);
}

TEST(CovBoundsMatrix, SingleScenarioCollapses) {
  testing::InstanceGenerator gen(5);
  const ScenarioSet set = validate(gen.scenario_set(4, 1));
  const auto m = cov_bounds_matrix(set);
  EXPECT_LE((m.upper - set.scenarios[0].cov).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((m.lower - set.scenarios[0].cov).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CovBoundsMatrix, StructuralInvariants) {
  testing::InstanceGenerator gen(6);
  for (int t = 0; t < 30; ++t) {
    const ScenarioSet set = validate(gen.scenario_set(4, gen.uniform_index(1, 5)));
    const auto m = cov_bounds_matrix(set);
    EXPECT_EQ(m.upper, m.upper.transpose());
    EXPECT_EQ(m.lower, m.lower.transpose());
    EXPECT_TRUE(((m.upper - m.lower).array() >= -1e-12).all());
    for (std::size_t i = 0; i < 4; ++i) {
      const auto mu = scenario_means(set, i);
      const auto d = scenario_second_moments(set, i);
      const auto ii = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(m.upper(ii, ii), upper_variance(mu, d).value, 1e-12);
      EXPECT_NEAR(m.lower(ii, ii), lower_variance(mu, d).value, 1e-12);
    }
  }
}

TEST(CovBoundsMatrix, PermutingVariablesPermutesBounds) {
  testing::InstanceGenerator gen(8);
  const ScenarioSet set = validate(gen.scenario_set(3, 4));
  ScenarioSet perm = set;
  Eigen::PermutationMatrix<3> pm;
  pm.indices() << 2, 0, 1;
  perm.variable_names = {set.variable_names[1], set.variable_names[2], set.variable_names[0]};
  for (auto& s : perm.scenarios) {
    s.mean = pm.transpose() * s.mean;
    s.cov = pm.transpose() * s.cov * pm;
  }
  const auto a = cov_bounds_matrix(set);
  const auto b = cov_bounds_matrix(perm);
  const Eigen::MatrixXd up = pm.transpose() * a.upper * pm;
  const Eigen::MatrixXd lo = pm.transpose() * a.lower * pm;
  EXPECT_LE((b.upper - up).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((b.lower - lo).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(Eigen::MatrixXd::Identity(3, 3)));
  Eigen::Matrix2d m;
  m << 1, 2, 2, 1;
  EXPECT_FALSE(is_psd(m));
  m << 1, 2, 2.5, 1;
  EXPECT_THROW(is_psd(m), Error);
  EXPECT_THROW(is_psd(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(MixtureCovarianceMatrix, Examples) {
  const ScenarioSet set = validate(trivariate_set(), permissive());
  const std::vector<double> half{0.5, 0.5};
  const Eigen::MatrixXd m = mixture_covariance_matrix(set, half);
  EXPECT_NEAR(m(0, 1), -0.40, 1e-12);
  EXPECT_NEAR(m(0, 0), 2.25, 1e-12);
  const std::vector<double> e0{1, 0};
  EXPECT_LE((mixture_covariance_matrix(set, e0) - set.scenarios[0].cov).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(mixture_covariance_matrix(set, std::vector<double>{0.3, 0.3}), Error);
}

TEST(SimplexSamples, DeterministicAndOnSimplex) {
  const auto a = simplex_samples(4, 100, 99);
  const auto b = simplex_samples(4, 100, 99);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, simplex_samples(4, 100, 100));
  for (const auto& w : a) {
    double total = 0;
    for (double x : w) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(UncertaintySet, RandomSetsPass) {
  testing::InstanceGenerator gen(12);
  for (int t = 0; t < 10; ++t) {
    const auto r = uncertainty_set_check(validate(gen.scenario_set(3, 3)), 1000);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.samples, 1000u);
    EXPECT_GE(r.worst_margin, -1e-9);
  }
}

TEST(UncertaintySet, SingleScenarioPasses) {
  testing::InstanceGenerator gen(13);
  EXPECT_TRUE(uncertainty_set_check(validate(gen.scenario_set(3, 1)), 50).passed);
}

// Sigma_2 of the trivariate set is indefinite, so mixtures near it are too; the
// entrywise envelope still holds.
TEST(UncertaintySet, TrivariateEnvelopeHoldsPsdDoesNot) {
  const auto r = uncertainty_set_check(validate(trivariate_set(), permissive()), 1000);
  EXPECT_EQ(r.envelope_failures, 0u);
  EXPECT_GE(r.worst_margin, -1e-9);
  EXPECT_GT(r.psd_failures, 0u);
  EXPECT_FALSE(r.passed);
}

TEST(UncertaintySet, ZeroSamplesRejected) {
  testing::InstanceGenerator gen(14);
  EXPECT_THROW(uncertainty_set_check(validate(gen.scenario_set(2, 2)), 0), Error);
}

}  // namespace
}  // namespace covbounds
