#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "covbounds/covariance.hpp"
#include "covbounds/errors.hpp"
#include "covbounds/oracles.hpp"
#include "covbounds/variance.hpp"
#include "support/random_instances.hpp"

namespace covbounds {
namespace {

TEST(MinMaxQuadratic, ShiftedFamily) {
  const MinMaxResult r = min_max_quadratic({{0.1, -0.1}, {0.41, 0.41}});
  EXPECT_NEAR(r.value, 0.41, 1e-12);
  EXPECT_NEAR(r.argmin, 0.0, 1e-12);
  EXPECT_TRUE(r.term.is_pair);
}

TEST(MinMaxQuadratic, SingleParabola) {
  const MinMaxResult r = min_max_quadratic({{0.0}, {1.0}});
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.argmin, 0.0);
  EXPECT_FALSE(r.term.is_pair);
}

TEST(MinMaxQuadratic, DominatedVertex) {
  // max(a^2 + 1, a^2 - 2a + 1) is minimised at a = 0.
  const MinMaxResult r = min_max_quadratic({{0.0, 1.0}, {1.0, 1.0}});
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.argmin, 0.0, 1e-12);
}

TEST(MinMaxQuadratic, MatchesFineAlphaGrid) {
  testing::InstanceGenerator gen(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = gen.uniform_index(1, 5);
    QuadFamily f{gen.vector(k, -2, 2), gen.vector(k, -1, 3)};
    const MinMaxResult r = min_max_quadratic(f);
    // The envelope is convex; scan a fine grid around the mean range.
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= 40000; ++s) {
      const double a = -2.0 + 4.0 * s / 40000.0;
      double env = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) env = std::max(env, a * a - 2 * f.mu[i] * a + f.d[i]);
      best = std::min(best, env);
    }
    // Envelope slope is at most 8 on the scan interval, spacing 1e-4.
    EXPECT_LE(r.value, best + 1e-9);
    EXPECT_NEAR(r.value, best, 8e-4);
  }
}

TEST(MinMaxQuadratic, EmptyInput) {
  EXPECT_THROW(min_max_quadratic({{}, {}}), Error);
}

TEST(UpperVariance, Shifted) {
  const std::vector<double> mu{0.1, -0.1}, d{0.41, 0.41};
  const BoundResult r = upper_variance(mu, d);
  EXPECT_NEAR(r.value, 0.41, 1e-9);
  ASSERT_TRUE(r.witness.is_pair());
  EXPECT_NEAR(r.witness.lambda, 0.5, 1e-12);
}

TEST(UpperVariance, TrivariateFirstVariable) {
  const std::vector<double> mu{-1, -2}, d{3, 6};
  EXPECT_NEAR(upper_variance(mu, d).value, 2.25, 1e-9);
}

TEST(UpperVariance, SingleScenario) {
  const std::vector<double> mu{2}, d{7};
  const BoundResult r = upper_variance(mu, d);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_FALSE(r.witness.is_pair());
}

TEST(LowerVariance, Examples) {
  const std::vector<double> shifted_mu{0.1, -0.1}, shifted_d{0.41, 0.41};
  EXPECT_NEAR(lower_variance(shifted_mu, shifted_d).value, 0.4, 1e-9);
  EXPECT_EQ(lower_variance(shifted_mu, shifted_d).witness.i, 0u);  // tie goes to the first scenario

  const std::vector<double> one_mu{1}, one_d{3};
  EXPECT_NEAR(lower_variance(one_mu, one_d).value, 2.0, 1e-12);

  const std::vector<double> x3_mu{0, -1}, x3_d{4, 5};
  EXPECT_NEAR(lower_variance(x3_mu, x3_d).value, 4.0, 1e-9);
}

TEST(Variance, NegativeVarianceRejected) {
  const std::vector<double> mu{1, 0}, d{0.5, 1};
  EXPECT_THROW(upper_variance(mu, d), Error);
  EXPECT_THROW(lower_variance(mu, d), Error);
}

TEST(Variance, VarianceWrappersAgree) {
  const std::vector<double> mu{-1, -2}, var{2, 2};
  EXPECT_NEAR(upper_variance_from_variances(mu, var).value, 2.25, 1e-12);
  EXPECT_NEAR(lower_variance_from_variances(mu, var).value, 2.0, 1e-12);
}

TEST(VarianceProperties, SandwichTranslationScale) {
  testing::InstanceGenerator gen(23);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = gen.uniform_index(1, 6);
    const auto mu = gen.vector(k, -3, 3);
    const auto var = gen.vector(k, 0, 4);
    std::vector<double> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = var[i] + mu[i] * mu[i];

    const double up = upper_variance(mu, d).value;
    const double lo = lower_variance(mu, d).value;
    EXPECT_NEAR(lo, *std::min_element(var.begin(), var.end()), 1e-12);
    EXPECT_GE(up + 1e-12, *std::max_element(var.begin(), var.end()));

    const double shift = gen.uniform(-5, 5);
    std::vector<double> mu_t(k), d_t(k);
    for (std::size_t i = 0; i < k; ++i) {
      mu_t[i] = mu[i] + shift;
      d_t[i] = d[i] + 2 * shift * mu[i] + shift * shift;
    }
    EXPECT_NEAR(upper_variance(mu_t, d_t).value, up, 1e-9 * (1 + std::abs(up)));
    EXPECT_NEAR(lower_variance(mu_t, d_t).value, lo, 1e-9 * (1 + std::abs(lo)));

    const double s = gen.uniform(-3, 3);
    std::vector<double> mu_s(k), d_s(k);
    for (std::size_t i = 0; i < k; ++i) {
      mu_s[i] = s * mu[i];
      d_s[i] = s * s * d[i];
    }
    EXPECT_NEAR(upper_variance(mu_s, d_s).value, s * s * up, 1e-9 * (1 + s * s * up));
    EXPECT_NEAR(lower_variance(mu_s, d_s).value, s * s * lo, 1e-9 * (1 + s * s * lo));
  }
}

TEST(VarianceProperties, WitnessReproducesValue) {
  testing::InstanceGenerator gen(29);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = gen.uniform_index(1, 6);
    const auto mu = gen.vector(k, -3, 3);
    const auto var = gen.vector(k, 0, 4);
    std::vector<double> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = var[i] + mu[i] * mu[i];
    const BoundResult up = upper_variance(mu, d);
    const auto w = up.witness.weights(k);
    double m = 0, second = 0;
    for (std::size_t i = 0; i < k; ++i) {
      m += w[i] * mu[i];
      second += w[i] * d[i];
    }
    EXPECT_NEAR(second - m * m, up.value, 1e-9 * (1 + std::abs(up.value)));
  }
}

// Variance is the diagonal covariance, so the simplex envelope is the oracle.
TEST(VarianceProperties, SimplexOracleEquivalence) {
  testing::InstanceGenerator gen(31);
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = gen.uniform_index(1, 4);
    const auto mu = gen.vector(k, -2, 2);
    const auto var = gen.vector(k, 0, 3);
    std::vector<double> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = var[i] + mu[i] * mu[i];
    const PairMoments diag(mu, mu, var);
    const double up = upper_variance(mu, d).value;
    if (k <= 3) {
      EXPECT_NEAR(oracle::grid_simplex_envelope(diag, 1e-3, oracle::Sense::kUpper), up, 1e-3);
      continue;
    }
    // K = 4: every two-scenario edge at step 1e-3 plus the full lattice at 1/50.
    double grid = -std::numeric_limits<double>::infinity();
    auto visit = [&](std::span<const double> w) { grid = std::max(grid, mixture_cov(diag, w)); };
    oracle::for_each_simplex_point(k, 1000, 2, visit);
    oracle::for_each_simplex_point(k, 50, k, visit);
    EXPECT_LE(grid, up + 1e-9);
    EXPECT_NEAR(grid, up, 1e-3);
  }
}

}  // namespace
}  // namespace covbounds
