#include <gtest/gtest.h>

#include "covbounds/invariants.hpp"
#include "support/random_instances.hpp"

namespace covbounds {
namespace {

TEST(CheckHelpers, Slack) {
  EXPECT_TRUE(check_le("x", 1.0 + 1e-10, 1.0).passed);
  EXPECT_FALSE(check_le("x", 1.0 + 1e-6, 1.0).passed);
  EXPECT_TRUE(check_close("x", 100.0, 100.0 + 1e-8, 1e-9).passed);
  EXPECT_FALSE(check_close("x", 0.0, 1e-6, 1e-9).passed);
}

TEST(RunInvariants, RandomSetsPass) {
  testing::InstanceGenerator gen(91);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = gen.uniform_index(1, 4);
    const std::size_t k = gen.uniform_index(1, 6);
    const ScenarioSet set = validate(gen.scenario_set(n, k));
    const InvariantReport report = run_invariants(set, {200, kDefaultSampleSeed, 100});
    for (const auto& c : report.checks) {
      EXPECT_TRUE(c.passed) << c.name << ": " << c.lhs << " vs " << c.rhs;
    }
  }
}

TEST(RunInvariants, TrivariateFailsOnlyThePsdCheck) {
  const ScenarioSet set = validate(testing::trivariate_set(), testing::permissive());
  const InvariantReport report = run_invariants(set);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.failures(), 1u);
  for (const auto& c : report.checks) {
    if (!c.passed) EXPECT_EQ(c.name, "uncertainty_set_psd");
  }
}

}  // namespace
}  // namespace covbounds
