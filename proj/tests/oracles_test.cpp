#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "covbounds/covariance.hpp"
#include "covbounds/errors.hpp"
#include "covbounds/oracles.hpp"
#include "support/random_instances.hpp"

namespace covbounds {
namespace {

using namespace covbounds::oracle;
using testing::order_gap_pair;
using testing::opposed_pair;

TEST(UpperExpectationBilinear, Examples) {
  const PairMoments order_gap = order_gap_pair();
  for (double mu1 : {-1.0, -0.5, 0.0}) {
    for (double mu2 : {0.0, 0.5, 1.0}) {
      if (mu1 + mu2 >= 0) {
        EXPECT_NEAR(upper_expectation_bilinear(order_gap, mu1, mu2), 1 + (mu1 + 1) * mu2, 1e-12);
      }
    }
  }
  EXPECT_EQ(upper_expectation_bilinear(PairMoments({2}, {3}, {0.5}), 2, 3), 0.5);
  EXPECT_EQ(upper_expectation_bilinear(opposed_pair(), 0, 0), 1.0);
}

TEST(GridMaximin, OrderGap) {
  const auto grid = GridSpec::over_means(order_gap_pair(), 1000);
  EXPECT_NEAR(grid_maximin_cov(order_gap_pair(), grid, Nesting::kMaximin), 1.25, 1e-2);
  EXPECT_NEAR(grid_maximin_cov(order_gap_pair(), grid, Nesting::kMinimax), 1.5, 1e-2);
}

TEST(GridMaximin, OpposedLower) {
  const PairMoments flipped = opposed_pair().negate_y();
  const double v = -grid_maximin_cov(flipped, GridSpec::over_means(flipped, 1000), Nesting::kMaximin);
  EXPECT_NEAR(v, 0.75, 1e-2);
  const double swapped =
      grid_maximin_cov(opposed_pair(), GridSpec::over_means(opposed_pair(), 1000), Nesting::kMaximin, Sense::kLower);
  EXPECT_NEAR(swapped, 0.5, 1e-2);
}

TEST(GridMaximin, BadBox) {
  GridSpec g = GridSpec::over_means(order_gap_pair(), 10);
  g.x_hi = -0.5;
  EXPECT_THROW(grid_maximin_cov(order_gap_pair(), g, Nesting::kMaximin), Error);
  GridSpec small = GridSpec::over_means(order_gap_pair(), 1);
  EXPECT_THROW(grid_maximin_cov(order_gap_pair(), small, Nesting::kMaximin), Error);
}

TEST(GridMaximin, DegenerateAxisCollapses) {
  const PairMoments p({-1, -2}, {1, 1}, {-1.2, 0.4});
  EXPECT_NEAR(grid_maximin_cov(p, GridSpec::over_means(p, 50), Nesting::kMaximin), 0.4, 1e-12);
}

TEST(GridMaximinProperties, ConvergenceOrderGapAndBoxExtension) {
  testing::InstanceGenerator gen(61);
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = gen.uniform_index(1, 5);
    const PairMoments p = gen.pair(k);
    const double exact = upper_cov(p).value;
    const auto mx = mean_interval(p.a());
    const auto my = mean_interval(p.b());
    const double dd = mx.width() * my.width();

    for (int n : {10, 20, 40, 80, 160}) {
      const auto g = GridSpec::over_means(p, n);
      EXPECT_LE(std::abs(grid_maximin_cov(p, g, Nesting::kMaximin) - exact), dd / n + 1e-9);
    }
    const auto g = GridSpec::over_means(p, 200);
    const double maximin = grid_maximin_cov(p, g, Nesting::kMaximin);
    EXPECT_LE(maximin, grid_maximin_cov(p, g, Nesting::kMinimax) + 1e-12);
    const double wide = grid_maximin_cov(p, g.widened(2.0), Nesting::kMaximin);
    EXPECT_NEAR(wide, maximin, 5 * dd / 200 + 1e-9);
  }
}

TEST(GridMaximin, DeskInstancesConvergeOnDoubling) {
  const std::vector<PairMoments> desk{order_gap_pair(), opposed_pair(), opposed_pair().negate_y(),
                                      PairMoments({-1, -2}, {0, -1}, {-1.98, 2.83}),
                                      PairMoments({1, 1}, {0, -1}, {2.55, -1.98}),
                                      PairMoments({-1, -2}, {1, 1}, {-1.2, 0.4})};
  for (const auto& p : desk) {
    const double exact = upper_cov(p).value;
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 10; n <= 1280; n *= 2) {
      const double err =
          std::abs(grid_maximin_cov(p, GridSpec::over_means(p, n), Nesting::kMaximin) - exact);
      EXPECT_LE(err, previous + 1e-12);
      previous = err;
    }
    EXPECT_LE(std::abs(grid_maximin_cov(p, GridSpec::over_means(p, 1000), Nesting::kMaximin) - exact), 1e-2);
  }
}

TEST(SimplexEnvelope, Examples) {
  const PairMoments shifted({0.1, -0.1}, {0.1, -0.1}, {0.4, 0.4});
  EXPECT_NEAR(grid_simplex_envelope(shifted, 1e-3, Sense::kUpper), 0.41, 1e-3);
  EXPECT_EQ(grid_simplex_envelope(PairMoments({1}, {2}, {3}), 0.1, Sense::kUpper), 3.0);
  const PairMoments x13({-1, -2}, {0, -1}, {-1.98, 2.83});
  EXPECT_NEAR(grid_simplex_envelope(x13, 1e-4, Sense::kLower), -1.98, 1e-3);
}

TEST(SimplexEnvelope, Guards) {
  testing::InstanceGenerator gen(3);
  EXPECT_THROW(grid_simplex_envelope(gen.pair(6), 0.1, Sense::kUpper), Error);
  EXPECT_THROW(grid_simplex_envelope(gen.pair(2), 0.2, Sense::kUpper), Error);
  EXPECT_THROW(grid_simplex_envelope(gen.pair(2), 0.0, Sense::kUpper), Error);
}

TEST(SimplexLattice, CountsAndSupport) {
  std::size_t full = 0, sparse = 0;
  for_each_simplex_point(3, 10, 3, [&](std::span<const double>) { ++full; });
  for_each_simplex_point(3, 10, 2, [&](std::span<const double> w) {
    ++sparse;
    EXPECT_LE(std::count_if(w.begin(), w.end(), [](double x) { return x > 0; }), 2);
  });
  EXPECT_EQ(full, 66u);    // C(12, 2)
  EXPECT_EQ(sparse, 30u);  // 3 vertices + 3 edges x 9 interior points
}

TEST(UvMaximin, Examples) {
  UvMoments opposed{{-0.5, -0.5}, {-0.5, 0.5}, {1, 1}};
  EXPECT_NEAR(grid_uv_maximin(opposed, uv_grid(opposed, 2000)), 1.0, 1e-3);
  const auto order_gap = UvMoments::from_pair(order_gap_pair());
  EXPECT_NEAR(grid_uv_maximin(order_gap, uv_grid(order_gap, 2000)), 1.25, 1e-3);
  const PairMoments one({1.5}, {-0.5}, {0.3});
  const auto uv = UvMoments::from_pair(one);
  EXPECT_NEAR(grid_uv_maximin(uv, uv_grid(uv, 10)), 0.3, 1e-12);
}

TEST(UvMaximin, AgreesWithBilinearPath) {
  testing::InstanceGenerator gen(67);
  for (int t = 0; t < 50; ++t) {
    const PairMoments p = gen.pair(gen.uniform_index(1, 5));
    const int n = 400;
    const double bilinear = grid_maximin_cov(p, GridSpec::over_means(p, n), Nesting::kMaximin);
    const auto uv = UvMoments::from_pair(p);
    const auto g = uv_grid(uv, n);
    const double uv_value = grid_uv_maximin(uv, g);
    const auto mx = mean_interval(p.a());
    const auto my = mean_interval(p.b());
    const double res_bilinear = mx.width() * my.width() / n;
    const double wv = g.y_hi - g.y_lo;
    const double res_uv = 2 * wv * wv / n;
    EXPECT_NEAR(uv_value, bilinear, 2 * std::max(res_bilinear, res_uv) + 1e-9);
  }
}

}  // namespace
}  // namespace covbounds
