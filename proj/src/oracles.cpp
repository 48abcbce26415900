#include "covbounds/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covbounds/variance.hpp"

namespace covbounds::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> axis(double lo, double hi, int steps) {
  if (lo == hi) return {lo};
  std::vector<double> pts(static_cast<std::size_t>(steps) + 1);
  const double h = (hi - lo) / steps;
  for (int k = 0; k < steps; ++k) pts[static_cast<std::size_t>(k)] = lo + k * h;
  pts.back() = hi;
  return pts;
}

void check_axis(double lo, double hi, double need_lo, double need_hi, const char* name) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorCode::kBadBox, std::string(name) + " axis has lo > hi or non-finite ends");
  }
  const double slack = 1e-12 * (1.0 + std::abs(need_lo) + std::abs(need_hi));
  if (lo > need_lo + slack || hi < need_hi - slack) {
    throw Error(ErrorCode::kBadBox, std::string(name) + " axis does not cover the mean interval");
  }
}

void check_steps(int steps) {
  if (steps < 2) throw Error(ErrorCode::kBadBox, "grid needs at least 2 steps");
}

}  // namespace

GridSpec GridSpec::over_means(const PairMoments& p, int steps) {
  const MeanInterval mx = mean_interval(p.a());
  const MeanInterval my = mean_interval(p.b());
  return {steps, mx.lo, mx.hi, my.lo, my.hi};
}

GridSpec GridSpec::widened(double factor) const {
  if (!(factor >= 1.0)) throw Error(ErrorCode::kBadBox, "widen factor must be >= 1");
  const double cx = 0.5 * (x_lo + x_hi);
  const double cy = 0.5 * (y_lo + y_hi);
  const double hx = 0.5 * (x_hi - x_lo) * factor;
  const double hy = 0.5 * (y_hi - y_lo) * factor;
  return {steps, std::min(x_lo, cx - hx), std::max(x_hi, cx + hx), std::min(y_lo, cy - hy),
          std::max(y_hi, cy + hy)};
}

double upper_expectation_bilinear(const PairMoments& p, double mu1, double mu2) {
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  double best = -kInf;
  for (std::size_t i = 0; i < p.size(); ++i) best = std::max(best, c[i] + (a[i] - mu1) * (b[i] - mu2));
  return best;
}

double lower_expectation_bilinear(const PairMoments& p, double mu1, double mu2) {
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  double best = kInf;
  for (std::size_t i = 0; i < p.size(); ++i) best = std::min(best, c[i] + (a[i] - mu1) * (b[i] - mu2));
  return best;
}

double grid_maximin_cov(const PairMoments& p, const GridSpec& grid, Nesting order, Sense sense) {
  check_steps(grid.steps);
  const MeanInterval mx = mean_interval(p.a());
  const MeanInterval my = mean_interval(p.b());
  check_axis(grid.x_lo, grid.x_hi, mx.lo, mx.hi, "x");
  check_axis(grid.y_lo, grid.y_hi, my.lo, my.hi, "y");

  const auto xs = axis(grid.x_lo, grid.x_hi, grid.steps);
  const auto ys = axis(grid.y_lo, grid.y_hi, grid.steps);
  auto f = [&](double mu1, double mu2) {
    return sense == Sense::kUpper ? upper_expectation_bilinear(p, mu1, mu2)
                                  : lower_expectation_bilinear(p, mu1, mu2);
  };

  if (order == Nesting::kMaximin) {
    double outer = -kInf;
    for (double mu2 : ys) {
      double inner = kInf;
      for (double mu1 : xs) inner = std::min(inner, f(mu1, mu2));
      outer = std::max(outer, inner);
    }
    return outer;
  }
  double outer = kInf;
  for (double mu1 : xs) {
    double inner = -kInf;
    for (double mu2 : ys) inner = std::max(inner, f(mu1, mu2));
    outer = std::min(outer, inner);
  }
  return outer;
}

void for_each_simplex_point(std::size_t k, std::size_t divisions, std::size_t max_support,
                            const std::function<void(std::span<const double>)>& visit) {
  if (k == 0 || divisions == 0) throw Error(ErrorCode::kInvalidArgument, "empty lattice");
  std::vector<std::size_t> counts(k, 0);
  std::vector<double> lambda(k, 0.0);
  const double scale = 1.0 / static_cast<double>(divisions);

  // Depth-first over coordinates; the last coordinate takes the remainder.
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining,
                     std::size_t nonzero) -> void {
    if (pos + 1 == k) {
      if (remaining > 0 && nonzero >= max_support) return;
      counts[pos] = remaining;
      for (std::size_t i = 0; i < k; ++i) lambda[i] = static_cast<double>(counts[i]) * scale;
      visit(lambda);
      return;
    }
    const std::size_t top = nonzero >= max_support ? 0 : remaining;
    for (std::size_t c = 0; c <= top; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c, nonzero + (c > 0 ? 1 : 0));
    }
    counts[pos] = 0;
  };
  recurse(recurse, 0, divisions, 0);
}

double grid_simplex_envelope(const PairMoments& p, double step, Sense sense) {
  if (p.size() > 5) throw Error(ErrorCode::kTooManyScenarios, "simplex lattice limited to K <= 5");
  if (!(step > 0.0) || step > 0.1) {
    throw Error(ErrorCode::kInvalidArgument, "lattice step must lie in (0, 0.1]");
  }
  const auto divisions = static_cast<std::size_t>(std::llround(1.0 / step));
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();

  double best = sense == Sense::kUpper ? -kInf : kInf;
  for_each_simplex_point(p.size(), divisions, p.size(), [&](std::span<const double> w) {
    double exy = 0.0;
    double ex = 0.0;
    double ey = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      exy += w[i] * (c[i] + a[i] * b[i]);
      ex += w[i] * a[i];
      ey += w[i] * b[i];
    }
    const double v = exy - ex * ey;
    best = sense == Sense::kUpper ? std::max(best, v) : std::min(best, v);
  });
  return best;
}

UvMoments UvMoments::from_pair(const PairMoments& p) {
  UvMoments uv;
  const auto a = p.a();
  const auto b = p.b();
  const auto c = p.c();
  for (std::size_t i = 0; i < p.size(); ++i) {
    uv.mu.push_back(0.5 * (a[i] + b[i]));
    uv.nu.push_back(0.5 * (a[i] - b[i]));
    uv.kappa.push_back(c[i] + a[i] * b[i]);
  }
  return uv;
}

GridSpec uv_grid(const UvMoments& uv, int steps) {
  const MeanInterval mu = mean_interval(uv.mu);
  const MeanInterval nu = mean_interval(uv.nu);
  return {steps, mu.lo, mu.hi, nu.lo, nu.hi};
}

double grid_uv_maximin(const UvMoments& uv, const GridSpec& grid) {
  if (uv.mu.empty()) throw Error(ErrorCode::kEmptyInput, "no scenarios");
  if (uv.nu.size() != uv.mu.size() || uv.kappa.size() != uv.mu.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mu, nu and kappa lengths differ");
  }
  check_steps(grid.steps);
  const MeanInterval nu = mean_interval(uv.nu);
  check_axis(grid.y_lo, grid.y_hi, nu.lo, nu.hi, "beta");

  QuadFamily family{uv.mu, std::vector<double>(uv.mu.size())};
  double best = -kInf;
  for (double beta : axis(grid.y_lo, grid.y_hi, grid.steps)) {
    for (std::size_t i = 0; i < uv.mu.size(); ++i) {
      family.d[i] = -beta * beta + 2.0 * uv.nu[i] * beta + uv.kappa[i];
    }
    best = std::max(best, min_max_quadratic(family).value);
  }
  return best;
}

}  // namespace covbounds::oracle
