#include "covbounds/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covbounds/covariance.hpp"
#include "covbounds/oracles.hpp"
#include "covbounds/qp.hpp"
#include "covbounds/variance.hpp"

namespace covbounds {

InvariantCheck check_le(std::string name, double lhs, double rhs) {
  const bool ok = lhs <= rhs + 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
  return {std::move(name), ok, lhs, rhs};
}

InvariantCheck check_close(std::string name, double lhs, double rhs, double rel) {
  const bool ok = std::abs(lhs - rhs) <= rel * (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
  return {std::move(name), ok, lhs, rhs};
}

bool InvariantReport::passed() const { return failures() == 0; }

std::size_t InvariantReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

namespace {

// Moments of a linear combination s X_i + t X_j under each scenario.
struct Combination {
  std::vector<double> mean;
  std::vector<double> second;
};

Combination combine(const ScenarioSet& set, std::size_t i, std::size_t j, double s, double t) {
  Combination out;
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  for (const auto& sc : set.scenarios) {
    const double m = s * sc.mean(ii) + t * sc.mean(jj);
    const double v = s * s * sc.cov(ii, ii) + t * t * sc.cov(jj, jj) + 2.0 * s * t * sc.cov(ii, jj);
    out.mean.push_back(m);
    out.second.push_back(std::max(v, 0.0) + m * m);
  }
  return out;
}

std::string tag(const ScenarioSet& set, std::size_t i, std::size_t j) {
  return "(" + set.variable_names[i] + "," + set.variable_names[j] + ")";
}

void variable_checks(const ScenarioSet& set, std::size_t i, InvariantReport& report) {
  const auto& name = set.variable_names[i];
  const auto means = scenario_means(set, i);
  const auto second = scenario_second_moments(set, i);
  const BoundResult up = upper_variance(means, second);
  const BoundResult lo = lower_variance(means, second);

  double min_var = std::numeric_limits<double>::infinity();
  double max_var = -min_var;
  for (std::size_t k = 0; k < means.size(); ++k) {
    min_var = std::min(min_var, second[k] - means[k] * means[k]);
    max_var = std::max(max_var, second[k] - means[k] * means[k]);
  }
  report.checks.push_back(check_le("lower_variance<=min_scenario_variance(" + name + ")", lo.value, min_var));
  report.checks.push_back(check_le("max_scenario_variance<=upper_variance(" + name + ")", max_var, up.value));

  const PairMoments diag = extract_pair(set, i, i);
  report.checks.push_back(check_close("diagonal_upper(" + name + ")", upper_cov(diag).value, up.value, 1e-9));
  report.checks.push_back(check_close("diagonal_lower(" + name + ")", lower_cov(diag).value, lo.value, 1e-9));
}

void pair_checks(const ScenarioSet& set, std::size_t i, std::size_t j,
                 const InvariantOptions& options, InvariantReport& report) {
  const std::string t = tag(set, i, j);
  const std::size_t k = set.num_scenarios();
  const PairMoments p = extract_pair(set, i, j);
  const BoundResult up = upper_cov(p);
  const BoundResult lo = lower_cov(p);
  auto& out = report.checks;

  const PairMoments flipped = extract_pair(set, j, i);
  out.push_back(check_close("symmetry_upper" + t, upper_cov(flipped).value, up.value, 1e-12));
  out.push_back(check_close("symmetry_lower" + t, lower_cov(flipped).value, lo.value, 1e-12));

  out.push_back(check_close("witness_upper" + t, mixture_cov(p, up.witness.weights(k)), up.value, 1e-9));
  out.push_back(check_close("witness_lower" + t, mixture_cov(p, lo.witness.weights(k)), lo.value, 1e-9));

  double mix_hi = -std::numeric_limits<double>::infinity();
  double mix_lo = std::numeric_limits<double>::infinity();
  auto visit = [&](std::span<const double> w) {
    const double v = mixture_cov(p, w);
    mix_hi = std::max(mix_hi, v);
    mix_lo = std::min(mix_lo, v);
  };
  for (std::size_t s = 0; s < k; ++s) visit(Witness::single(s).weights(k));
  for (const auto& w : simplex_samples(k, options.samples, options.seed)) visit(w);
  out.push_back(check_le("envelope_upper" + t, mix_hi, up.value));
  out.push_back(check_le("envelope_lower" + t, lo.value, mix_lo));
  out.push_back(check_le("lower<=upper" + t, lo.value, up.value));

  const auto mx = scenario_means(set, i);
  const auto my = scenario_means(set, j);
  const double vx = upper_variance(mx, scenario_second_moments(set, i)).value;
  const double vy = upper_variance(my, scenario_second_moments(set, j)).value;
  const double vx_lo = lower_variance(mx, scenario_second_moments(set, i)).value;
  const double vy_lo = lower_variance(my, scenario_second_moments(set, j)).value;
  out.push_back(check_le("cauchy_schwarz" + t, std::abs(up.value), std::sqrt(std::max(vx * vy, 0.0))));

  const Combination u = combine(set, i, j, 0.5, 0.5);
  const Combination v = combine(set, i, j, 0.5, -0.5);
  out.push_back(check_le("uv_sandwich_lower" + t,
                         lower_variance(u.mean, u.second).value - upper_variance(v.mean, v.second).value,
                         lo.value));
  out.push_back(check_le("uv_sandwich_upper" + t, up.value,
                         upper_variance(u.mean, u.second).value - lower_variance(v.mean, v.second).value));

  const Combination sum = combine(set, i, j, 1.0, 1.0);
  out.push_back(check_le("sum_variance_upper" + t, upper_variance(sum.mean, sum.second).value,
                         vx + vy + 2.0 * up.value));
  out.push_back(check_le("sum_variance_lower" + t, vx_lo + vy_lo + 2.0 * lo.value,
                         lower_variance(sum.mean, sum.second).value));

  const BoundsReport br = bounds_report(p);
  const MeanInterval ix = mean_interval(p.a());
  const MeanInterval iy = mean_interval(p.b());
  const double dd = br.delta_x * br.delta_y;
  struct Corner {
    double mu1, mu2;
    bool aligned;
  };
  const Corner corners[] = {
      {ix.hi, iy.hi, true}, {ix.lo, iy.lo, true}, {ix.lo, iy.hi, false}, {ix.hi, iy.lo, false}};
  for (const auto& c : corners) {
    const double eu = oracle::upper_expectation_bilinear(p, c.mu1, c.mu2);
    const double el = oracle::lower_expectation_bilinear(p, c.mu1, c.mu2);
    const double slack_below = c.aligned ? 0.0 : dd;
    out.push_back(check_le("endpoint_upper_low" + t, up.value - slack_below, eu));
    out.push_back(check_le("endpoint_upper_high" + t, eu, up.value + dd));
    out.push_back(check_le("endpoint_lower_low" + t, lo.value - slack_below, el));
    out.push_back(check_le("endpoint_lower_high" + t, el, lo.value + dd));
  }
  const double exy_hi = oracle::upper_expectation_bilinear(p, 0.0, 0.0);
  const double exy_lo = oracle::lower_expectation_bilinear(p, 0.0, 0.0);
  out.push_back(check_le("product_upper_low" + t, up.value + br.m_lower, exy_hi));
  out.push_back(check_le("product_upper_high" + t, exy_hi, up.value + br.m_upper));
  out.push_back(check_le("product_lower_low" + t, lo.value + br.m_lower, exy_lo));
  out.push_back(check_le("product_lower_high" + t, exy_lo, lo.value + br.m_upper));

  out.push_back(check_le("bracket_upper_low" + t, br.bracket_low, up.value));
  out.push_back(check_le("bracket_upper_high" + t, up.value, br.bracket_high));
  out.push_back(check_le("bracket_lower_low" + t, br.lower_bracket_low, lo.value));
  out.push_back(check_le("bracket_lower_high" + t, lo.value, br.lower_bracket_high));
  out.push_back(check_le("gap_bound" + t, up.value - lo.value, br.gap_bound));

  std::vector<double> kappa(k);
  for (std::size_t s = 0; s < k; ++s) kappa[s] = p.c()[s] + p.a()[s] * p.b()[s];
  const BilinearQp qp{{p.a().begin(), p.a().end()}, {p.b().begin(), p.b().end()}, kappa};
  out.push_back(check_close("qp_agreement" + t, solve(qp).value, up.value, 1e-9));

  // Grid maximin error is at most width(M_X) width(M_Y) / N.
  const auto grid = oracle::GridSpec::over_means(p, options.grid_steps);
  const double g = oracle::grid_maximin_cov(p, grid, oracle::Nesting::kMaximin);
  const double g_bound = dd / options.grid_steps;
  out.push_back(check_le("grid_maximin" + t, std::abs(g - up.value), g_bound + 1e-9 * (1.0 + std::abs(up.value))));
}

void triple_checks(const ScenarioSet& set, std::size_t i, std::size_t j, std::size_t z,
                   InvariantReport& report) {
  const std::size_t k = set.num_scenarios();
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  const auto zz = static_cast<Eigen::Index>(z);
  std::vector<double> a(k), b(k), c(k);
  for (std::size_t s = 0; s < k; ++s) {
    const auto& sc = set.scenarios[s];
    a[s] = sc.mean(ii) + sc.mean(jj);
    b[s] = sc.mean(zz);
    c[s] = sc.cov(ii, zz) + sc.cov(jj, zz);
  }
  const PairMoments sum_z(a, b, c);
  const PairMoments iz = extract_pair(set, i, z);
  const PairMoments jz = extract_pair(set, j, z);
  const std::string t = "(" + set.variable_names[i] + "+" + set.variable_names[j] + "," +
                        set.variable_names[z] + ")";
  report.checks.push_back(check_le("subadditive_upper" + t, upper_cov(sum_z).value,
                                   upper_cov(iz).value + upper_cov(jz).value));
  report.checks.push_back(check_le("superadditive_lower" + t,
                                   lower_cov(iz).value + lower_cov(jz).value,
                                   lower_cov(sum_z).value));
}

}  // namespace

InvariantReport run_invariants(const ScenarioSet& set, const InvariantOptions& options) {
  InvariantReport report;
  const std::size_t n = set.num_variables();
  for (std::size_t i = 0; i < n; ++i) variable_checks(set, i, report);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pair_checks(set, i, j, options, report);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t z = 0; z < n; ++z) {
        if (z != i && z != j) triple_checks(set, i, j, z, report);
      }
    }
  }

  const UncertaintySetReport us = uncertainty_set_check(set, options.samples, options.seed);
  report.checks.push_back({"uncertainty_set_psd", us.psd_failures == 0, us.worst_eigenvalue, 0.0});
  report.checks.push_back(
      {"uncertainty_set_envelope", us.envelope_failures == 0, us.worst_margin, -1e-9});
  return report;
}

}  // namespace covbounds
