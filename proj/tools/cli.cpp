#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "covbounds/covariance.hpp"
#include "covbounds/estimation.hpp"
#include "covbounds/invariants.hpp"
#include "covbounds/io.hpp"
#include "covbounds/oracles.hpp"
#include "covbounds/qp.hpp"
#include "covbounds/variance.hpp"

namespace covbounds::cli {

namespace {

using nlohmann::json;

// Raised for configuration problems that are not library errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> scenario_labels(const ScenarioSet& set) {
  std::vector<std::string> labels;
  for (const auto& s : set.scenarios) labels.push_back(s.label);
  return labels;
}

ScenarioSet load_set(const RunConfig& config, std::string& diagnostics) {
  if (config.input.empty()) throw UsageError("--input is required");
  ValidationOptions options;
  options.allow_non_psd = config.allow_non_psd;
  options.on_warning = [&](std::string_view msg) {
    diagnostics += "warning: " + std::string(msg) + "\n";
  };
  return validate(io::read_scenario_file(config.input), options);
}

std::pair<std::size_t, std::size_t> require_pair(const RunConfig& config, const ScenarioSet& set) {
  if (!config.pair) throw UsageError("--pair I J is required");
  const auto [i, j] = *config.pair;
  if (i >= set.num_variables() || j >= set.num_variables()) {
    throw Error(ErrorCode::kIndexOutOfRange, "--pair index exceeds variable count");
  }
  return {i, j};
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

json run_variance(const RunConfig& config, const ScenarioSet& set) {
  const auto labels = scenario_labels(set);
  const auto* lp = config.witness ? &labels : nullptr;
  json vars = json::array();
  for (std::size_t i = 0; i < set.num_variables(); ++i) {
    const auto means = scenario_means(set, i);
    const auto second = scenario_second_moments(set, i);
    vars.push_back({{"name", set.variable_names[i]},
                    {"upper", io::to_json(upper_variance(means, second), lp)},
                    {"lower", io::to_json(lower_variance(means, second), lp)}});
  }
  return {{"variances", vars}};
}

json report_to_json(const BoundsReport& r) {
  return {{"rho_x", r.rho_x},
          {"rho_y", r.rho_y},
          {"delta_x", r.delta_x},
          {"delta_y", r.delta_y},
          {"m_upper", r.m_upper},
          {"m_lower", r.m_lower},
          {"centered_upper", r.centered_upper},
          {"centered_lower", r.centered_lower},
          {"bracket_low", r.bracket_low},
          {"bracket_high", r.bracket_high},
          {"lower_bracket_low", r.lower_bracket_low},
          {"lower_bracket_high", r.lower_bracket_high},
          {"gap_bound", r.gap_bound}};
}

json run_cov(const RunConfig& config, const ScenarioSet& set) {
  const auto [i, j] = require_pair(config, set);
  const auto labels = scenario_labels(set);
  const auto* lp = config.witness ? &labels : nullptr;
  const PairMoments p = extract_pair(set, i, j);
  const CovBounds b = cov_bounds(p);
  return {{"pair", {i, j}},
          {"variables", {set.variable_names[i], set.variable_names[j]}},
          {"upper", io::to_json(b.upper, lp)},
          {"lower", io::to_json(b.lower, lp)},
          {"report", report_to_json(bounds_report(p))}};
}

std::string matrix_csv(const CovarianceBoundMatrices& m, const ScenarioSet& set) {
  std::ostringstream out;
  out << "matrix,variable";
  for (const auto& name : set.variable_names) out << ',' << name;
  out << '\n';
  for (const auto* which : {"upper", "lower"}) {
    const Eigen::MatrixXd& mat = std::string_view(which) == "upper" ? m.upper : m.lower;
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      out << which << ',' << set.variable_names[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < mat.cols(); ++c) out << ',' << format_number(mat(r, c));
      out << '\n';
    }
  }
  return out.str();
}

// Largest lattice resolution <= wanted with at most `budget` points.
std::size_t lattice_divisions(std::size_t k, std::size_t wanted, double budget) {
  auto points = [k](std::size_t d) {
    double count = 1.0;
    for (std::size_t r = 1; r < k; ++r) {
      count *= static_cast<double>(d + r) / static_cast<double>(r);
    }
    return count;
  };
  std::size_t d = std::max<std::size_t>(wanted, 10);
  while (d > 10 && points(d) > budget) d = d * 9 / 10;
  return d;
}

json run_oracle(const RunConfig& config, const ScenarioSet& set) {
  if (config.grid < 2) throw UsageError("--grid must be at least 2");
  if (config.order != "maximin" && config.order != "minimax") {
    throw UsageError("--order must be maximin or minimax");
  }
  std::pair<std::size_t, std::size_t> ij{0, set.num_variables() > 1 ? 1 : 0};
  if (config.pair) ij = require_pair(config, set);
  const auto [i, j] = ij;

  const PairMoments p = extract_pair(set, i, j);
  const CovBounds exact = cov_bounds(p);
  const auto grid = oracle::GridSpec::over_means(p, config.grid).widened(config.widen);
  const double maximin = oracle::grid_maximin_cov(p, grid, oracle::Nesting::kMaximin);
  const double minimax = oracle::grid_maximin_cov(p, grid, oracle::Nesting::kMinimax);
  const double chosen = config.order == "maximin" ? maximin : minimax;

  const PairMoments neg = p.negate_y();
  const auto neg_grid = oracle::GridSpec::over_means(neg, config.grid).widened(config.widen);
  const double lower_grid = -oracle::grid_maximin_cov(neg, neg_grid, oracle::Nesting::kMaximin);
  const double lower_swapped =
      oracle::grid_maximin_cov(p, grid, oracle::Nesting::kMaximin, oracle::Sense::kLower);

  const auto uv = oracle::UvMoments::from_pair(p);
  const auto uvg = oracle::uv_grid(uv, config.grid).widened(config.widen);
  const double uv_value = oracle::grid_uv_maximin(uv, uvg);

  json out = {{"pair", {i, j}},
              {"variables", {set.variable_names[i], set.variable_names[j]}},
              {"grid", config.grid},
              {"order", config.order},
              {"widen", config.widen},
              {"exact", {{"upper", exact.upper.value}, {"lower", exact.lower.value}}},
              {"maximin", maximin},
              {"minimax", minimax},
              {"grid_value", chosen},
              {"delta", chosen - exact.upper.value},
              {"lower",
               {{"grid", lower_grid},
                {"delta", lower_grid - exact.lower.value},
                {"swapped_nesting", lower_swapped}}},
              {"uv_maximin", uv_value},
              {"uv_delta", uv_value - exact.upper.value}};

  const std::size_t k = set.num_scenarios();
  if (k <= 5) {
    const std::size_t d =
        lattice_divisions(k, static_cast<std::size_t>(config.grid), 2e6);
    const double step = 1.0 / static_cast<double>(d);
    const double sup = oracle::grid_simplex_envelope(p, step, oracle::Sense::kUpper);
    const double inf = oracle::grid_simplex_envelope(p, step, oracle::Sense::kLower);
    out["simplex_envelope"] = {{"step", step},
                               {"sup", sup},
                               {"inf", inf},
                               {"sup_delta", sup - exact.upper.value},
                               {"inf_delta", inf - exact.lower.value}};
  }
  const double tol = config.tolerance;
  out["within_tolerance"] = std::abs(maximin - exact.upper.value) <= tol &&
                            std::abs(lower_grid - exact.lower.value) <= tol &&
                            std::abs(uv_value - exact.upper.value) <= tol;
  return out;
}

json run_qp(const RunConfig& config) {
  if (config.input.empty()) throw UsageError("--input is required");
  json j;
  try {
    j = json::parse(io::read_text_file(config.input));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  const BilinearQp qp = io::qp_from_json(j);
  const QMatrix q = q_matrix(qp);
  json out = io::to_json(solve(qp));
  out["q_matrix"] = io::matrix_to_json(q.q);
  out["inertia"] = {{"positive", q.inertia.positive},
                    {"negative", q.inertia.negative},
                    {"zero", q.inertia.zero}};
  return out;
}

json run_estimate(const RunConfig& config, std::string& diagnostics) {
  if (config.input.empty()) throw UsageError("--input is required");
  std::ifstream in(config.input);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + config.input + "'");
  ValidationOptions options;
  options.allow_non_psd = config.allow_non_psd;
  options.on_warning = [&](std::string_view msg) {
    diagnostics += "warning: " + std::string(msg) + "\n";
  };
  return io::to_json(validate(estimate_moments(read_regime_csv(in)), options));
}

json run_check(const RunConfig& config, const ScenarioSet& set, bool& passed) {
  InvariantOptions options;
  options.samples = config.samples;
  options.seed = config.seed;
  options.grid_steps = config.grid;
  const InvariantReport report = run_invariants(set, options);
  passed = report.passed();
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  }
  return {{"passed", passed}, {"failures", report.failures()}, {"checks", checks}};
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    if (config.format != "json" && config.format != "csv") {
      throw UsageError("--format must be json or csv");
    }
    if (config.format == "csv" && config.subcommand != "matrix") {
      throw UsageError("csv output is only available for the matrix subcommand");
    }

    std::string text;
    bool passed = true;
    const auto& cmd = config.subcommand;
    if (cmd == "qp") {
      text = run_qp(config).dump(2);
    } else if (cmd == "estimate") {
      text = run_estimate(config, result.diagnostics).dump(2);
    } else if (cmd == "variance" || cmd == "cov" || cmd == "matrix" || cmd == "oracle" ||
               cmd == "check") {
      const ScenarioSet set = load_set(config, result.diagnostics);
      if (cmd == "variance") {
        text = run_variance(config, set).dump(2);
      } else if (cmd == "cov") {
        text = run_cov(config, set).dump(2);
      } else if (cmd == "matrix") {
        const auto m = cov_bounds_matrix(set);
        text = config.format == "csv" ? matrix_csv(m, set) : io::to_json(m, set, config.witness).dump(2);
      } else if (cmd == "oracle") {
        text = run_oracle(config, set).dump(2);
      } else {
        text = run_check(config, set, passed).dump(2);
      }
    } else {
      throw UsageError("unknown subcommand '" + cmd + "'");
    }
    if (!text.empty() && text.back() != '\n') text += '\n';

    if (!passed) {
      result.exit_code = kExitNumericalFailure;
      result.diagnostics += "error: invariant check failed\n";
    }
    if (config.output.empty()) {
      result.output = std::move(text);
    } else {
      std::ofstream out(config.output, std::ios::binary);
      if (!out || !(out << text)) throw Error(ErrorCode::kIo, "cannot write '" + config.output + "'");
    }
  } catch (const Error& e) {
    result.exit_code = kExitInvalidInput;
    result.diagnostics += std::string("error: ") + e.what() + "\n";
  } catch (const UsageError& e) {
    result.exit_code = kExitInvalidInput;
    result.diagnostics += std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    result.exit_code = kExitNumericalFailure;
    result.diagnostics += std::string("error: ") + e.what() + "\n";
  }
  return result;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Upper/lower variance and covariance bounds under finitely many scenarios"};
  app.require_subcommand(1);
  RunConfig config;
  std::vector<std::size_t> pair;

  auto add_common = [&](CLI::App* sub, bool takes_pair) {
    sub->add_option("--input", config.input, "Input file")->required();
    sub->add_option("--output", config.output, "Output file (default stdout)");
    if (takes_pair) sub->add_option("--pair", pair, "Variable indices I J")->expected(2);
  };
  auto add_set_flags = [&](CLI::App* sub) {
    sub->add_flag("--allow-non-psd", config.allow_non_psd,
                  "Downgrade non-PSD scenario covariances to a warning");
  };

  auto* variance = app.add_subcommand("variance", "Per-variable upper/lower variance");
  add_common(variance, false);
  add_set_flags(variance);
  variance->add_flag("--witness", config.witness, "Annotate witnesses with labels and weights");

  auto* cov = app.add_subcommand("cov", "Upper/lower covariance of one variable pair");
  add_common(cov, true);
  add_set_flags(cov);
  cov->add_flag("--witness", config.witness, "Annotate witnesses with labels and weights");

  auto* matrix = app.add_subcommand("matrix", "Covariance bound matrices");
  add_common(matrix, false);
  add_set_flags(matrix);
  matrix->add_option("--format", config.format, "json or csv");
  matrix->add_flag("--witness", config.witness, "Annotate witnesses with labels and weights");

  auto* qp = app.add_subcommand("qp", "Exact simplex bilinear QP");
  add_common(qp, false);

  auto* oracle = app.add_subcommand("oracle", "Grid oracles next to the exact bounds");
  add_common(oracle, true);
  add_set_flags(oracle);
  oracle->add_option("--grid", config.grid, "Grid steps per axis");
  oracle->add_option("--order", config.order, "maximin or minimax");
  oracle->add_option("--widen", config.widen, "Widen the search box by this factor");
  oracle->add_option("--tolerance", config.tolerance, "Agreement threshold");

  auto* estimate = app.add_subcommand("estimate", "Regime CSV to scenario JSON");
  add_common(estimate, false);
  add_set_flags(estimate);

  auto* check = app.add_subcommand("check", "Run the invariant suite on a scenario set");
  add_common(check, false);
  add_set_flags(check);
  check->add_option("--seed", config.seed, "Seed for simplex sampling");
  check->add_option("--samples", config.samples, "Simplex samples per check");
  check->add_option("--grid", config.grid, "Grid steps for the maximin oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  if (pair.size() == 2) config.pair = std::make_pair(pair[0], pair[1]);

  const RunResult result = run(config);
  std::cout << result.output;
  std::cerr << result.diagnostics;
  return result.exit_code;
}

}  // namespace covbounds::cli
