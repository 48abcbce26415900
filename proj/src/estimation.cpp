#include "covbounds/estimation.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <unordered_map>

namespace covbounds {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonFinite, "line " + std::to_string(line_no) + ": non-finite value");
  }
  return value;
}

}  // namespace

RegimeSamples read_regime_csv(std::istream& in) {
  RegimeSamples out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split(view);

    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "regime") {
        throw Error(ErrorCode::kParseError, "header must be 'regime,<name1>,...'");
      }
      for (std::size_t f = 1; f < fields.size(); ++f) {
        if (fields[f].empty()) throw Error(ErrorCode::kParseError, "empty variable name in header");
        out.variable_names.emplace_back(fields[f]);
      }
      have_header = true;
      continue;
    }

    if (fields.size() != out.variable_names.size() + 1) {
      throw Error(ErrorCode::kRaggedRows, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(out.variable_names.size() + 1) +
                                              " fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": missing regime");
    }
    std::vector<double> row;
    row.reserve(out.variable_names.size());
    for (std::size_t f = 1; f < fields.size(); ++f) row.push_back(parse_number(fields[f], line_no));

    const std::string label(fields[0]);
    auto [it, inserted] = index.try_emplace(label, out.regimes.size());
    if (inserted) out.regimes.push_back({label, {}});
    out.regimes[it->second].rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::kParseError, "missing header row");
  return out;
}

ScenarioSet estimate_moments(const RegimeSamples& data) {
  const std::size_t n = data.variable_names.size();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no variables");
  if (data.regimes.empty()) throw Error(ErrorCode::kEmptyInput, "no regimes");

  ScenarioSet set;
  set.variable_names = data.variable_names;
  const auto nn = static_cast<Eigen::Index>(n);
  for (const auto& regime : data.regimes) {
    const std::size_t count = regime.rows.size();
    if (count < 2) {
      throw Error(ErrorCode::kTooFewSamples, "regime '" + regime.label + "' has fewer than 2 rows");
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(nn);
    for (const auto& row : regime.rows) {
      if (row.size() != n) throw Error(ErrorCode::kRaggedRows, "row length differs from header");
      for (std::size_t v = 0; v < n; ++v) {
        if (!std::isfinite(row[v])) throw Error(ErrorCode::kNonFinite, "non-finite observation");
        mean(static_cast<Eigen::Index>(v)) += row[v];
      }
    }
    mean /= static_cast<double>(count);

    // Second pass on centred data.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::VectorXd dev(nn);
    for (const auto& row : regime.rows) {
      for (std::size_t v = 0; v < n; ++v) {
        dev(static_cast<Eigen::Index>(v)) = row[v] - mean(static_cast<Eigen::Index>(v));
      }
      cov.selfadjointView<Eigen::Lower>().rankUpdate(dev);
    }
    Eigen::MatrixXd full = cov.selfadjointView<Eigen::Lower>();
    full /= static_cast<double>(count - 1);
    set.scenarios.push_back({regime.label, std::move(mean), std::move(full)});
  }
  return set;
}

}  // namespace covbounds
