#include "covbounds/io.hpp"

#include <fstream>
#include <sstream>

namespace covbounds::io {

namespace {

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::kParseError, what + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

ScenarioSet scenario_set_from_json(const json& j) {
  ScenarioSet set;
  const auto& vars = field(j, "variables");
  if (!vars.is_array()) throw Error(ErrorCode::kParseError, "'variables' must be an array");
  for (const auto& v : vars) {
    if (!v.is_string()) throw Error(ErrorCode::kParseError, "variable names must be strings");
    set.variable_names.push_back(v.get<std::string>());
  }
  const auto& scenarios = field(j, "scenarios");
  if (!scenarios.is_array()) throw Error(ErrorCode::kParseError, "'scenarios' must be an array");

  for (const auto& s : scenarios) {
    ScenarioMoments sc;
    const auto& label = field(s, "label");
    if (!label.is_string()) throw Error(ErrorCode::kParseError, "'label' must be a string");
    sc.label = label.get<std::string>();

    const auto mean = number_array(field(s, "mean"), "'mean'");
    sc.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));

    const auto& cov = field(s, "cov");
    if (!cov.is_array()) throw Error(ErrorCode::kParseError, "'cov' must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(cov.size());
    sc.cov.resize(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto row = number_array(cov[static_cast<std::size_t>(r)], "'cov' row");
      if (static_cast<Eigen::Index>(row.size()) != rows) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "scenario '" + sc.label + "': covariance is not square");
      }
      for (Eigen::Index c = 0; c < rows; ++c) sc.cov(r, c) = row[static_cast<std::size_t>(c)];
    }
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

json to_json(const ScenarioSet& set) {
  json scenarios = json::array();
  for (const auto& s : set.scenarios) {
    scenarios.push_back({{"label", s.label},
                         {"mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size())},
                         {"cov", matrix_to_json(s.cov)}});
  }
  return {{"variables", set.variable_names}, {"scenarios", scenarios}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioSet read_scenario_file(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return scenario_set_from_json(j);
}

json to_json(const Witness& w, const std::vector<std::string>* labels) {
  json out;
  if (w.is_pair()) {
    out = {{"kind", "pair"}, {"scenarios", {w.i, w.j}}, {"lambda", w.lambda}};
  } else {
    out = {{"kind", "single_scenario"}, {"scenario", w.i}};
  }
  if (labels != nullptr) {
    if (w.is_pair()) {
      out["labels"] = {labels->at(w.i), labels->at(w.j)};
    } else {
      out["label"] = labels->at(w.i);
    }
    out["weights"] = w.weights(labels->size());
  }
  return out;
}

json to_json(const BoundResult& bound, const std::vector<std::string>* labels) {
  return {{"value", bound.value}, {"witness", to_json(bound.witness, labels)}};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CovarianceBoundMatrices& bounds, const ScenarioSet& set, bool verbose) {
  std::vector<std::string> labels;
  for (const auto& s : set.scenarios) labels.push_back(s.label);
  const auto* lp = verbose ? &labels : nullptr;

  json witnesses = json::array();
  const std::size_t n = bounds.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      witnesses.push_back({{"i", i},
                           {"j", j},
                           {"upper", to_json(bounds.upper_witness(i, j), lp)},
                           {"lower", to_json(bounds.lower_witness(i, j), lp)}});
    }
  }
  return {{"variables", set.variable_names},
          {"upper", matrix_to_json(bounds.upper)},
          {"lower", matrix_to_json(bounds.lower)},
          {"psd_upper", is_psd(bounds.upper)},
          {"psd_lower", is_psd(bounds.lower)},
          {"witnesses", witnesses}};
}

BilinearQp qp_from_json(const json& j) {
  return {number_array(field(j, "m"), "'m'"), number_array(field(j, "n"), "'n'"),
          number_array(field(j, "k"), "'k'")};
}

json to_json(const QpSolution& sol) {
  return {{"value", sol.value}, {"lambda", sol.lambda}, {"support", sol.support}};
}

}  // namespace covbounds::io
