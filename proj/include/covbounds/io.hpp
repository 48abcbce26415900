#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "covbounds/matrices.hpp"
#include "covbounds/moments.hpp"
#include "covbounds/qp.hpp"

namespace covbounds::io {

using nlohmann::json;

// Scenario file:
//   {"variables": ["X1", ...],
//    "scenarios": [{"label": "bull", "mean": [..], "cov": [[..], ..]}, ..]}
// Shape problems inside well-formed JSON surface as kDimensionMismatch;
// malformed JSON or wrong types as kParseError.
ScenarioSet scenario_set_from_json(const json& j);
json to_json(const ScenarioSet& set);

ScenarioSet read_scenario_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// {"value": v, "witness": {...}}. With `labels`, witness entries also name
/// the scenarios and carry the dense weight vector.
json to_json(const BoundResult& bound, const std::vector<std::string>* labels = nullptr);
json to_json(const Witness& witness, const std::vector<std::string>* labels = nullptr);

json matrix_to_json(const Eigen::MatrixXd& m);

/// {"upper", "lower", "psd_upper", "psd_lower", "witnesses"}.
json to_json(const CovarianceBoundMatrices& bounds, const ScenarioSet& set, bool verbose);

// QP file: {"m": [..], "n": [..], "k": [..]}.
BilinearQp qp_from_json(const json& j);
json to_json(const QpSolution& sol);

}  // namespace covbounds::io
