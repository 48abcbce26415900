#pragma once

#include <istream>
#include <string>
#include <vector>

#include "covbounds/moments.hpp"

namespace covbounds {

/// Observations grouped by regime label, regimes in first-appearance order.
struct RegimeSamples {
  struct Regime {
    std::string label;
    std::vector<std::vector<double>> rows;
  };

  std::vector<std::string> variable_names;
  std::vector<Regime> regimes;
};

/// Reads `regime,<name1>,...,<nameN>` CSV. Rows may arrive in any order.
/// Throws kParseError (bad header or non-numeric field), kRaggedRows or
/// kNonFinite.
RegimeSamples read_regime_csv(std::istream& in);

/// One scenario per regime: arithmetic means and the unbiased sample
/// covariance (divisor count - 1). Throws kTooFewSamples when a regime has
/// fewer than two rows.
ScenarioSet estimate_moments(const RegimeSamples& data);

}  // namespace covbounds
