#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covbounds/matrices.hpp"
#include "covbounds/moments.hpp"

namespace covbounds {

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs <= rhs up to 1e-9 (1 + |lhs| + |rhs|).
InvariantCheck check_le(std::string name, double lhs, double rhs);
/// |lhs - rhs| <= rel (1 + max(|lhs|, |rhs|)).
InvariantCheck check_close(std::string name, double lhs, double rhs, double rel);

struct InvariantOptions {
  std::size_t samples = 1000;  // simplex points for envelope and uncertainty-set checks
  std::uint64_t seed = kDefaultSampleSeed;
  int grid_steps = 200;  // maximin oracle resolution
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;

  bool passed() const;
  std::size_t failures() const;
};

/// Every algebraic identity and inequality the bounds must satisfy on a
/// validated scenario set: variance sandwich, diagonal consistency,
/// symmetry, witness exactness, the mixture envelope, Cauchy-Schwarz, the
/// U/V and endpoint brackets, sub/sup-additivity over variable triples,
/// agreement with the simplex QP and the grid maximin, and the
/// uncertainty-set envelope.
InvariantReport run_invariants(const ScenarioSet& set, const InvariantOptions& options = {});

}  // namespace covbounds
