#pragma once

#include <algorithm>
#include <cmath>

namespace covbounds::tol {

// Internal comparison slack for ties and branch selection.
inline constexpr double kTie = 1e-12;

inline double magnitude(double x, double y) { return std::max(std::abs(x), std::abs(y)); }

/// True when `x` beats `incumbent` by more than the tie slack.
inline bool strictly_greater(double x, double incumbent) {
  return x > incumbent + kTie * (1.0 + magnitude(x, incumbent));
}

inline bool nearly_equal(double x, double y, double rel = kTie) {
  return std::abs(x - y) <= rel * (1.0 + std::abs(x) + std::abs(y));
}

/// |x - y| <= rel * (1 + max(|x|, |y|)); used for "relative" checks that must
/// stay meaningful near zero.
inline bool close(double x, double y, double rel) {
  return std::abs(x - y) <= rel * (1.0 + magnitude(x, y));
}

}  // namespace covbounds::tol
