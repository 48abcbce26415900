#include "covbounds/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace covbounds {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNegativeVariance: return "NegativeVariance";
    case ErrorCode::kNotOnSimplex: return "NotOnSimplex";
    case ErrorCode::kMeansNotCertain: return "MeansNotCertain";
    case ErrorCode::kNonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::kBadBox: return "BadBox";
    case ErrorCode::kTooManyScenarios: return "TooManyScenarios";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIo: return "IO";
  }
  return "Unknown";
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

PairMoments::PairMoments(std::vector<double> a, std::vector<double> b, std::vector<double> c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.empty()) throw Error(ErrorCode::kEmptyInput, "pair moments need at least one scenario");
  if (b_.size() != a_.size() || c_.size() != a_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "a, b and c must have equal length");
  }
  if (!all_finite(a_) || !all_finite(b_) || !all_finite(c_)) {
    throw Error(ErrorCode::kNonFinite, "pair moments contain a non-finite entry");
  }
}

PairMoments PairMoments::negate_y() const {
  std::vector<double> nb(b_.size());
  std::vector<double> nc(c_.size());
  std::transform(b_.begin(), b_.end(), nb.begin(), std::negate<>());
  std::transform(c_.begin(), c_.end(), nc.begin(), std::negate<>());
  return PairMoments(a_, std::move(nb), std::move(nc));
}

PairMoments PairMoments::swapped() const { return PairMoments(b_, a_, c_); }

std::vector<double> Witness::weights(std::size_t k) const {
  std::vector<double> w(k, 0.0);
  if (i >= k || (is_pair() && j >= k)) {
    throw Error(ErrorCode::kIndexOutOfRange, "witness index exceeds scenario count");
  }
  if (is_pair()) {
    w[i] = lambda;
    w[j] = 1.0 - lambda;
  } else {
    w[i] = 1.0;
  }
  return w;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ScenarioSet validate(ScenarioSet set, const ValidationOptions& options) {
  const std::size_t n = set.num_variables();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no variables");
  if (set.scenarios.empty()) throw Error(ErrorCode::kEmptyInput, "no scenarios");

  std::unordered_set<std::string> seen;
  for (const auto& name : set.variable_names) {
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kDuplicateName, "variable name '" + name + "' is repeated");
    }
  }

  for (auto& s : set.scenarios) {
    const auto where = "scenario '" + s.label + "'";
    if (static_cast<std::size_t>(s.mean.size()) != n) {
      throw Error(ErrorCode::kDimensionMismatch, where + ": mean has wrong length");
    }
    if (static_cast<std::size_t>(s.cov.rows()) != n ||
        static_cast<std::size_t>(s.cov.cols()) != n) {
      throw Error(ErrorCode::kDimensionMismatch, where + ": covariance is not n x n");
    }
    if (!s.mean.allFinite() || !s.cov.allFinite()) {
      throw Error(ErrorCode::kNonFinite, where + ": non-finite moment");
    }
    for (Eigen::Index r = 0; r < s.cov.rows(); ++r) {
      for (Eigen::Index c = r + 1; c < s.cov.cols(); ++c) {
        const double x = s.cov(r, c);
        const double y = s.cov(c, r);
        if (std::abs(x - y) > kSymmetryTolerance * (1.0 + std::abs(x))) {
          std::ostringstream msg;
          msg << where << ": entries (" << r << "," << c << ") and (" << c << "," << r
              << ") differ";
          throw Error(ErrorCode::kNonSymmetric, msg.str());
        }
      }
    }
    Eigen::MatrixXd sym = 0.5 * (s.cov + s.cov.transpose());
    s.cov = std::move(sym);

    const double smallest = min_eigenvalue(s.cov);
    const double slack = -kPsdTolerance * std::abs(s.cov.trace());
    if (smallest < slack) {
      std::ostringstream msg;
      msg << where << ": covariance not positive semi-definite (smallest eigenvalue "
          << smallest << ")";
      if (!options.allow_non_psd) throw Error(ErrorCode::kNotPsd, msg.str());
      if (options.on_warning) options.on_warning(msg.str());
    }
  }
  return set;
}

PairMoments extract_pair(const ScenarioSet& set, std::size_t i, std::size_t j) {
  const std::size_t n = set.num_variables();
  if (i >= n || j >= n) {
    throw Error(ErrorCode::kIndexOutOfRange, "variable index out of range");
  }
  const std::size_t k = set.num_scenarios();
  std::vector<double> a(k), b(k), c(k);
  for (std::size_t s = 0; s < k; ++s) {
    const auto& sc = set.scenarios[s];
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    a[s] = sc.mean(ii);
    b[s] = sc.mean(jj);
    c[s] = sc.cov(ii, jj);
  }
  return PairMoments(std::move(a), std::move(b), std::move(c));
}

MeanInterval mean_interval(std::span<const double> means) {
  if (means.empty()) throw Error(ErrorCode::kEmptyInput, "mean interval of no scenarios");
  if (!all_finite(means)) throw Error(ErrorCode::kNonFinite, "non-finite mean");
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  return {*lo, *hi};
}

std::vector<double> scenario_means(const ScenarioSet& set, std::size_t i) {
  if (i >= set.num_variables()) throw Error(ErrorCode::kIndexOutOfRange, "variable index");
  std::vector<double> out;
  out.reserve(set.num_scenarios());
  for (const auto& s : set.scenarios) out.push_back(s.mean(static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<double> scenario_second_moments(const ScenarioSet& set, std::size_t i) {
  if (i >= set.num_variables()) throw Error(ErrorCode::kIndexOutOfRange, "variable index");
  const auto ii = static_cast<Eigen::Index>(i);
  std::vector<double> out;
  out.reserve(set.num_scenarios());
  for (const auto& s : set.scenarios) out.push_back(s.cov(ii, ii) + s.mean(ii) * s.mean(ii));
  return out;
}

}  // namespace covbounds
