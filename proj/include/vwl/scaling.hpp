#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vwl {

/// Least-squares fit of log(value) = intercept + slope * log(eps).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual in log space.
  double residual = 0.0;
};

/// Needs at least two points with positive eps and value; otherwise all
/// fields are NaN.
LogLogFit fit_loglog(const std::vector<std::pair<double, double>>& pairs);

/// Per-eps measurements with their fitted power law; the common report type of
/// the scaling and theorem experiments.
struct ScalingReport {
  std::string experiment;
  std::vector<std::pair<double, double>> pairs;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  /// N = -slope, and its ceiling (the integer moderateness exponent).
  double implied_n = 0.0;
  std::int64_t implied_n_ceil = 0;
  bool verdict = false;
  std::string verdict_label;
  std::vector<std::string> warnings;
  std::optional<std::uint64_t> seed;
  nlohmann::json config = nlohmann::json::object();
  /// Experiment-specific extras (per-eps closed forms, ratios, ...).
  nlohmann::json details = nlohmann::json::object();

  /// Fills slope/intercept/residual/implied_n from `pairs`.
  void fit();

  nlohmann::json to_json() const;
  static ScalingReport from_json(const nlohmann::json& j);

  friend bool operator==(const ScalingReport&, const ScalingReport&) = default;
};

/// JSON summary at `stem`.json and (eps, value) rows at `stem`.csv.
void write_report(const ScalingReport& report, const std::filesystem::path& stem);

}  // namespace vwl
