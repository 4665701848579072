#include "vwl/scaling.hpp"

#include "vwl/csv.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace vwl {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN/inf; encode non-finite numbers as strings.
nlohmann::json encode(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return nan;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw nlohmann::json::type_error::create(302, "expected number, got string '" + s + "'", &j);
}

}  // namespace

LogLogFit fit_loglog(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [e, v] : pairs)
    if (e > 0.0 && v > 0.0 && std::isfinite(e) && std::isfinite(v)) pts.emplace_back(std::log(e), std::log(v));
  if (pts.size() < 2) return {nan, nan, nan};
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) return {nan, nan, nan};
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

void ScalingReport::fit() {
  const auto f = fit_loglog(pairs);
  slope = f.slope;
  intercept = f.intercept;
  residual = f.residual;
  // a flat law gives -0.0; report it as 0
  implied_n = slope == 0.0 ? 0.0 : -slope;
  implied_n_ceil = std::isfinite(implied_n) ? static_cast<std::int64_t>(std::ceil(implied_n - 1e-9)) : 0;
}

nlohmann::json ScalingReport::to_json() const {
  nlohmann::json p = nlohmann::json::array();
  for (const auto& [e, v] : pairs) p.push_back({encode(e), encode(v)});
  return {
      {"experiment", experiment},
      {"config", config},
      {"pairs", p},
      {"slope", encode(slope)},
      {"intercept", encode(intercept)},
      {"residual", encode(residual)},
      {"N", encode(implied_n)},
      {"N_ceil", implied_n_ceil},
      {"verdict", verdict},
      {"verdict_label", verdict_label},
      {"warnings", warnings},
      {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
      {"details", details},
  };
}

ScalingReport ScalingReport::from_json(const nlohmann::json& j) {
  ScalingReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.config = j.at("config");
  for (const auto& p : j.at("pairs")) r.pairs.emplace_back(decode(p.at(0)), decode(p.at(1)));
  r.slope = decode(j.at("slope"));
  r.intercept = decode(j.at("intercept"));
  r.residual = decode(j.at("residual"));
  r.implied_n = decode(j.at("N"));
  r.implied_n_ceil = j.at("N_ceil").get<std::int64_t>();
  r.verdict = j.at("verdict").get<bool>();
  r.verdict_label = j.at("verdict_label").get<std::string>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.details = j.at("details");
  return r;
}

void write_report(const ScalingReport& report, const std::filesystem::path& stem) {
  {
    std::ofstream out(stem.string() + ".json", std::ios::binary);
    out << report.to_json().dump(2) << '\n';
  }
  csv::Writer w(stem.string() + ".csv", {"epsilon", "value"});
  for (const auto& [e, v] : report.pairs) w.row({csv::num(e), csv::num(v)});
}

}  // namespace vwl
