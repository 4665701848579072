#include "vwl/mollifier.hpp"

#include "vwl/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <cmath>

namespace vwl {

namespace {

double unit_mass_constant(const BumpProfile& profile, double radius, std::size_t dim) {
  const double n = static_cast<double>(dim);
  const double mass = std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialBump>) {
          // int_{|x|<R} (1 - |x|^2/R^2)^k dx = R^n pi^{n/2} Gamma(k+1) / Gamma(k+1+n/2)
          const double k = p.exponent;
          return std::pow(radius, n) * std::pow(M_PI, 0.5 * n) * std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.0 + 0.5 * n));
        } else {
          const double w2 = p.width * p.width;
          return std::pow(2.0 * M_PI * w2, 0.5 * n) * boost::math::gamma_p(0.5 * n, radius * radius / (2.0 * w2));
        }
      },
      profile);
  return 1.0 / mass;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError(fmt::format("epsilon must lie in (0,1], got {}", eps));
}

Field sample_scaled(const Mollifier& m, double eps, const Grid& grid, bool wrapped, bool unit_mass = true) {
  check_eps(eps);
  if (grid.dims() != m.group().topological_dimension())
    throw ArgumentError(fmt::format("mollifier on a {}-dimensional group sampled on a {}-dimensional grid",
                                    m.group().topological_dimension(), grid.dims()));
  m.check_resolvable(grid, eps);
  Field f(grid);
  std::vector<double> x(grid.dims());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    for (std::size_t a = 0; a < grid.dims(); ++a) {
      x[a] = wrapped ? static_cast<double>(Grid::wavenumber(idx[a], grid.points()[a])) * grid.spacing(a)
                     : grid.coordinate(a, idx[a]);
    }
    f[i] = m.evaluate_scaled(x, eps);
  }
  if (unit_mass) f *= 1.0 / discrete_mass(f);
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mollifier

Mollifier::Mollifier(GroupStructure group, BumpProfile profile, double radius)
    : group_(std::move(group)), profile_(profile), radius_(radius), norm_(0.0) {
  if (!(radius > 0.0)) throw ArgumentError("mollifier radius must be positive");
  if (const auto* p = std::get_if<PolynomialBump>(&profile_); p && p->exponent < 1)
    throw ArgumentError("polynomial bump exponent must be >= 1");
  if (const auto* g = std::get_if<TruncatedGaussian>(&profile_); g && !(g->width > 0.0))
    throw ArgumentError("gaussian bump width must be positive");
  norm_ = unit_mass_constant(profile_, radius_, group_.topological_dimension());
}

double Mollifier::evaluate(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double R2 = radius_ * radius_;
  if (r2 >= R2) return 0.0;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PolynomialBump>) {
          return norm_ * std::pow(1.0 - r2 / R2, p.exponent);
        } else {
          return norm_ * std::exp(-r2 / (2.0 * p.width * p.width));
        }
      },
      profile_);
}

double Mollifier::evaluate_scaled(std::span<const double> x, double eps) const {
  const auto y = group_.dilate(x, 1.0 / eps);
  const double q = to_double(group_.homogeneous_dimension());
  return std::pow(eps, -q) * evaluate(y);
}

double Mollifier::support_halfwidth(std::size_t axis, double eps) const {
  return std::pow(eps, to_double(group_.weights().at(axis))) * radius_;
}

void Mollifier::check_resolvable(const Grid& grid, double eps, double min_cells) const {
  for (std::size_t a = 0; a < grid.dims(); ++a) {
    const double hw = support_halfwidth(a, eps);
    if (hw >= 0.5 * grid.extents()[a])
      throw ResolutionError(fmt::format("mollifier support (half-width {}) exceeds the box on axis {} at eps={}", hw, a, eps));
    const double cells = 2.0 * hw / grid.spacing(a);
    if (cells < min_cells)
      throw ResolutionError(fmt::format("mollifier support spans {:.3g} cells (< {}) on axis {} at eps={}", cells,
                                        min_cells, a, eps));
  }
}

bool Mollifier::resolvable(const Grid& grid, double eps, double min_cells) const {
  try {
    check_resolvable(grid, eps, min_cells);
    return true;
  } catch (const ResolutionError&) {
    return false;
  }
}

Field scaled_mollifier(const Mollifier& m, double eps, const Grid& grid) { return sample_scaled(m, eps, grid, false); }

Field scaled_mollifier_kernel(const Mollifier& m, double eps, const Grid& grid) {
  return sample_scaled(m, eps, grid, true);
}

double quadrature_defect(const Mollifier& m, double eps, const Grid& grid) {
  return discrete_mass(sample_scaled(m, eps, grid, false, false)) - 1.0;
}

double discrete_mass(const Field& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += v.real();
  return f.grid().cell_volume() * s;
}

Field mollify(const Field& f, const Mollifier& m, double eps) {
  const Transform t(f.grid());
  auto a = t.forward(f);
  const auto b = t.forward(scaled_mollifier_kernel(m, eps, f.grid()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return t.inverse(std::move(a));
}

// ---------------------------------------------------------------------------
// PotentialNet

PotentialNet PotentialNet::delta(Mollifier m) { return {std::move(m), Delta{}}; }
PotentialNet PotentialNet::delta_squared(Mollifier m) { return {std::move(m), DeltaSquared{}}; }
PotentialNet PotentialNet::mollified(Mollifier m, Field p) { return {std::move(m), Mollified{std::move(p)}}; }
PotentialNet PotentialNet::constant_shifted(const PotentialNet& base) {
  return {base.mollifier_, ConstantShifted{std::make_shared<const PotentialNet>(base)}};
}
PotentialNet PotentialNet::zero(Mollifier m, const Grid& grid) { return mollified(std::move(m), Field(grid)); }

double PotentialNet::shift(double eps) { return std::exp(-1.0 / eps); }

std::string PotentialNet::name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Delta>) return "delta";
        else if constexpr (std::is_same_v<T, DeltaSquared>) return "delta_squared";
        else if constexpr (std::is_same_v<T, Mollified>) return "mollified";
        else return "constant_shifted(" + k.base->name() + ")";
      },
      kind_);
}

Field realize_net(const PotentialNet& net, double eps, const Grid& grid) {
  check_eps(eps);
  Field p = std::visit(
      [&](const auto& k) -> Field {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PotentialNet::Delta>) {
          return scaled_mollifier(net.mollifier(), eps, grid);
        } else if constexpr (std::is_same_v<T, PotentialNet::DeltaSquared>) {
          Field f = scaled_mollifier(net.mollifier(), eps, grid);
          for (auto& v : f.values()) v *= v;
          return f;
        } else if constexpr (std::is_same_v<T, PotentialNet::Mollified>) {
          if (!(k.potential.grid() == grid)) throw ArgumentError("mollified net: potential lives on a different grid");
          return mollify(k.potential, net.mollifier(), eps);
        } else {
          Field f = realize_net(*k.base, eps, grid);
          const double c = PotentialNet::shift(eps);
          for (auto& v : f.values()) v += c;
          return f;
        }
      },
      net.kind());
  for (auto& v : p.values()) v = {std::max(v.real(), 0.0), 0.0};
  return p;
}

// ---------------------------------------------------------------------------

std::string NormSpec::label() const { return std::isinf(q) ? "sup" : fmt::format("L{}", q); }

ScalingReport moderateness_slope(const PotentialNet& net, NormSpec norm, std::span<const double> eps_list,
                                 const Grid& grid) {
  ScalingReport r;
  r.experiment = "mollifier-scaling";
  r.config = {{"net", net.name()}, {"norm", norm.label()}, {"group", net.mollifier().group().preset_name()}};
  for (double eps : eps_list) {
    try {
      r.pairs.emplace_back(eps, lp_norm(realize_net(net, eps, grid), norm.q));
    } catch (const ResolutionError& e) {
      r.warnings.emplace_back(e.what());
    }
  }
  r.fit();
  r.verdict = std::isfinite(r.slope);
  r.verdict_label = r.verdict ? "moderate" : "undetermined";
  return r;
}

ScalingReport mollifier_peak_scaling(const Mollifier& m, std::span<const double> eps_list) {
  ScalingReport r;
  r.experiment = "mollifier-peak-scaling";
  r.config = {{"group", m.group().preset_name()}};
  const std::vector<double> origin(m.group().topological_dimension(), 0.0);
  for (double eps : eps_list) {
    check_eps(eps);
    r.pairs.emplace_back(eps, m.evaluate_scaled(origin, eps));
  }
  r.fit();
  const double q = to_double(m.group().homogeneous_dimension());
  r.details = {{"Q", q}};
  r.verdict = std::abs(r.slope + q) <= 0.05;
  r.verdict_label = r.verdict ? "slope=-Q" : "slope!=-Q";
  return r;
}

}  // namespace vwl
