#include "vwl/evolution.hpp"

#include "vwl/csv.hpp"
#include "vwl/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>

namespace vwl {

Scheme scheme_from_string(const std::string& name) {
  if (name == "strang") return Scheme::strang;
  if (name == "lie") return Scheme::lie;
  throw ArgumentError(fmt::format("unknown scheme '{}' (expected strang or lie)", name));
}

std::string to_string(Scheme s) { return s == Scheme::strang ? "strang" : "lie"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("solver.dt must be > 0");
  if (!(T >= dt)) throw ArgumentError("solver.T must be >= dt");
  if (record_every < 1) throw ArgumentError("solver.record_every must be >= 1");
  if (!(boundary_fraction > 0.0 && boundary_fraction < 0.5))
    throw ArgumentError("solver.boundary_fraction must lie in (0, 0.5)");
}

std::size_t SolverConfig::step_count() const {
  const double ratio = T / dt;
  auto full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  const double rem = T - static_cast<double>(full) * dt;
  return full + (rem > 1e-9 * dt ? 1 : 0);
}

double Trajectory::max_energy_deviation() const {
  double m = 0.0;
  for (double e : energy_series) m = std::max(m, std::abs(e - energy_series.front()));
  return m;
}

double Trajectory::energy_drift() const {
  if (energy_series.empty() || energy_series.front() == 0.0) return 0.0;
  return max_energy_deviation() / energy_series.front();
}

double Trajectory::l2_drift() const {
  double m = 0.0;
  for (double n : l2_series) m = std::max(m, std::abs(n - l2_series.front()));
  return m / l2_series.front();
}

double Trajectory::max_sobolev() const { return *std::max_element(sobolev_series.begin(), sobolev_series.end()); }

// ---------------------------------------------------------------------------

Propagator::Propagator(const FractionalOperator& op, const Field& potential, double dt, Scheme scheme)
    : op_(op), dt_(dt), scheme_(scheme) {
  if (!(potential.grid() == op.grid())) throw ArgumentError("propagator: potential and operator grids differ");
  if (!(dt > 0.0)) throw ArgumentError("propagator: dt must be > 0");
  const double pot_dt = scheme == Scheme::strang ? 0.5 * dt : dt;
  potential_phase_.resize(potential.size());
  for (std::size_t i = 0; i < potential.size(); ++i)
    potential_phase_[i] = std::polar(1.0, potential[i].real() * pot_dt);
  const auto sigma_s = op.symbol_power_s();
  const double inv_n = 1.0 / static_cast<double>(op.grid().size());
  free_phase_.resize(sigma_s.size());
  for (std::size_t i = 0; i < sigma_s.size(); ++i) free_phase_[i] = std::polar(inv_n, sigma_s[i] * dt);
}

void Propagator::advance(std::span<cplx> u) const {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) u[i] *= potential_phase_[i];
  op_.transform().forward_raw(u);
  for (std::size_t i = 0; i < n; ++i) u[i] *= free_phase_[i];
  op_.transform().inverse_raw(u);
  if (scheme_ == Scheme::strang)
    for (std::size_t i = 0; i < n; ++i) u[i] *= potential_phase_[i];
}

Field step(const Field& u, const Field& p, const FractionalOperator& op, double dt, Scheme scheme) {
  Propagator prop(op, p, dt, scheme);
  Field out = u;
  prop.advance(out.values());
  if (!out.all_finite()) throw BlowupError(0, "numerical blowup at step 0");
  return out;
}

double energy(const Field& u, const Field& p, const FractionalOperator& op) {
  const double kinetic = op.seminorm(u, op.s() * op.degree() / 2.0);
  double pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) pot += std::max(p[i].real(), 0.0) * std::norm(u[i]);
  return kinetic * kinetic + u.grid().cell_volume() * pot;
}

double wrap_mass_fraction(const Field& u, double boundary_fraction) {
  const Grid& g = u.grid();
  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = std::norm(u[i]);
    total += m;
    const auto idx = g.unravel(i);
    bool near = false;
    for (std::size_t a = 0; a < g.dims() && !near; ++a) {
      const double x = g.coordinate(a, idx[a]);
      near = std::abs(x) >= (0.5 - boundary_fraction) * g.extents()[a];
    }
    if (near) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

namespace {

struct Recorder {
  const FractionalOperator& op;
  const Field& p;
  const SolverConfig& cfg;
  Trajectory& tr;
  std::vector<double> potential_weights;  // h * max(p, 0)

  void record(double t, const Field& u) {
    const auto c = op.transform().forward(u);
    const double kin = op.seminorm_from_coeffs(c, op.s() * op.degree() / 2.0);
    double pot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) pot += potential_weights[i] * std::norm(u[i]);
    const double l2 = l2_norm(u);
    const double wrap = wrap_mass_fraction(u, cfg.boundary_fraction);
    tr.times.push_back(t);
    tr.l2_series.push_back(l2);
    tr.energy_series.push_back(kin * kin + pot);
    tr.sobolev_series.push_back(kin + l2);
    tr.wrap_mass_series.push_back(wrap);
    if (wrap > cfg.wrap_mass_threshold && !tr.wrap_threshold_breached) {
      tr.wrap_threshold_breached = true;
      tr.warnings.push_back(fmt::format("wrap mass {:.3g} exceeds threshold {:.3g} at t={}", wrap,
                                        cfg.wrap_mass_threshold, t));
    }
    if (cfg.keep_states) tr.states.push_back(u);
  }
};

}  // namespace

Trajectory evolve(const Field& u0, const Field& p, const FractionalOperator& op, const SolverConfig& cfg) {
  cfg.validate();
  if (!(u0.grid() == op.grid()) || !(p.grid() == op.grid()))
    throw ArgumentError("evolve: initial data, potential and operator must share a grid");
  if (l2_norm(u0) == 0.0) throw ArgumentError("evolve: initial data must be nonzero");

  Trajectory tr;
  Recorder rec{op, p, cfg, tr, std::vector<double>(p.size())};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p[i].real();
    if (v < 0.0) tr.clamped_magnitude = std::max(tr.clamped_magnitude, -v);
    rec.potential_weights[i] = u0.grid().cell_volume() * std::max(v, 0.0);
  }
  if (tr.clamped_magnitude > 0.0)
    tr.warnings.push_back(fmt::format("negative potential values clamped (max magnitude {:.3g})", tr.clamped_magnitude));

  const std::size_t total = cfg.step_count();
  const auto full = static_cast<std::size_t>(std::floor(cfg.T / cfg.dt + 1e-9));
  const Propagator prop(op, p, cfg.dt, cfg.scheme);
  std::optional<Propagator> last;
  if (total > full) last.emplace(op, p, cfg.T - static_cast<double>(full) * cfg.dt, cfg.scheme);

  Field u = u0;
  rec.record(0.0, u);
  for (std::size_t k = 1; k <= total; ++k) {
    const bool remainder = k > full;
    (remainder ? *last : prop).advance(u.values());
    if (!u.all_finite()) throw BlowupError(k, fmt::format("numerical blowup at step {}", k));
    const bool final_step = k == total;
    if (final_step || k % cfg.record_every == 0)
      rec.record(final_step ? cfg.T : static_cast<double>(k) * cfg.dt, u);
  }
  tr.steps = total;
  return tr;
}

Trajectory solve(const Field& u0, const PotentialNet& net, double eps, const FractionalOperator& op,
                 const SolverConfig& cfg) {
  return evolve(u0, realize_net(net, eps, op.grid()), op, cfg);
}

Trajectory reference_solution(const Field& u0, const Field& p, const FractionalOperator& op, const SolverConfig& cfg) {
  cfg.validate();
  SolverConfig fine = cfg;
  fine.dt = cfg.dt / 8.0;
  fine.record_every = cfg.record_every * 8;
  return evolve(u0, p, op, fine);
}

void write_trajectory_csv(const Trajectory& tr, const std::filesystem::path& path) {
  csv::Writer w(path, {"t", "l2", "energy", "sobolev", "wrap_mass"});
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    w.row({csv::num(tr.times[i]), csv::num(tr.l2_series[i]), csv::num(tr.energy_series[i]),
           csv::num(tr.sobolev_series[i]), csv::num(tr.wrap_mass_series[i])});
}

}  // namespace vwl
