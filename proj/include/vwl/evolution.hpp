#pragma once

#include "vwl/fields.hpp"
#include "vwl/mollifier.hpp"
#include "vwl/spectral_operator.hpp"

#include <string>
#include <vector>

namespace vwl {

enum class Scheme { lie, strang };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme s);

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  Scheme scheme = Scheme::strang;
  /// Record diagnostics every this many steps (the final time is always recorded).
  std::size_t record_every = 1;
  /// Fraction of L^2 mass allowed in the boundary layer before a warning.
  double wrap_mass_threshold = 1e-8;
  /// Width of the boundary layer on each side, as a fraction of the box.
  double boundary_fraction = 0.05;
  /// Keep field snapshots at the recorded times.
  bool keep_states = true;

  /// Throws ArgumentError unless dt > 0, T >= dt and record_every >= 1.
  void validate() const;
  /// floor(T/dt) full steps, plus one shorter step when T is not a multiple of dt.
  std::size_t step_count() const;
};

/// Solution history of one run of i u_t + R^s u + p u = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<double> l2_series;
  /// E(t) = ||R^{s/2} u||^2 + ||sqrt(p) u||^2.
  std::vector<double> energy_series;
  /// ||u||_{H^{s nu / 2}} = ||R^{s/2} u|| + ||u||.
  std::vector<double> sobolev_series;
  /// Fraction of L^2 mass within the boundary layer.
  std::vector<double> wrap_mass_series;
  std::vector<std::string> warnings;
  std::size_t steps = 0;
  bool wrap_threshold_breached = false;
  /// Largest negative potential value clamped to 0 before taking sqrt(p).
  double clamped_magnitude = 0.0;

  /// max_t |E(t) - E(0)|.
  double max_energy_deviation() const;
  /// max_t |E(t) - E(0)| / E(0).
  double energy_drift() const;
  /// max_t | ||u(t)|| - ||u(0)|| | / ||u(0)||.
  double l2_drift() const;
  double max_sobolev() const;
};

/// Split-step propagator for a fixed potential and step size.
///
/// Sign convention: u_t = i (R^s u + p u). Free flight multiplies the
/// coefficient at xi by e^{i sigma(xi)^s dt}; the potential substep multiplies
/// by e^{i p(x) dt}. Strang: half potential, free flight, half potential.
/// Lie: full potential then free flight. Every substep is unitary.
class Propagator {
 public:
  Propagator(const FractionalOperator& op, const Field& potential, double dt, Scheme scheme);

  double dt() const noexcept { return dt_; }
  /// Advances `values` (one state on the operator grid) by one step in place.
  void advance(std::span<cplx> values) const;

 private:
  const FractionalOperator& op_;
  double dt_;
  Scheme scheme_;
  std::vector<cplx> potential_phase_;  // half step for strang, full for lie
  std::vector<cplx> free_phase_;       // includes the 1/size inverse-transform factor
};

/// One step; throws BlowupError (step index 0) if the result is not finite.
Field step(const Field& u, const Field& p, const FractionalOperator& op, double dt, Scheme scheme);

/// Evolves u0 under the fixed nonnegative potential p.
Trajectory evolve(const Field& u0, const Field& p, const FractionalOperator& op, const SolverConfig& cfg);

/// evolve with p = realize_net(net, eps).
Trajectory solve(const Field& u0, const PotentialNet& net, double eps, const FractionalOperator& op,
                 const SolverConfig& cfg);

/// evolve at dt/8, recording at the same times as a cfg run would.
Trajectory reference_solution(const Field& u0, const Field& p, const FractionalOperator& op, const SolverConfig& cfg);

/// Energy functional E = ||R^{s/2} u||^2 + ||sqrt(p) u||^2 (negative p clamped).
double energy(const Field& u, const Field& p, const FractionalOperator& op);

/// Fraction of ||u||^2 within `boundary_fraction` of the box faces.
double wrap_mass_fraction(const Field& u, double boundary_fraction);

/// Writes t, l2, energy, sobolev, wrap_mass rows.
void write_trajectory_csv(const Trajectory& tr, const std::filesystem::path& path);

}  // namespace vwl
