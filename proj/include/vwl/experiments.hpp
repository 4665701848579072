#pragma once

#include "vwl/evolution.hpp"
#include "vwl/mollifier.hpp"
#include "vwl/scaling.hpp"
#include "vwl/spectral_operator.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vwl {

/// Geometric parameter net eps_j = eps0 * ratio^j, j < count.
struct EpsilonNet {
  double eps0 = 0.5;
  double ratio = 0.7;
  std::size_t count = 6;

  /// Throws ArgumentError unless eps0 in (0,1], ratio in (0,1), count >= 5.
  void validate() const;
  std::vector<double> values() const;

  friend bool operator==(const EpsilonNet&, const EpsilonNet&) = default;
};

/// Cauchy data for the eps-problems.
///
/// A field is used as the same initial state for every eps unless
/// `mollify` is set, in which case u0 * psi_eps is used. The delta datum is
/// realized through its net psi_eps.
struct InitialData {
  struct Delta {};
  std::variant<Field, Delta> datum;
  bool mollify = false;

  static InitialData field(Field f, bool mollify = false) { return {std::move(f), mollify}; }
  static InitialData delta() { return {Delta{}, true}; }

  Field regularize(double eps, const Mollifier& m, const Grid& grid) const;
};

/// Perturbations of a net that should not change the very weak solution.
struct ConstantShift {};
/// u0 -> u0 + eps^power * g.
struct InitialDataPerturbation {
  Field direction;
  int power = 6;
};
using Perturbation = std::variant<ConstantShift, InitialDataPerturbation>;

/// Controls shared by the PDE experiments.
struct ExperimentOptions {
  /// Bounded work-pool size for per-eps runs (0 = hardware concurrency).
  std::size_t workers = 0;
  /// Absolute differences below this are round-off limited.
  double roundoff_floor = 1e-12;
  /// Allowed deviation from the closed form / linear bound in the uniqueness check.
  double bound_tolerance = 1e-10;
  /// Highest power k certified in the negligibility check.
  int max_power = 5;
  /// Final-error threshold for the consistency verdict.
  double consistency_tolerance = 1e-3;
  /// Moderateness verdict requires the log-log residual below this.
  double moderate_residual = 0.1;
};

/// sup_t ||u_eps(t)||_{H^{s nu/2}} for each eps, with the implied moderateness
/// exponent N = -slope.
ScalingReport moderateness_experiment(const InitialData& u0, const PotentialNet& net, const EpsilonNet& eps,
                                      const FractionalOperator& op, const SolverConfig& cfg,
                                      const ExperimentOptions& opts = {});

/// max_t ||u_eps(t) - u~_eps(t)||_{L^2} between the net and its perturbation.
///
/// For a constant shift the difference is compared with the global-phase
/// closed form 2 |sin(e^{-1/eps} t / 2)| ||u0_eps||. The verdict certifies
/// ||u_eps - u~_eps|| <= C_k eps^k for k = 1..max_power on the tested range:
/// C_k is the largest d(eps)/eps^k on the net, and the ratio must still fall
/// between the two smallest usable eps.
ScalingReport uniqueness_experiment(const InitialData& u0, const PotentialNet& net, const EpsilonNet& eps,
                                    const FractionalOperator& op, const SolverConfig& cfg,
                                    const Perturbation& perturbation = ConstantShift{},
                                    const ExperimentOptions& opts = {});

/// max_t ||u_eps(t) - u(t)||_{L^2} against the fine-step classical solution u
/// for the potential p, with p_eps = p * psi_eps.
ScalingReport consistency_experiment(const InitialData& u0, const Field& p_classical, const Mollifier& mollifier,
                                     const EpsilonNet& eps, const FractionalOperator& op, const SolverConfig& cfg,
                                     const ExperimentOptions& opts = {});

enum class Estimate { prop1, prop2 };
Estimate estimate_from_string(const std::string& name);
std::string to_string(Estimate e);

/// Throws PreconditionError unless Q > nu s.
void require_sobolev_subcritical(double Q, double nu, double s);

struct AprioriReport {
  std::string estimate;
  double lhs = 0.0;  // sup_t ||u(t)||_H
  double rhs = 0.0;  // bound with constant 1
  double ratio = 0.0;
  double c_max = 10.0;
  bool bounded = false;
  nlohmann::json norms = nlohmann::json::object();
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Compares sup_t ||u(t)||_{H^{s nu/2}} with
///   prop1: (1 + ||p||_inf) ||u0||_H
///   prop2: ||u0||_H (1 + ||p||_{2Q/(nu s)}) (1 + ||p||_{Q/(nu s)})^{1/2}   (needs Q > nu s)
AprioriReport apriori_check(const Field& u0, const Field& p, const FractionalOperator& op, const SolverConfig& cfg,
                            Estimate which, double c_max = 10.0);

/// Exponents of an embedding of homogeneous Sobolev spaces
///   ||f||_{L^{q0}_a} <= C ||f||_{L^{q~0}_b},  b - a = Q (1/q~0 - 1/q0).
struct EmbeddingExponents {
  double a = 0.0;
  double b = 0.0;
  double q_tilde = 2.0;
  /// Derived from the relation when absent; checked against it when given.
  std::optional<double> q0;

  /// Returns q0; throws ArgumentError if the relation or 1 < q~0 < q0 < inf fails.
  double resolve_q0(double Q) const;
};

struct EmbeddingReport {
  double q0 = 0.0;
  EmbeddingExponents exponents;
  std::vector<double> ratios;          // base grid
  std::vector<double> refined_ratios;  // 2x refined grid
  double constant = 0.0;               // max ratio on the base grid
  double refined_constant = 0.0;
  double drift = 0.0;  // relative change of the constant under refinement
  bool holds = false;

  nlohmann::json to_json() const;
};

using FieldFunction = std::function<cplx(std::span<const double>)>;

/// ||R^{a/nu} f||_{q0} / ||R^{b/nu} f||_{q~0}.
double embedding_ratio(const FractionalOperator& op, const Field& f, double a, double b, double q0, double q_tilde);

/// Empirical embedding constants for a family on op's grid and on a 2x
/// refinement; holds if all ratios are finite and the constant drifts < 10%.
EmbeddingReport embedding_check(const FractionalOperator& op, std::span<const FieldFunction> family,
                                const EmbeddingExponents& exps);

}  // namespace vwl
