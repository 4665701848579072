#pragma once

#include "vwl/fields.hpp"
#include "vwl/group_geometry.hpp"
#include "vwl/scaling.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vwl {

/// c (1 - |x|^2 / R^2)^k on |x| <= R.
struct PolynomialBump {
  int exponent = 4;
  friend bool operator==(const PolynomialBump&, const PolynomialBump&) = default;
};
/// c exp(-|x|^2 / (2 width^2)) on |x| <= R.
struct TruncatedGaussian {
  double width = 0.35;
  friend bool operator==(const TruncatedGaussian&, const TruncatedGaussian&) = default;
};
using BumpProfile = std::variant<PolynomialBump, TruncatedGaussian>;

/// Friedrichs mollifier psi on a homogeneous group and its dilates
///   psi_eps(x) = eps^{-Q} psi(D_{1/eps} x).
/// |x| is the Euclidean norm of the exponential coordinates; c gives unit mass
/// with respect to Lebesgue (Haar) measure.
class Mollifier {
 public:
  explicit Mollifier(GroupStructure group, BumpProfile profile = PolynomialBump{}, double radius = 1.0);

  const GroupStructure& group() const noexcept { return group_; }
  const BumpProfile& profile() const noexcept { return profile_; }
  double radius() const noexcept { return radius_; }
  double normalization() const noexcept { return norm_; }
  /// sup psi = psi(0).
  double peak() const noexcept { return norm_; }

  double evaluate(std::span<const double> x) const;
  /// psi_eps(x), evaluated directly from the formula.
  double evaluate_scaled(std::span<const double> x, double eps) const;
  /// Half-width of supp psi_eps along `axis`: eps^{nu_axis} R.
  double support_halfwidth(std::size_t axis, double eps) const;

  /// Throws ResolutionError if supp psi_eps does not fit in the grid box or
  /// has fewer than `min_cells` cells across it on some axis.
  void check_resolvable(const Grid& grid, double eps, double min_cells = 8.0) const;
  bool resolvable(const Grid& grid, double eps, double min_cells = 8.0) const;

  friend bool operator==(const Mollifier&, const Mollifier&) = default;

 private:
  GroupStructure group_;
  BumpProfile profile_;
  double radius_;
  double norm_;
};

/// psi_eps sampled on the grid (origin at the box center) and rescaled to unit
/// discrete mass. The rescale factor is 1 + quadrature_defect, O(h^{k+1}) for
/// the (1 - r^2)^k bump.
/// Throws ArgumentError for eps outside (0, 1] and ResolutionError as above.
Field scaled_mollifier(const Mollifier& m, double eps, const Grid& grid);

/// psi_eps sampled with the origin at flat index 0 (wrapped offsets); the
/// circular-convolution kernel.
Field scaled_mollifier_kernel(const Mollifier& m, double eps, const Grid& grid);

/// Discrete mass of the plain samples of psi_eps, minus one.
double quadrature_defect(const Mollifier& m, double eps, const Grid& grid);

/// cell_volume * sum Re f.
double discrete_mass(const Field& f);

/// Circular convolution f * psi_eps through the transform.
Field mollify(const Field& f, const Mollifier& m, double eps);

/// Regularizing nets for (possibly singular) nonnegative potentials.
class PotentialNet {
 public:
  struct Delta {};
  struct DeltaSquared {};
  struct Mollified {
    Field potential;
  };
  struct ConstantShifted {
    std::shared_ptr<const PotentialNet> base;
  };
  using Kind = std::variant<Delta, DeltaSquared, Mollified, ConstantShifted>;

  static PotentialNet delta(Mollifier m);
  static PotentialNet delta_squared(Mollifier m);
  static PotentialNet mollified(Mollifier m, Field p);
  /// p_eps + e^{-1/eps}.
  static PotentialNet constant_shifted(const PotentialNet& base);
  /// mollified(0): the zero net.
  static PotentialNet zero(Mollifier m, const Grid& grid);

  const Mollifier& mollifier() const noexcept { return mollifier_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;

  /// e^{-1/eps}, the constant-shift perturbation.
  static double shift(double eps);

 private:
  PotentialNet(Mollifier m, Kind k) : mollifier_(std::move(m)), kind_(std::move(k)) {}

  Mollifier mollifier_;
  Kind kind_;
};

/// p_eps on the grid. Real and nonnegative; round-off negatives from the
/// spectral convolution are clamped to 0.
Field realize_net(const PotentialNet& net, double eps, const Grid& grid);

struct NormSpec {
  /// Exponent q in [1, inf]; infinity is the sup norm.
  double q = std::numeric_limits<double>::infinity();
  static NormSpec sup() { return {}; }
  static NormSpec lq(double q) { return {q}; }
  std::string label() const;
};

/// ||p_eps|| over eps_list with a log-log fit; N = -slope. Values of eps that
/// cannot be resolved are skipped and listed in the warnings.
ScalingReport moderateness_slope(const PotentialNet& net, NormSpec norm, std::span<const double> eps_list,
                                 const Grid& grid);

/// sup psi_eps = psi_eps(0) evaluated from the formula (no grid), with fit.
ScalingReport mollifier_peak_scaling(const Mollifier& m, std::span<const double> eps_list);

}  // namespace vwl
