#pragma once

#include "vwl/fields.hpp"

#include <memory>
#include <span>
#include <vector>

namespace vwl {

struct PowerResult {
  Field field;
  /// Set when a < 0: the zero Fourier mode has been projected out instead of
  /// being multiplied by an infinite factor.
  bool zero_mode_projected = false;
};

/// The fractional power (-Delta)^s of the Laplacian on the periodic box, as a
/// spectral multiplier. sigma(xi) = |xi|^2 and the operator degree is 2.
///
/// The multiplier tables are built once at construction; all member functions
/// are const and may be called concurrently.
class FractionalOperator {
 public:
  FractionalOperator(const Grid& grid, double s, double degree = 2.0);

  /// Same grid and power but with sigma == 0 everywhere (no kinetic term).
  static FractionalOperator without_kinetic(const Grid& grid, double s);

  const Grid& grid() const noexcept { return transform_->grid(); }
  const Transform& transform() const noexcept { return *transform_; }
  std::shared_ptr<const Transform> shared_transform() const noexcept { return transform_; }
  double s() const noexcept { return s_; }
  double degree() const noexcept { return degree_; }
  /// Homogeneous dimension of the abelian model (= number of axes).
  double homogeneous_dimension() const noexcept { return static_cast<double>(grid().dims()); }

  /// sigma(xi) per coefficient, transform order.
  std::span<const double> symbol() const noexcept { return sigma_; }
  /// sigma(xi)^s per coefficient, transform order.
  std::span<const double> symbol_power_s() const noexcept { return sigma_s_; }
  /// sigma^a with the convention 0^a = 0 for a < 0 (projected zero mode) and 0^0 = 1.
  std::vector<double> symbol_power(double a) const;

  /// Multiplies Fourier coefficients by sigma(xi)^a.
  PowerResult apply_power(const Field& f, double a) const;

  /// ||R^{a/nu} f||_{L^2} computed on the spectral side.
  double seminorm(const Field& f, double order) const;
  /// ||R^{a/nu} f||_{L^2} + ||f||_{L^2}. Throws ArgumentError for order < 0.
  double sobolev_norm(const Field& f, double order) const;

  /// Same helpers on already transformed coefficients.
  double seminorm_from_coeffs(std::span<const cplx> coeffs, double order) const;

 private:
  FractionalOperator(std::shared_ptr<const Transform> t, double s, double degree, bool kinetic);

  std::shared_ptr<const Transform> transform_;
  double s_;
  double degree_;
  std::vector<double> sigma_;
  std::vector<double> sigma_s_;
};

}  // namespace vwl
