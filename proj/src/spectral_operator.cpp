#include "vwl/spectral_operator.hpp"

#include "vwl/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vwl {

namespace {

double power_or_zero(double sigma, double a) {
  if (a == 0.0) return 1.0;
  if (sigma == 0.0) return 0.0;
  return std::pow(sigma, a);
}

}  // namespace

FractionalOperator::FractionalOperator(const Grid& grid, double s, double degree)
    : FractionalOperator(std::make_shared<const Transform>(grid), s, degree, true) {}

FractionalOperator FractionalOperator::without_kinetic(const Grid& grid, double s) {
  return FractionalOperator(std::make_shared<const Transform>(grid), s, 2.0, false);
}

FractionalOperator::FractionalOperator(std::shared_ptr<const Transform> t, double s, double degree, bool kinetic)
    : transform_(std::move(t)), s_(s), degree_(degree) {
  if (!(s > 0.0)) throw ArgumentError(fmt::format("fractional power s must be positive, got {}", s));
  if (!(degree > 0.0)) throw ArgumentError("operator degree must be positive");
  const Grid& g = grid();
  sigma_.resize(g.size());
  sigma_s_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double xi2 = 0.0;
    if (kinetic) {
      const auto idx = g.unravel(i);
      for (std::size_t a = 0; a < g.dims(); ++a) {
        const double xi = g.frequency(a, idx[a]);
        xi2 += xi * xi;
      }
    }
    sigma_[i] = xi2;
    sigma_s_[i] = power_or_zero(xi2, s);
  }
}

std::vector<double> FractionalOperator::symbol_power(double a) const {
  std::vector<double> out(sigma_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = power_or_zero(sigma_[i], a);
  return out;
}

PowerResult FractionalOperator::apply_power(const Field& f, double a) const {
  auto c = transform_->forward(f);
  bool projected = false;
  if (a != 0.0) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (sigma_[i] == 0.0 && a < 0.0) projected = true;
      c[i] *= power_or_zero(sigma_[i], a);
    }
  }
  return {transform_->inverse(std::move(c)), projected};
}

double FractionalOperator::seminorm_from_coeffs(std::span<const cplx> coeffs, double order) const {
  const double a = order / degree_;
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double m = power_or_zero(sigma_[i], a);
    sum += m * m * std::norm(coeffs[i]);
  }
  return std::sqrt(sum / grid().box_volume());
}

double FractionalOperator::seminorm(const Field& f, double order) const {
  return seminorm_from_coeffs(transform_->forward(f), order);
}

double FractionalOperator::sobolev_norm(const Field& f, double order) const {
  if (order < 0.0) throw ArgumentError(fmt::format("sobolev_norm: order must be >= 0, got {}", order));
  const auto c = transform_->forward(f);
  return seminorm_from_coeffs(c, order) + std::sqrt(spectral_l2_squared(grid(), c));
}

}  // namespace vwl
