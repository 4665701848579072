#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vwl {

using Rational = boost::rational<std::int64_t>;

enum class GroupKind { abelian, heisenberg, engel };

/// Dilation structure of a homogeneous group in exponential coordinates.
///
/// The weights nu_i define D_r(x) = (r^{nu_1} x_1, ..., r^{nu_n} x_n); their
/// sum is the homogeneous dimension Q. Weights are kept as exact rationals so
/// that Q and Q-dependent exponents carry no rounding.
class GroupStructure {
 public:
  static GroupStructure abelian(int d);
  static GroupStructure heisenberg(int n);
  static GroupStructure engel();

  /// Parses "abelian:<d>", "heisenberg:<n>" or "engel".
  static GroupStructure from_preset(std::string_view name);

  GroupKind kind() const noexcept { return kind_; }
  /// d for abelian(d), n for heisenberg(n), 0 for engel.
  int preset_parameter() const noexcept { return parameter_; }
  std::string preset_name() const;

  const std::vector<Rational>& weights() const noexcept { return weights_; }
  std::size_t topological_dimension() const noexcept { return weights_.size(); }
  Rational homogeneous_dimension() const;
  /// Degree of the built-in Rockland operator (Laplacian / sub-Laplacian).
  Rational operator_degree() const noexcept { return degree_; }

  /// D_r(x); throws ArgumentError on dimension mismatch or r <= 0.
  std::vector<double> dilate(std::span<const double> x, double r) const;

  friend bool operator==(const GroupStructure&, const GroupStructure&) = default;

 private:
  GroupStructure(GroupKind kind, int parameter, std::vector<Rational> weights);

  GroupKind kind_;
  int parameter_;
  std::vector<Rational> weights_;
  Rational degree_{2};
};

inline double to_double(const Rational& q) {
  return boost::rational_cast<double>(q);
}

}  // namespace vwl
