#include "vwl/group_geometry.hpp"

#include "vwl/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <numeric>

namespace vwl {

GroupStructure::GroupStructure(GroupKind kind, int parameter, std::vector<Rational> weights)
    : kind_(kind), parameter_(parameter), weights_(std::move(weights)) {}

GroupStructure GroupStructure::abelian(int d) {
  if (d < 1) throw ArgumentError(fmt::format("abelian dimension must be >= 1, got {}", d));
  return {GroupKind::abelian, d, std::vector<Rational>(static_cast<std::size_t>(d), Rational{1})};
}

GroupStructure GroupStructure::heisenberg(int n) {
  if (n < 1) throw ArgumentError(fmt::format("heisenberg index must be >= 1, got {}", n));
  std::vector<Rational> w(static_cast<std::size_t>(2 * n), Rational{1});
  w.emplace_back(2);
  return {GroupKind::heisenberg, n, std::move(w)};
}

GroupStructure GroupStructure::engel() {
  return {GroupKind::engel, 0, {Rational{1}, Rational{1}, Rational{2}, Rational{3}}};
}

GroupStructure GroupStructure::from_preset(std::string_view name) {
  if (name == "engel") return engel();
  const auto colon = name.find(':');
  if (colon == std::string_view::npos)
    throw ArgumentError(fmt::format("unknown group preset '{}'", name));
  const auto head = name.substr(0, colon);
  const auto tail = name.substr(colon + 1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
  if (ec != std::errc{} || ptr != tail.data() + tail.size())
    throw ArgumentError(fmt::format("bad integer in group preset '{}'", name));
  if (head == "abelian") return abelian(value);
  if (head == "heisenberg") return heisenberg(value);
  throw ArgumentError(fmt::format("unknown group preset '{}'", name));
}

std::string GroupStructure::preset_name() const {
  switch (kind_) {
    case GroupKind::abelian: return fmt::format("abelian:{}", parameter_);
    case GroupKind::heisenberg: return fmt::format("heisenberg:{}", parameter_);
    case GroupKind::engel: return "engel";
  }
  return {};
}

Rational GroupStructure::homogeneous_dimension() const {
  return std::accumulate(weights_.begin(), weights_.end(), Rational{0});
}

std::vector<double> GroupStructure::dilate(std::span<const double> x, double r) const {
  if (x.size() != weights_.size())
    throw ArgumentError(fmt::format("dilate: expected {} coordinates, got {}", weights_.size(), x.size()));
  if (!(r > 0.0)) throw ArgumentError("dilate: r must be positive");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Rational& w = weights_[i];
    // integer weights go through repeated multiplication so that D_1 is exact
    const double factor = w.denominator() == 1 ? std::pow(r, static_cast<int>(w.numerator()))
                                               : std::pow(r, to_double(w));
    out[i] = factor * x[i];
  }
  return out;
}

}  // namespace vwl
