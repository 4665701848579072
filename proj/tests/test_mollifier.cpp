#include "vwl/errors.hpp"
#include "vwl/mollifier.hpp"

#include <doctest.h>

#include <cmath>

using namespace vwl;

namespace {

const std::vector<double> kEps{1.0, 0.7, 0.49, 0.343, 0.2401, 0.16807};

}  // namespace

TEST_CASE("eps = 1 samples the profile itself") {
  const Mollifier m(GroupStructure::abelian(1));
  const Grid g = Grid::uniform1d(4.0, 64);
  const Field f = scaled_mollifier(m, 1.0, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    const std::vector<double> pt{x};
    CHECK(f[i].real() == doctest::Approx(m.evaluate(pt)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(scaled_mollifier(m, 1.5, g), ArgumentError);
  CHECK_THROWS_AS(scaled_mollifier(m, 0.0, g), ArgumentError);
}

TEST_CASE("profile normalization is exact") {
  // (1 - x^2)^4 on [-1,1] integrates to 256/315.
  const Mollifier m(GroupStructure::abelian(1));
  CHECK(m.normalization() == doctest::Approx(315.0 / 256.0).epsilon(1e-14));
  // (1 - r^2)^4 over the unit disk: pi / 5.
  CHECK(Mollifier(GroupStructure::abelian(2)).normalization() == doctest::Approx(5.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("sampled kernels carry unit discrete mass") {
  const Mollifier m(GroupStructure::abelian(1), PolynomialBump{}, 2.0);
  const Grid g = Grid::uniform1d(40.0, 1024);
  for (double eps : {0.5, 0.3, 0.2, 0.1, 0.08}) {
    CHECK(std::abs(discrete_mass(scaled_mollifier(m, eps, g)) - 1.0) <= 1e-12);
    CHECK(std::abs(discrete_mass(scaled_mollifier_kernel(m, eps, g)) - 1.0) <= 1e-12);
  }
  const Mollifier gauss(GroupStructure::abelian(1), TruncatedGaussian{0.35}, 1.0);
  CHECK(std::abs(discrete_mass(scaled_mollifier(gauss, 0.5, Grid::uniform1d(8.0, 512))) - 1.0) <= 1e-12);
  const Mollifier h(GroupStructure::heisenberg(1));
  CHECK(std::abs(discrete_mass(scaled_mollifier(h, 1.0, Grid({4, 4, 4}, {32, 32, 32}))) - 1.0) <= 1e-12);
}

TEST_CASE("quadrature defect of the plain samples") {
  // Trapezoidal sums of (1 - x^2)^4 converge like h^5; at 24 or more points
  // across the support the defect stays below 1e-6 for any node alignment.
  const Mollifier m(GroupStructure::abelian(1), PolynomialBump{}, 2.0);
  const Grid g = Grid::uniform1d(40.0, 1024);
  for (double eps : {0.5, 0.4, 0.3, 0.25}) {
    REQUIRE(2 * m.support_halfwidth(0, eps) / g.spacing(0) >= 24);
    CHECK(std::abs(quadrature_defect(m, eps, g)) <= 1e-6);
  }
  const double coarse = std::abs(quadrature_defect(m, 0.25, g));
  const double fine = std::abs(quadrature_defect(m, 0.25, g.refined(2)));
  CHECK(fine < coarse / 8);
  const Mollifier h(GroupStructure::heisenberg(1));
  CHECK(std::abs(quadrature_defect(h, 1.0, Grid({4, 4, 4}, {64, 64, 64}))) <= 1e-6);
}

TEST_CASE("resolution errors") {
  const Mollifier m(GroupStructure::abelian(1));
  const Grid g = Grid::uniform1d(40.0, 1024);
  CHECK_THROWS_AS(scaled_mollifier(m, 0.1, g), ResolutionError);
  CHECK_FALSE(m.resolvable(g, 0.1));
  CHECK(m.resolvable(g, 0.2));
  const Grid small = Grid::uniform1d(1.5, 1024);
  CHECK_THROWS_AS(scaled_mollifier(m, 1.0, small), ResolutionError);
}

TEST_CASE("peak scales like eps^-Q on every preset") {
  for (const auto* name : {"abelian:1", "abelian:3", "heisenberg:1", "heisenberg:2", "engel"}) {
    const auto g = GroupStructure::from_preset(name);
    const auto r = mollifier_peak_scaling(Mollifier(g), kEps);
    const double Q = to_double(g.homogeneous_dimension());
    CHECK(r.slope == doctest::Approx(-Q).epsilon(1e-12));
    CHECK(r.residual < 1e-3);
    CHECK(r.verdict);
  }
}

TEST_CASE("net norms scale as predicted") {
  const Mollifier m(GroupStructure::abelian(1), PolynomialBump{}, 2.0);
  const Grid g = Grid::uniform1d(40.0, 1024);
  const auto sup = moderateness_slope(PotentialNet::delta(m), NormSpec::sup(), kEps, g);
  CHECK(std::abs(sup.slope + 1.0) <= 0.05);
  const auto l1 = moderateness_slope(PotentialNet::delta(m), NormSpec::lq(1.0), kEps, g);
  CHECK(std::abs(l1.slope) <= 1e-6);
  const auto sq = moderateness_slope(PotentialNet::delta_squared(m), NormSpec::sup(), kEps, g);
  CHECK(std::abs(sq.slope + 2.0) <= 0.05);
}

TEST_CASE("mollified smooth potentials converge in sup norm") {
  const Mollifier m(GroupStructure::abelian(1));
  const Grid g = Grid::uniform1d(20.0, 2048);
  const Field p = Field::sample(g, [](auto x) { return std::exp(-x[0] * x[0]); });
  const auto net = PotentialNet::mollified(m, p);
  const double lipschitz = std::sqrt(2.0 / std::exp(1.0));
  double previous = INFINITY;
  for (double eps : {0.8, 0.4, 0.2, 0.1}) {
    const double err = lp_norm(realize_net(net, eps, g) - p, INFINITY);
    CHECK(err <= lipschitz * eps * m.radius());
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("constant shift is negligible and realizations are nonnegative") {
  const Mollifier m(GroupStructure::abelian(1), PolynomialBump{}, 2.0);
  const Grid g = Grid::uniform1d(40.0, 1024);
  const auto base = PotentialNet::delta(m);
  const auto shifted = PotentialNet::constant_shifted(base);
  for (int k = 1; k <= 8; ++k) {
    const double eps = 1.0 / (3.0 * k);
    if (!m.resolvable(g, eps)) continue;
    const double diff = lp_norm(realize_net(shifted, eps, g) - realize_net(base, eps, g), INFINITY);
    CHECK(diff == doctest::Approx(std::exp(-1.0 / eps)).epsilon(1e-6));
    CHECK(diff < std::pow(eps, k));
  }
  const Field wiggly = Field::sample(g, [](auto x) { return std::abs(std::sin(3 * x[0])) * (std::abs(x[0]) < 5); });
  for (const auto& net : {base, PotentialNet::delta_squared(m), PotentialNet::mollified(m, wiggly)}) {
    for (double eps : {0.5, 0.2}) {
      const Field p = realize_net(net, eps, g);
      for (const auto& v : p.values()) {
        CHECK(v.real() >= 0.0);
        CHECK(v.imag() == 0.0);
      }
    }
  }
}
