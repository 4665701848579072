#include "oracles.hpp"
#include "vwl/errors.hpp"
#include "vwl/fields.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace vwl;

TEST_CASE("grid geometry") {
  const Grid g({4.0, 2.0}, {8, 4});
  CHECK(g.size() == 32);
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  CHECK(g.box_volume() == doctest::Approx(8.0));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-2.0));
  CHECK(g.coordinate(1, 3) == doctest::Approx(0.5));
  CHECK(Grid::wavenumber(5, 8) == -3);
  CHECK(g.unravel(5) == std::vector<std::size_t>{1, 1});
  CHECK_THROWS_AS(Grid({1.0}, {6}), ArgumentError);
  CHECK_THROWS_AS(Grid({1.0, 1.0}, {8}), ArgumentError);
}

TEST_CASE("lp norms") {
  const Grid unit({1.0}, {64});
  for (double q : {1.0, 2.0, 3.5, double(INFINITY)}) CHECK(lp_norm(Field::constant(unit, 1.0), q) == doctest::Approx(1.0));

  Field half(unit);
  for (std::size_t i = 0; i < 32; ++i) half[i] = 2.0;
  CHECK(lp_norm(half, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const Grid g = Grid::uniform1d(40.0, 1024);
  const Field gauss = Field::sample(g, [](auto x) { return std::exp(-x[0] * x[0] / 2); });
  const double exact = std::sqrt(oracle::simpson([](double x) { return std::exp(-x * x); }, -20, 20, 40000));
  CHECK(std::abs(exact - std::pow(M_PI, 0.25)) < 1e-12);
  CHECK(std::abs(lp_norm(gauss, 2.0) - exact) < 1e-8);
  CHECK_THROWS_AS(lp_norm(gauss, 0.5), ArgumentError);
}

TEST_CASE("lp norm homogeneity and Hoelder") {
  const Grid g = Grid::uniform1d(10.0, 256);
  const Field f = random_field(g, 3);
  const cplx c(-2.5, 1.2);
  for (double q : {1.0, 2.0, 4.0, double(INFINITY)})
    CHECK(lp_norm(c * f, q) == doctest::Approx(std::abs(c) * lp_norm(f, q)).epsilon(1e-13));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Field a(g), b(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  for (double q : {1.5, 2.0, 3.0}) {
    const double qc = q / (q - 1.0);
    CHECK(lp_norm(pointwise(a, b), 1.0) <= lp_norm(a, qc) * lp_norm(b, q) * (1 + 1e-14));
  }
}

TEST_CASE("inner products of modes") {
  const Grid g = Grid::uniform1d(8.0, 128);
  const double L = 8.0;
  const Field f = Field::sample(g, [&](auto x) { return std::polar(1.0, 2 * M_PI * x[0] / L); });
  const Field h = Field::sample(g, [&](auto x) { return std::polar(1.0, 4 * M_PI * x[0] / L); });
  CHECK(std::abs(inner(f, h)) <= 1e-12 * l2_norm(f) * l2_norm(h));
  CHECK(std::abs(inner(f, Field(g))) == 0.0);
  CHECK(inner(f, f).real() == doctest::Approx(L));
}

TEST_CASE("transform round trip and Parseval") {
  for (const Grid& g : {Grid::uniform1d(20.0, 256), Grid({6.0, 3.0}, {32, 16})}) {
    const Transform t(g);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Field f = random_field(g, seed);
      const auto coeffs = t.forward(f);
      const double direct = std::pow(l2_norm(f), 2);
      CHECK(std::abs(spectral_l2_squared(g, coeffs) - direct) <= 1e-12 * direct);
      const Field back = t.inverse(coeffs);
      CHECK(l2_norm(back - f) <= 1e-13 * l2_norm(f));
    }
  }
}

TEST_CASE("transform matches a direct DFT") {
  const Grid g = Grid::uniform1d(5.0, 16);
  const Field f = random_field(g, 9);
  const auto coeffs = Transform(g).forward(f);
  for (std::size_t j = 0; j < g.size(); ++j) {
    cplx sum = 0;
    for (std::size_t x = 0; x < g.size(); ++x)
      sum += f[x] * std::polar(1.0, -g.frequency(0, j) * (g.coordinate(0, x) - g.coordinate(0, 0)));
    CHECK(std::abs(coeffs[j] - g.cell_volume() * sum) < 1e-12);
  }
}

TEST_CASE("random fields are deterministic and normalized") {
  const Grid g = Grid::uniform1d(10.0, 128);
  const Field a = random_field(g, 42), b = random_field(g, 42), c = random_field(g, 43);
  CHECK(l2_norm(a - b) == 0.0);
  CHECK(l2_norm(a - c) > 0.1);
  CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("binary snapshot round trip") {
  const Grid g({2.0, 4.0}, {8, 16});
  const Field f = random_field(g, 5);
  const auto path = std::filesystem::temp_directory_path() / "vwl_field_roundtrip.bin";
  write_field_binary(f, path);
  const Field r = read_field_binary(path);
  CHECK(r.grid() == g);
  CHECK(l2_norm(r - f) < 1e-6);  // complex64 storage
}
