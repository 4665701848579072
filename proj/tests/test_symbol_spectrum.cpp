#include "oracles.hpp"
#include "vwl/errors.hpp"
#include "vwl/symbol_spectrum.hpp"

#include <doctest.h>

#include <cmath>

using namespace vwl;

TEST_CASE("heisenberg spectra") {
  CHECK(heisenberg_spectrum(1, 1.0, 3).eigenvalues == std::vector<double>{1, 3, 5});
  CHECK(heisenberg_spectrum(2, 1.0, 4).eigenvalues == std::vector<double>{2, 4, 4, 6});
  CHECK(heisenberg_spectrum(1, -2.0, 2).eigenvalues == std::vector<double>{2, 6});
  CHECK_THROWS_AS(heisenberg_spectrum(1, 0.0, 2), ArgumentError);
}

TEST_CASE("heisenberg spectrum matches brute-force enumeration") {
  for (int n : {1, 2, 3}) {
    for (double lambda : {1.0, 0.5}) {
      const auto exact = heisenberg_spectrum(n, lambda, 50).eigenvalues;
      const auto brute = oracle::heisenberg_bruteforce(n, lambda, 60);
      REQUIRE(exact.size() == 50);
      for (std::size_t i = 0; i < 50; ++i) CHECK(exact[i] == brute[i]);
    }
  }
}

TEST_CASE("hermite pipeline reproduces the harmonic oscillator") {
  HermiteProblem h{[](double u) { return u * u; }, 2, 1.0};
  const auto ev = hermite_eigenvalues(h, 64, 10);
  for (std::size_t k = 0; k < 10; ++k) CHECK(std::abs(ev[k] - (2.0 * k + 1)) < 1e-8);
  // A mismatched scale must still converge.
  HermiteProblem scaled{[](double u) { return u * u; }, 2, 1.3};
  const auto ev2 = hermite_eigenvalues(scaled, 128, 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(ev2[k] - (2.0 * k + 1)) < 1e-8);
}

TEST_CASE("engel ground energy matches a finite-difference oracle") {
  const auto sp = engel_symbol_spectrum(1.0, 0.0, 256, 5);
  CHECK(sp.converged);
  const double fd = oracle::fd_ground_state_extrapolated([](double u) { return u * u * u * u / 4; }, 10.0, 100000);
  CHECK(std::abs(sp.eigenvalues[0] - fd) < 1e-6);
  for (std::size_t i = 1; i < sp.eigenvalues.size(); ++i) CHECK(sp.eigenvalues[i] > sp.eigenvalues[i - 1]);
}

TEST_CASE("engel spectrum at nonzero mu") {
  const double lambda = 1.5, mu = 2.0;
  const auto sp = engel_symbol_spectrum(lambda, mu, 256, 3);
  const double fd = oracle::fd_ground_state_extrapolated(
      [=](double u) { return 0.25 * std::pow(lambda * u * u - mu / lambda, 2); }, 10.0, 100000);
  CHECK(std::abs(sp.eigenvalues[0] - fd) < 1e-6);
  // The potential only depends on (lambda u^2 - mu/lambda)^2, which is even in lambda at fixed mu.
  const auto flipped = engel_symbol_spectrum(-lambda, mu, 256, 5);
  const auto base = engel_symbol_spectrum(lambda, mu, 256, 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(flipped.eigenvalues[i] - base.eigenvalues[i]) < 1e-8);
}

TEST_CASE("engel basis stability and preconditions") {
  const auto a = engel_symbol_spectrum(1.0, 0.0, 128, 1).eigenvalues[0];
  const auto b = engel_symbol_spectrum(1.0, 0.0, 256, 1).eigenvalues[0];
  CHECK(std::abs(a - b) < 1e-6);
  CHECK_THROWS_AS(engel_symbol_spectrum(0.0, 1.0, 256, 5), ArgumentError);
  CHECK_THROWS_AS(engel_symbol_spectrum(1.0, 0.0, 16, 5), ArgumentError);
}
