#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace vwl {

/// Eigenvalues of pi(R) for one non-trivial representation, i.e. the diagonal
/// entries pi_k^2 of its matrix form, sorted ascending.
struct SymbolSpectrum {
  std::vector<double> eigenvalues;
  /// Degeneracy of each listed eigenvalue (1 for the Engel model).
  std::vector<std::size_t> multiplicities;
  std::size_t basis_size = 0;
  /// Max relative change of the listed eigenvalues between basis_size and basis_size/2.
  double relative_change = 0.0;
  bool converged = true;
};

/// First `count` eigenvalues of the Heisenberg harmonic oscillator symbol
/// |lambda| (2|l| + n), l in N^n, listed with multiplicity.
/// Throws ArgumentError for lambda == 0, n < 1 or count < 1.
SymbolSpectrum heisenberg_spectrum(int n, double lambda, std::size_t count);

/// Lowest eigenvalues of -d^2/du^2 + V(u) in a Hermite-function basis.
///
/// Matrix elements of V are computed by Gauss-Hermite quadrature with enough
/// nodes to be exact for polynomial V of degree <= `potential_degree`; the
/// kinetic part is exact. Basis functions are sqrt(scale) h_j(scale*u).
struct HermiteProblem {
  std::function<double(double)> potential;
  int potential_degree = 4;
  double scale = 1.0;
};

std::vector<double> hermite_eigenvalues(const HermiteProblem& problem, std::size_t basis_size, std::size_t count);

/// Same, plus a convergence check against a run with basis_size / 2.
SymbolSpectrum hermite_spectrum(const HermiteProblem& problem, std::size_t basis_size, std::size_t count,
                                double tolerance = 1e-6);

/// Lowest eigenvalues of -A = -d^2/du^2 + (1/4)(lambda u^2 - mu/lambda)^2, the
/// sub-Laplacian symbol of the Engel group at representation (lambda, mu).
/// Requires basis_size >= 4 * count; throws ArgumentError for lambda == 0.
SymbolSpectrum engel_symbol_spectrum(double lambda, double mu, std::size_t basis_size, std::size_t count);

/// Tagged symbol model, as selected from the CLI.
struct HeisenbergSymbol {
  int n = 1;
  double lambda = 1.0;
};
struct EngelSymbol {
  double lambda = 1.0;
  double mu = 0.0;
  std::size_t basis_size = 256;
};
using SymbolModel = std::variant<HeisenbergSymbol, EngelSymbol>;

SymbolSpectrum symbol_spectrum(const SymbolModel& model, std::size_t count);

}  // namespace vwl
