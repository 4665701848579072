#include "vwl/symbol_spectrum.hpp"

#include "vwl/errors.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace vwl {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Gauss-Hermite nodes for weight e^{-x^2}, from the Jacobi matrix.
Eigen::VectorXd gauss_hermite_nodes(std::size_t k) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::VectorXd off(static_cast<Eigen::Index>(k - 1));
  for (std::size_t j = 1; j < k; ++j) off(static_cast<Eigen::Index>(j - 1)) = std::sqrt(0.5 * static_cast<double>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Normalized Hermite functions h_j(x) = H_j(x) e^{-x^2/2} / sqrt(2^j j! sqrt(pi)),
// j < rows, at each node (one column per node), by the three-term recurrence.
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& x, std::size_t rows) {
  const auto nodes = x.size();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(rows), nodes);
  const double c0 = std::pow(M_PI, -0.25);
  for (Eigen::Index k = 0; k < nodes; ++k) {
    double prev = 0.0;
    double cur = c0 * std::exp(-0.5 * x(k) * x(k));
    h(0, k) = cur;
    for (std::size_t j = 1; j < rows; ++j) {
      const double jd = static_cast<double>(j);
      const double next = std::sqrt(2.0 / jd) * x(k) * cur - std::sqrt((jd - 1.0) / jd) * prev;
      prev = cur;
      cur = next;
      h(static_cast<Eigen::Index>(j), k) = cur;
    }
  }
  return h;
}

void check_count(std::size_t basis_size, std::size_t count) {
  if (count < 1) throw ArgumentError("spectrum: count must be >= 1");
  if (basis_size < count) throw ArgumentError("spectrum: basis_size must be >= count");
}

}  // namespace

SymbolSpectrum heisenberg_spectrum(int n, double lambda, std::size_t count) {
  if (n < 1) throw ArgumentError("heisenberg_spectrum: n must be >= 1");
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw ArgumentError("heisenberg_spectrum: lambda must be nonzero (non-trivial representation)");
  if (count < 1) throw ArgumentError("heisenberg_spectrum: count must be >= 1");
  SymbolSpectrum out;
  const auto nn = static_cast<std::size_t>(n);
  // level L = |l| has value |lambda|(2L + n) and C(L + n - 1, n - 1) multi-indices
  for (std::size_t level = 0; out.eigenvalues.size() < count; ++level) {
    const std::size_t mult = binomial(level + nn - 1, nn - 1);
    const double value = std::abs(lambda) * static_cast<double>(2 * level + nn);
    for (std::size_t m = 0; m < mult && out.eigenvalues.size() < count; ++m) {
      out.eigenvalues.push_back(value);
      out.multiplicities.push_back(mult);
    }
  }
  out.basis_size = 0;
  return out;
}

std::vector<double> hermite_eigenvalues(const HermiteProblem& problem, std::size_t basis_size, std::size_t count) {
  check_count(basis_size, count);
  if (!(problem.scale > 0.0)) throw ArgumentError("hermite: scale must be positive");
  const std::size_t b = basis_size;
  // exact for integrands h_i h_j V with deg V <= potential_degree
  const std::size_t nodes = b + static_cast<std::size_t>(std::max(problem.potential_degree, 0)) / 2 + 4;
  const Eigen::VectorXd x = gauss_hermite_nodes(nodes);
  const Eigen::MatrixXd h = hermite_functions(x, nodes);

  // Christoffel weights with e^{x^2} folded in: w_k e^{x_k^2} = 1 / sum_j h_j(x_k)^2
  Eigen::VectorXd wv(static_cast<Eigen::Index>(nodes));
  const double alpha = problem.scale;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double christoffel = 1.0 / h.col(k).squaredNorm();
    wv(k) = christoffel * problem.potential(x(k) / alpha);
  }
  const auto bi = static_cast<Eigen::Index>(b);
  const Eigen::MatrixXd hb = h.topRows(bi);
  Eigen::MatrixXd m = hb * wv.asDiagonal() * hb.transpose();

  // -d^2/du^2 in the scaled basis is alpha^2 times (2N + 1 - a^2 - a^dag^2) / 2
  const double a2 = alpha * alpha;
  for (Eigen::Index i = 0; i < bi; ++i) {
    const double id = static_cast<double>(i);
    m(i, i) += a2 * (id + 0.5);
    if (i + 2 < bi) {
      const double off = -0.5 * a2 * std::sqrt((id + 1.0) * (id + 2.0));
      m(i, i + 2) += off;
      m(i + 2, i) += off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermite: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + static_cast<std::ptrdiff_t>(count)};
}

SymbolSpectrum hermite_spectrum(const HermiteProblem& problem, std::size_t basis_size, std::size_t count,
                                double tolerance) {
  SymbolSpectrum out;
  out.eigenvalues = hermite_eigenvalues(problem, basis_size, count);
  out.multiplicities.assign(count, 1);
  out.basis_size = basis_size;
  const std::size_t half = basis_size / 2;
  if (half >= count) {
    const auto coarse = hermite_eigenvalues(problem, half, count);
    double change = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      change = std::max(change, std::abs(out.eigenvalues[i] - coarse[i]) / std::abs(out.eigenvalues[i]));
    out.relative_change = change;
    out.converged = change < tolerance;
  } else {
    out.relative_change = std::numeric_limits<double>::infinity();
    out.converged = false;
  }
  return out;
}

SymbolSpectrum engel_symbol_spectrum(double lambda, double mu, std::size_t basis_size, std::size_t count) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw ArgumentError("engel_symbol_spectrum: lambda must be nonzero (non-trivial representation)");
  if (count < 1) throw ArgumentError("engel_symbol_spectrum: count must be >= 1");
  if (basis_size < 4 * count)
    throw ArgumentError(fmt::format("engel_symbol_spectrum: basis_size must be >= 4*count ({}), got {}",
                                    4 * count, basis_size));
  HermiteProblem problem;
  const double shift = mu / lambda;
  problem.potential = [lambda, shift](double u) {
    const double q = lambda * u * u - shift;
    return 0.25 * q * q;
  };
  problem.potential_degree = 4;
  // ground-state length of -d^2 + c u^4 is c^{-1/6}, c = lambda^2 / 4
  problem.scale = std::pow(0.25 * lambda * lambda, 1.0 / 6.0);
  return hermite_spectrum(problem, basis_size, count);
}

SymbolSpectrum symbol_spectrum(const SymbolModel& model, std::size_t count) {
  return std::visit(
      [count](const auto& m) -> SymbolSpectrum {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HeisenbergSymbol>) {
          return heisenberg_spectrum(m.n, m.lambda, count);
        } else {
          return engel_symbol_spectrum(m.lambda, m.mu, m.basis_size, count);
        }
      },
      model);
}

}  // namespace vwl
