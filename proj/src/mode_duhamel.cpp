#include "vwl/mode_duhamel.hpp"

#include "vwl/errors.hpp"

#include <cmath>

namespace vwl {

namespace {

using cplx = std::complex<double>;

// (e^{i b h} - 1) / (i b), continuous at b = 0
cplx phi1(double b, double h) {
  const double x = b * h;
  if (std::abs(x) < 1e-5) {
    const cplx ix(0.0, x);
    return h * (1.0 + ix / 2.0 + ix * ix / 6.0 + ix * ix * ix / 24.0);
  }
  // e^{ix} - 1 = (cos x - 1) + i sin x, with cos x - 1 = -2 sin^2(x/2)
  const double s = std::sin(0.5 * x);
  const cplx em1(-2.0 * s * s, std::sin(x));
  return em1 / cplx(0.0, b);
}

cplx advance(double beta2s, cplx v, cplx f, double h) {
  return std::polar(1.0, beta2s * h) * v - cplx(0.0, 1.0) * f * phi1(beta2s, h);
}

}  // namespace

std::vector<ModeSample> mode_duhamel_solve(double beta2s, cplx v0, std::span<const ModeSample> forcing, double T) {
  if (forcing.empty()) throw ArgumentError("mode_duhamel_solve: empty forcing grid");
  if (!(T >= 0.0)) throw ArgumentError("mode_duhamel_solve: T must be >= 0");
  if (std::abs(forcing.front().first) > 1e-14)
    throw ArgumentError("mode_duhamel_solve: forcing grid must start at t = 0");
  std::vector<ModeSample> out;
  out.emplace_back(0.0, v0);
  if (forcing.size() == 1) {
    if (T > 0.0) throw ArgumentError("mode_duhamel_solve: forcing grid does not cover [0, T]");
    return out;
  }
  const double dt = forcing[1].first - forcing[0].first;
  if (!(dt > 0.0)) throw ArgumentError("mode_duhamel_solve: forcing times must increase");
  const double tol = 1e-9 * dt;
  for (std::size_t j = 1; j < forcing.size(); ++j) {
    if (std::abs(forcing[j].first - static_cast<double>(j) * dt) > tol * static_cast<double>(j + 1))
      throw ArgumentError("mode_duhamel_solve: forcing grid must be uniform");
  }
  if (forcing.back().first < T - tol) throw ArgumentError("mode_duhamel_solve: forcing grid does not cover [0, T]");

  cplx v = v0;
  for (std::size_t j = 0; j + 1 < forcing.size(); ++j) {
    const double t0 = forcing[j].first;
    if (t0 >= T - tol) break;
    const double t1 = std::min(forcing[j + 1].first, T);
    const cplx f = 0.5 * (forcing[j].second + forcing[j + 1].second);
    v = advance(beta2s, v, f, t1 - t0);
    out.emplace_back(t1, v);
  }
  return out;
}

}  // namespace vwl
