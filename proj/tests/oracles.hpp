#pragma once

// Independent reference computations used only by the tests. None of these
// share code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Classical RK4 for i v' + beta v = f(t), i.e. v' = i (beta v - f(t)).
inline std::vector<cplx> rk4_mode(double beta, cplx v0, const std::function<cplx(double)>& f, double T, double dt,
                                  const std::vector<double>& sample_times) {
  auto rhs = [&](double t, cplx v) { return cplx(0, 1) * (beta * v - f(t)); };
  std::vector<cplx> out;
  cplx v = v0;
  double t = 0.0;
  std::size_t next = 0;
  const auto steps = static_cast<long>(std::llround(T / dt));
  for (long k = 0; k <= steps; ++k) {
    t = k * dt;
    while (next < sample_times.size() && std::abs(sample_times[next] - t) < 0.5 * dt) {
      out.push_back(v);
      ++next;
    }
    if (k == steps) break;
    const cplx k1 = rhs(t, v);
    const cplx k2 = rhs(t + dt / 2, v + dt / 2 * k1);
    const cplx k3 = rhs(t + dt / 2, v + dt / 2 * k2);
    const cplx k4 = rhs(t + dt, v + dt * k3);
    v += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return out;
}

/// Sorted |lambda| (2|l| + n) over all multi-indices with |l| <= max_level.
inline std::vector<double> heisenberg_bruteforce(int n, double lambda, int max_level) {
  std::vector<double> vals;
  std::vector<int> idx(n, 0);
  std::function<void(int, int)> rec = [&](int axis, int used) {
    if (axis == n) {
      vals.push_back(std::abs(lambda) * (2.0 * used + n));
      return;
    }
    for (int l = 0; used + l <= max_level; ++l) rec(axis + 1, used + l);
  };
  rec(0, 0);
  std::sort(vals.begin(), vals.end());
  return vals;
}

/// Lowest eigenvalue of -d^2/du^2 + V(u) on [-a, a] with Dirichlet ends, from
/// the second-order finite-difference matrix with `points` interior nodes.
/// The tridiagonal eigenvalue is located by Sturm-sequence bisection.
inline double fd_ground_state(const std::function<double(double)>& V, double a, int points) {
  const double h = 2.0 * a / (points + 1);
  std::vector<double> diag(points);
  for (int i = 0; i < points; ++i) diag[i] = 2.0 / (h * h) + V(-a + (i + 1) * h);
  const double off = -1.0 / (h * h);
  auto count_below = [&](double x) {
    int c = 0;
    double q = diag[0] - x;
    if (q < 0) ++c;
    for (int i = 1; i < points; ++i) {
      if (q == 0.0) q = 1e-300;
      q = diag[i] - x - off * off / q;
      if (q < 0) ++c;
    }
    return c;
  };
  double lo = 0.0, hi = 1.0;
  while (count_below(hi) < 1) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_below(mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Richardson-extrapolated fd_ground_state (error O(h^2) -> O(h^4)).
inline double fd_ground_state_extrapolated(const std::function<double(double)>& V, double a, int points) {
  const double coarse = fd_ground_state(V, a, points);
  const double fine = fd_ground_state(V, a, 2 * points + 1);
  return fine + (fine - coarse) / 3.0;
}

}  // namespace oracle
