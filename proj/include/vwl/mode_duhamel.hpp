#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace vwl {

using ModeSample = std::pair<double, std::complex<double>>;

/// Solves the decoupled mode equation i v' + beta2s v = f(t), v(0) = v0.
///
/// Sign convention: the homogeneous solution is v0 e^{+i beta2s t}, so
///   v(t) = e^{i beta2s t} v0 - i \int_0^t e^{i beta2s (t - tau)} f(tau) dtau.
/// The forcing is taken piecewise constant on each sample interval, equal to
/// the mean of the two endpoint samples; each interval is then propagated
/// exactly. With f == 0 the result is a pure phase rotation.
///
/// `forcing` must start at t = 0, be uniformly spaced and reach T. Returns v at
/// every sample time <= T, plus T itself if it falls between samples.
std::vector<ModeSample> mode_duhamel_solve(double beta2s, std::complex<double> v0,
                                           std::span<const ModeSample> forcing, double T);

}  // namespace vwl
