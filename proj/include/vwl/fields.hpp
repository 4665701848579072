#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vwl {

using cplx = std::complex<double>;

/// Uniform periodic grid on the box prod_i [-L_i/2, L_i/2).
///
/// Storage is row-major with the last axis fastest. Sample j on axis i sits at
/// x = -L_i/2 + j*h_i. Frequencies follow the standard periodic lattice
/// 2*pi*k/L_i with k in [-N_i/2, N_i/2), stored in transform order
/// (k = 0, 1, ..., N/2-1, -N/2, ..., -1).
class Grid {
 public:
  Grid(std::vector<double> extents, std::vector<std::size_t> points);
  static Grid uniform1d(double extent, std::size_t points) { return Grid({extent}, {points}); }

  std::size_t dims() const noexcept { return extents_.size(); }
  const std::vector<double>& extents() const noexcept { return extents_; }
  const std::vector<std::size_t>& points() const noexcept { return points_; }
  double spacing(std::size_t axis) const { return extents_.at(axis) / static_cast<double>(points_.at(axis)); }
  double cell_volume() const noexcept { return cell_volume_; }
  double box_volume() const noexcept { return box_volume_; }
  std::size_t size() const noexcept { return size_; }

  double coordinate(std::size_t axis, std::size_t j) const;
  /// Signed integer wavenumber k for transform-order index j.
  static std::int64_t wavenumber(std::size_t j, std::size_t n);
  double frequency(std::size_t axis, std::size_t j) const;

  /// Multi-index of a flat index.
  std::vector<std::size_t> unravel(std::size_t flat) const;
  /// Physical coordinates of a flat index.
  std::vector<double> position(std::size_t flat) const;

  /// Same box, `factor` times more points per axis.
  Grid refined(std::size_t factor) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.extents_ == b.extents_ && a.points_ == b.points_;
  }

 private:
  std::vector<double> extents_;
  std::vector<std::size_t> points_;
  double cell_volume_ = 1.0;
  double box_volume_ = 1.0;
  std::size_t size_ = 1;
};

/// Complex grid function.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<cplx> values);

  /// Samples fn at every grid position.
  static Field sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& fn);
  static Field constant(const Grid& grid, cplx value);

  const Grid& grid() const noexcept { return grid_; }
  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx c);
  /// Pointwise product.
  Field& multiply(const Field& other);

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field f);
Field pointwise(Field a, const Field& b);

/// (cell_volume * sum |v|^q)^{1/q}; q = infinity gives the grid maximum.
/// Throws ArgumentError for q < 1.
double lp_norm(const Field& f, double q);
double l2_norm(const Field& f);
/// cell_volume * sum f * conj(g).
cplx inner(const Field& f, const Field& g);

/// Forward/inverse discrete Fourier transform on a grid, normalized so that
///   fhat(k) = cell_volume * sum_x f(x) e^{-i k.(x - x_corner)}
///   f(x)    = (1 / box_volume) * sum_k fhat(k) e^{+i k.(x - x_corner)}
/// which makes ||f||^2 = (1 / box_volume) * sum_k |fhat(k)|^2 (Parseval).
/// Instances are immutable after construction and safe to share across threads.
class Transform {
 public:
  explicit Transform(const Grid& grid);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  std::vector<cplx> forward(const Field& f) const;
  Field inverse(std::vector<cplx> coeffs) const;

  /// Unnormalized in-place transforms for hot loops.
  void forward_raw(std::span<cplx> data) const;
  void inverse_raw(std::span<cplx> data) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
};

/// (1 / box_volume) * sum |fhat|^2, the spectral side of Parseval.
double spectral_l2_squared(const Grid& grid, std::span<const cplx> coeffs);

/// Smooth random field with Gaussian-distributed Fourier coefficients damped
/// beyond `bandwidth` (in wavenumber units). Deterministic in `seed`.
Field random_field(const Grid& grid, std::uint64_t seed, double bandwidth = 8.0);

/// CSV snapshot: one column per axis index, then re, im.
void write_field_csv(const Field& f, const std::filesystem::path& path);
/// Raw little-endian complex64 values plus `<path>.json` describing the grid.
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);

}  // namespace vwl
