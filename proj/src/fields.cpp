#include "vwl/fields.hpp"

#include "vwl/csv.hpp"
#include "vwl/errors.hpp"

#include <fftw3.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>

namespace vwl {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (!(a == b)) throw ArgumentError(fmt::format("{}: fields live on different grids", op));
}

}  // namespace

namespace csv {

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  row(header);
}

void Writer::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ArgumentError("csv row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace csv

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(std::vector<double> extents, std::vector<std::size_t> points)
    : extents_(std::move(extents)), points_(std::move(points)) {
  if (extents_.empty() || extents_.size() != points_.size())
    throw ArgumentError("grid: extents and points must be non-empty and of equal length");
  for (std::size_t i = 0; i < dims(); ++i) {
    if (!(extents_[i] > 0.0) || !std::isfinite(extents_[i]))
      throw ArgumentError(fmt::format("grid: extent on axis {} must be positive", i));
    // Sizes below 8 are allowed (small test grids) but must still be powers of two.
    if (points_[i] < 2 || !std::has_single_bit(points_[i]))
      throw ArgumentError(fmt::format("grid: points on axis {} must be a power of two, got {}", i, points_[i]));
    const double h = spacing(i);
    cell_volume_ *= h;
    box_volume_ *= extents_[i];
    size_ *= points_[i];
  }
}

double Grid::coordinate(std::size_t axis, std::size_t j) const {
  return -0.5 * extents_[axis] + static_cast<double>(j) * spacing(axis);
}

std::int64_t Grid::wavenumber(std::size_t j, std::size_t n) {
  const auto k = static_cast<std::int64_t>(j);
  return k < static_cast<std::int64_t>(n / 2) ? k : k - static_cast<std::int64_t>(n);
}

double Grid::frequency(std::size_t axis, std::size_t j) const {
  return 2.0 * M_PI * static_cast<double>(wavenumber(j, points_[axis])) / extents_[axis];
}

std::vector<std::size_t> Grid::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(dims());
  for (std::size_t a = dims(); a-- > 0;) {
    idx[a] = flat % points_[a];
    flat /= points_[a];
  }
  return idx;
}

std::vector<double> Grid::position(std::size_t flat) const {
  std::vector<double> x(dims());
  for (std::size_t a = dims(); a-- > 0;) {
    x[a] = coordinate(a, flat % points_[a]);
    flat /= points_[a];
  }
  return x;
}

Grid Grid::refined(std::size_t factor) const {
  auto pts = points_;
  for (auto& n : pts) n *= factor;
  return Grid(extents_, std::move(pts));
}

// ---------------------------------------------------------------------------
// Field

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

Field::Field(Grid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ArgumentError(fmt::format("field: {} values for a grid of {} points", values_.size(), grid_.size()));
}

Field Field::sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& fn) {
  Field f(grid);
  std::vector<double> x(grid.dims());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t flat = i;
    for (std::size_t a = grid.dims(); a-- > 0;) {
      x[a] = grid.coordinate(a, flat % grid.points()[a]);
      flat /= grid.points()[a];
    }
    f.values_[i] = fn(x);
  }
  return f;
}

Field Field::constant(const Grid& grid, cplx value) {
  return Field(grid, std::vector<cplx>(grid.size(), value));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "add");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "subtract");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(cplx c) {
  for (auto& v : values_) v *= c;
  return *this;
}

Field& Field::multiply(const Field& other) {
  require_same_grid(grid_, other.grid_, "multiply");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field f) { return f *= c; }
Field pointwise(Field a, const Field& b) { return a.multiply(b); }

// ---------------------------------------------------------------------------
// Norms

double lp_norm(const Field& f, double q) {
  if (std::isnan(q) || q < 1.0) throw ArgumentError(fmt::format("lp_norm: q must be >= 1, got {}", q));
  const auto v = f.values();
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  // scale by the max to avoid overflow for large q
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  if (q == 2.0) {
    for (const auto& z : v) sum += std::norm(z / m);
  } else if (q == 1.0) {
    for (const auto& z : v) sum += std::abs(z) / m;
  } else {
    for (const auto& z : v) sum += std::pow(std::abs(z) / m, q);
  }
  return m * std::pow(f.grid().cell_volume() * sum, 1.0 / q);
}

double l2_norm(const Field& f) { return lp_norm(f, 2.0); }

cplx inner(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * std::conj(g[i]);
  return f.grid().cell_volume() * sum;
}

double spectral_l2_squared(const Grid& grid, std::span<const cplx> coeffs) {
  double sum = 0.0;
  for (const auto& c : coeffs) sum += std::norm(c);
  return sum / grid.box_volume();
}

// ---------------------------------------------------------------------------
// Transform

struct Transform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

Transform::Transform(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  std::vector<int> n(grid.points().begin(), grid.points().end());
  std::vector<cplx> scratch(grid.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(fftw_planner_mutex());
  // FFTW_ESTIMATE keeps plans (and therefore round-off) deterministic run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->backward) throw std::runtime_error("fftw planning failed");
}

Transform::~Transform() {
  std::lock_guard lock(fftw_planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void Transform::forward_raw(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void Transform::inverse_raw(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->backward, p, p);
}

std::vector<cplx> Transform::forward(const Field& f) const {
  require_same_grid(grid_, f.grid(), "forward transform");
  std::vector<cplx> c(f.values().begin(), f.values().end());
  forward_raw(c);
  const double h = grid_.cell_volume();
  for (auto& z : c) z *= h;
  return c;
}

Field Transform::inverse(std::vector<cplx> coeffs) const {
  if (coeffs.size() != grid_.size()) throw ArgumentError("inverse transform: size mismatch");
  inverse_raw(coeffs);
  const double s = 1.0 / grid_.box_volume();
  for (auto& z : coeffs) z *= s;
  return Field(grid_, std::move(coeffs));
}

// ---------------------------------------------------------------------------

Field random_field(const Grid& grid, std::uint64_t seed, double bandwidth) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> c(grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto idx = grid.unravel(i);
    double k2 = 0.0;
    for (std::size_t a = 0; a < grid.dims(); ++a) {
      const double k = static_cast<double>(Grid::wavenumber(idx[a], grid.points()[a]));
      k2 += k * k;
    }
    const double damp = std::exp(-k2 / (2.0 * bandwidth * bandwidth));
    const double re = normal(rng);
    const double im = normal(rng);
    c[i] = damp * cplx(re, im);
  }
  Transform t(grid);
  Field f = t.inverse(std::move(c));
  const double n = l2_norm(f);
  if (n > 0.0) f *= cplx(1.0 / n, 0.0);
  return f;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::vector<std::string> header;
  for (std::size_t a = 0; a < f.grid().dims(); ++a) header.push_back(fmt::format("i{}", a));
  header.emplace_back("re");
  header.emplace_back("im");
  csv::Writer w(path, header);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::string> row;
    for (auto j : f.grid().unravel(i)) row.push_back(std::to_string(j));
    row.push_back(csv::num(f[i].real()));
    row.push_back(csv::num(f[i].imag()));
    w.row(row);
  }
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "binary snapshots assume a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  std::vector<float> buf;
  buf.reserve(2 * f.size());
  for (const auto& z : f.values()) {
    buf.push_back(static_cast<float>(z.real()));
    buf.push_back(static_cast<float>(z.imag()));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));

  nlohmann::json meta = {
      {"format", "complex64-le"},
      {"layout", "row-major, last axis fastest"},
      {"extents", f.grid().extents()},
      {"points", f.grid().points()},
      {"origin", "centered: x_j = -L/2 + j*L/N"},
  };
  std::ofstream side(path.string() + ".json", std::ios::binary);
  side << meta.dump(2) << '\n';
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json");
  if (!side) throw std::runtime_error(fmt::format("missing sidecar for '{}'", path.string()));
  const auto meta = nlohmann::json::parse(side);
  Grid grid(meta.at("extents").get<std::vector<double>>(), meta.at("points").get<std::vector<std::size_t>>());
  std::ifstream in(path, std::ios::binary);
  std::vector<float> buf(2 * grid.size());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw std::runtime_error(fmt::format("short read in '{}'", path.string()));
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {buf[2 * i], buf[2 * i + 1]};
  return Field(std::move(grid), std::move(v));
}

}  // namespace vwl
