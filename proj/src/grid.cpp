#include "rdt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rdt {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

GridSpec::GridSpec(int d, int n, double L) : d_(d), n_(n), L_(L) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("grid dimension must be 1, 2 or 3 (got " +
                                std::to_string(d) + ")");
  if (!is_power_of_two(n))
    throw std::invalid_argument("points per axis must be a power of two (got " +
                                std::to_string(n) + ")");
  if (n < 8)
    throw std::invalid_argument("points per axis must be at least 8 (got " +
                                std::to_string(n) + ")");
  if (!(L > 0.0) || !std::isfinite(L))
    throw std::invalid_argument("period length must be positive");
}

std::size_t GridSpec::size() const noexcept { return ipow(n_, d_); }

std::size_t GridSpec::spectral_size() const noexcept {
  return ipow(n_, d_ - 1) * static_cast<std::size_t>(n_ / 2 + 1);
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), d_); }

double GridSpec::volume() const noexcept { return std::pow(L_, d_); }

double GridSpec::base_frequency() const noexcept { return 2.0 * std::numbers::pi / L_; }

double GridSpec::nyquist() const noexcept { return base_frequency() * (n_ / 2); }

std::array<double, 3> GridSpec::node(std::size_t flat) const noexcept {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = spacing();
  for (int a = d_ - 1; a >= 0; --a) {
    x[a] = static_cast<double>(flat % n_) * h;
    flat /= n_;
  }
  return x;
}

GridSpec build_grid(int d, int n, double L) { return GridSpec(d, n, L); }

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch between fields");
}

// ---------------------------------------------------------------- Field

Field::Field(const GridSpec& grid, double value)
    : grid_(grid), values_(grid.size(), value) {}

Field::Field(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("sample count " + std::to_string(values_.size()) +
                                " does not match grid size " +
                                std::to_string(grid_.size()));
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

double Field::integral() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.cell_volume();
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

Field& Field::operator+=(double a) {
  for (double& v : values_) v += a;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same_grid(grid_, x.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double a, Field b) { return b *= a; }
Field operator*(Field b, double a) { return b *= a; }
Field operator+(Field a, double b) { return a += b; }
Field operator-(Field a) { return a *= -1.0; }

double l2_norm(const Field& u) {
  double s = 0.0;
  for (double v : u.values()) s += v * v;
  return std::sqrt(s * u.grid().cell_volume());
}

// -------------------------------------------------------- SpectralField

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), coeffs_(grid.spectral_size()) {}

SpectralField::SpectralField(const GridSpec& grid,
                             std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size())
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match grid spectrum size " +
                                std::to_string(grid_.spectral_size()));
}

std::complex<double> SpectralField::coefficient(std::array<int, 3> k) const {
  const int n = grid_.points();
  const int d = grid_.dim();
  auto wrap = [n](int m) { return ((m % n) + n) % n; };
  // Bin along the halved last axis; conjugate when it lies in the negative half.
  int last = wrap(k[d - 1]);
  bool conj = false;
  if (last > n / 2) {
    conj = true;
    for (int a = 0; a < d; ++a) k[a] = -k[a];
    last = wrap(k[d - 1]);
  }
  std::size_t q = 0;
  for (int a = 0; a < d - 1; ++a) q = q * n + static_cast<std::size_t>(wrap(k[a]));
  q = q * (n / 2 + 1) + static_cast<std::size_t>(last);
  return conj ? std::conj(coeffs_[q]) : coeffs_[q];
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t q = 0; q < coeffs_.size(); ++q) coeffs_[q] += other.coeffs_[q];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t q = 0; q < coeffs_.size(); ++q) coeffs_[q] -= other.coeffs_[q];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  require_same_grid(grid_, x.grid_);
  for (std::size_t q = 0; q < coeffs_.size(); ++q) coeffs_[q] += a * x.coeffs_[q];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField b) { return b *= a; }

}  // namespace rdt
