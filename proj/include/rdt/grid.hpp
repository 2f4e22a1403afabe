#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace rdt {

/// Periodic torus [0, L)^d sampled with n nodes per axis.
///
/// Node coordinates are x_k = k L / n. The discrete frequency set per axis is
/// {2 pi m / L : m = -n/2 ... n/2-1}. Samples are stored row-major with axis 0
/// varying slowest.
class GridSpec {
 public:
  /// Throws std::invalid_argument unless d in {1,2,3}, n is a power of two
  /// with n >= 8, and L > 0.
  GridSpec(int d, int n, double L);

  int dim() const noexcept { return d_; }
  int points() const noexcept { return n_; }
  double length() const noexcept { return L_; }

  std::size_t size() const noexcept;
  /// Number of stored half-spectrum coefficients, n^{d-1} (n/2 + 1).
  std::size_t spectral_size() const noexcept;
  double spacing() const noexcept { return L_ / n_; }
  double cell_volume() const noexcept;
  double volume() const noexcept;
  double base_frequency() const noexcept;
  double nyquist() const noexcept;

  /// FFT bin m on a full axis mapped to its signed index.
  int signed_index(int m) const noexcept { return m < n_ / 2 ? m : m - n_; }

  std::array<double, 3> node(std::size_t flat) const noexcept;

  bool operator==(const GridSpec&) const = default;

 private:
  int d_;
  int n_;
  double L_;
};

GridSpec build_grid(int d, int n, double L);

/// Real samples on a GridSpec.
class Field {
 public:
  explicit Field(const GridSpec& grid, double value = 0.0);
  Field(const GridSpec& grid, std::vector<double> values);

  template <class F>
  static Field sample(const GridSpec& grid, F&& f) {
    Field out(grid);
    for (std::size_t k = 0; k < out.size(); ++k) out.values_[k] = f(grid.node(k));
    return out;
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;
  /// Rectangle-rule integral over the torus (spectrally exact for periodic data).
  double integral() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(const Field& other);
  Field& operator*=(double a);
  Field& operator+=(double a);
  /// this += a * x
  Field& axpy(double a, const Field& x);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double a, Field b);
Field operator*(Field b, double a);
Field operator+(Field a, double b);
Field operator-(Field a);

template <class F>
Field map(const Field& u, F&& f) {
  Field out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = f(u[k]);
  return out;
}

/// Torus L2 norm (sum of squares times the cell volume, square-rooted).
double l2_norm(const Field& u);

/// Throws std::invalid_argument when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b);

/// Discrete Fourier coefficients of a real field on the half spectrum: the last
/// axis stores only the bins 0..n/2, the remaining coefficients follow from
/// Hermitian symmetry. Forward transforms are unnormalized, inverse carries
/// 1/n^d.
class SpectralField {
 public:
  explicit SpectralField(const GridSpec& grid);
  /// Throws std::invalid_argument if coeffs.size() != grid.spectral_size().
  SpectralField(const GridSpec& grid, std::vector<std::complex<double>> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  std::complex<double>& operator[](std::size_t q) noexcept { return coeffs_[q]; }
  std::complex<double> operator[](std::size_t q) const noexcept { return coeffs_[q]; }

  /// Coefficient at any signed frequency index (components beyond dim() are
  /// ignored); entries absent from storage are recovered by conjugation.
  std::complex<double> coefficient(std::array<int, 3> k) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double a);
  SpectralField& axpy(double a, const SpectralField& x);

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField b);

}  // namespace rdt
