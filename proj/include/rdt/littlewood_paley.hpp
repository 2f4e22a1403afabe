#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "rdt/grid.hpp"

namespace rdt::lp {

/// Smooth radial cutoff: 1 on [0, 1.1], 0 on [4/3, ∞).
double chi(double rho);

struct PartitionOptions {
  /// Outer edge of the profile: chi(support_scale ρ / 2) - chi(ρ). Values
  /// below 1 widen the support and break the partition of unity; used only
  /// for fault injection.
  double support_scale = 1.0;
};

/// Dyadic partition phi(ρ) = chi(ρ/2) - chi(ρ), supported in [1.1, 8/3], with
/// the resolvable levels of one grid and the per-mode block weights.
class DyadicPartition {
 public:
  struct ModeWeights {
    int first_level = 0;
    int count = 0;
    std::array<double, 3> weight{};
  };

  DyadicPartition(const GridSpec& grid, PartitionOptions options = {});

  const GridSpec& grid() const noexcept { return grid_; }
  double phi(double rho) const;
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_max_; }
  int levels() const noexcept { return j_max_ - j_min_ + 1; }
  bool contains(int j) const noexcept { return j >= j_min_ && j <= j_max_; }

  /// Nonzero weights phi(2^{-j}|ξ|) of stored mode q over resolvable j.
  const ModeWeights& weights(std::size_t q) const { return modes_[q]; }
  /// phi(2^{-j}|ξ|) for stored mode q.
  double weight(int j, std::size_t q) const;

 private:
  GridSpec grid_;
  PartitionOptions options_;
  int j_min_;
  int j_max_;
  std::vector<ModeWeights> modes_;
};

/// Throws std::invalid_argument if fewer than 3 levels are resolvable.
DyadicPartition build_partition(const GridSpec& grid, PartitionOptions options = {});

struct BesovIndex {
  double s = 0.0;
  int p = 2;
  int r = 1;
};

/// Throws std::invalid_argument unless p = 2, r ∈ {1, 2}, and s < d/2 (r = 2)
/// or s ≤ d/2 (r = 1).
void require_admissible(const BesovIndex& idx, int d);

struct NormReport {
  double total = 0.0;
  /// (j, 2^{js} block value) for every resolvable level.
  std::vector<std::pair<int, double>> per_block;
  /// Magnitude of the zero mode (spatial mean), excluded from the norm.
  double mean = 0.0;
  /// L² norm of the mean-free part outside the resolvable blocks.
  double tail = 0.0;
};

/// ‖Δ̇_j u‖_{L²} for j = j_min..j_max, computed from coefficients.
std::vector<double> block_norms(const SpectralField& u_hat, const DyadicPartition& P);

/// L² norm of u - mean - Σ_j Δ̇_j u.
double tail_norm(const SpectralField& u_hat, const DyadicPartition& P);

/// ℓ^r combination of 2^{js} blocks[j - j_min].
NormReport combine_blocks(const std::vector<double>& blocks, int j_min,
                          const BesovIndex& idx);

SpectralField dyadic_block(int j, const SpectralField& u_hat, const DyadicPartition& P);
Field dyadic_block(int j, const Field& u, const DyadicPartition& P);
/// Σ_{i < j} Δ̇_i u over resolvable i; j ∈ [j_min, j_max + 1].
Field low_cutoff(int j, const Field& u, const DyadicPartition& P);

NormReport besov_norm(const SpectralField& u_hat, const BesovIndex& idx,
                      const DyadicPartition& P);
NormReport besov_norm(const Field& u, const BesovIndex& idx, const DyadicPartition& P);

struct FieldSeries {
  std::vector<double> times;
  std::vector<Field> fields;
};

/// Throws std::invalid_argument for empty or inconsistent series.
void validate_series(const FieldSeries& series);

/// Block profiles over time: profile[n][j - j_min] = ‖Δ̇_j u(t_n)‖.
using BlockProfile = std::vector<std::vector<double>>;

BlockProfile block_profile(const FieldSeries& series, const DyadicPartition& P);

/// Per-block L^q-in-time (trapezoid for q = 1, 2; max for q = ∞), then the
/// weighted ℓ^r sum. q = 0 encodes ∞.
NormReport time_space_norm(const std::vector<double>& times, const BlockProfile& profile,
                           int q, const BesovIndex& idx, int j_min);
NormReport time_space_norm(const FieldSeries& series, int q, const BesovIndex& idx,
                           const DyadicPartition& P);

inline constexpr int kInfinity = 0;

/// ‖u‖_{L̃^∞(Ḃ^{d/2}_{2,1})} + ‖∂_t u‖_{L̃^1} + ‖∆u‖_{L̃^1}.
double triple_norm_B(const std::vector<double>& times, const BlockProfile& u,
                     const BlockProfile& dt_u, const BlockProfile& lap_u, int d,
                     int j_min);
double triple_norm_B(const FieldSeries& u, const FieldSeries& dt_u,
                     const FieldSeries& lap_u, const DyadicPartition& P);

/// Rows "j,value" followed by "total,value".
void write_norm_csv(std::ostream& os, const NormReport& report);

}  // namespace rdt::lp
