#include "rdt/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "rdt/fft.hpp"
#include "rdt/spectral_ops.hpp"

namespace rdt::lp {

namespace {

constexpr double kCoreEdge = 1.1;
constexpr double kOuterEdge = 4.0 / 3.0;

double bridge(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

double chi(double rho) {
  if (rho <= kCoreEdge) return 1.0;
  if (rho >= kOuterEdge) return 0.0;
  return 1.0 - bridge((rho - kCoreEdge) / (kOuterEdge - kCoreEdge));
}

DyadicPartition::DyadicPartition(const GridSpec& grid, PartitionOptions options)
    : grid_(grid), options_(options) {
  if (!(options_.support_scale > 0.0))
    throw std::invalid_argument("partition support scale must be positive");
  const double xi_min = grid.base_frequency();
  j_min_ = static_cast<int>(std::floor(std::log2(3.0 * xi_min / 8.0))) + 1;
  j_max_ = static_cast<int>(std::ceil(std::log2(4.0 * grid.nyquist() / 3.0))) - 1;
  if (levels() < 3)
    throw std::invalid_argument("grid resolves only " + std::to_string(levels()) +
                                " dyadic levels (need at least 3)");

  const auto& g = geometry(grid);
  modes_.resize(grid.spectral_size());
  for (std::size_t q = 0; q < modes_.size(); ++q) {
    ModeWeights mw;
    if (g.k2[q] > 0.0) {
      for (int j = j_min_; j <= j_max_; ++j) {
        const double w = phi(std::ldexp(g.radius[q], -j));
        if (w == 0.0) continue;
        if (mw.count == 0) mw.first_level = j;
        if (mw.count == static_cast<int>(mw.weight.size()) ||
            j != mw.first_level + mw.count)
          throw std::logic_error("dyadic weights not contiguous");
        mw.weight[mw.count++] = w;
      }
    }
    modes_[q] = mw;
  }
}

double DyadicPartition::phi(double rho) const {
  return chi(0.5 * options_.support_scale * rho) - chi(rho);
}

double DyadicPartition::weight(int j, std::size_t q) const {
  const ModeWeights& mw = modes_[q];
  const int i = j - mw.first_level;
  return (i >= 0 && i < mw.count) ? mw.weight[i] : 0.0;
}

DyadicPartition build_partition(const GridSpec& grid, PartitionOptions options) {
  return DyadicPartition(grid, options);
}

void require_admissible(const BesovIndex& idx, int d) {
  if (idx.p != 2) throw std::invalid_argument("only p = 2 is supported");
  if (idx.r != 1 && idx.r != 2) throw std::invalid_argument("r must be 1 or 2");
  const double crit = 0.5 * d;
  if (idx.r == 1 && idx.s > crit)
    throw std::invalid_argument(fmt::format("s = {} exceeds d/2 = {} for r = 1", idx.s, crit));
  if (idx.r == 2 && idx.s >= crit)
    throw std::invalid_argument(fmt::format("s = {} must be below d/2 = {} for r = 2", idx.s, crit));
}

std::vector<double> block_norms(const SpectralField& u_hat, const DyadicPartition& P) {
  require_same_grid(u_hat.grid(), P.grid());
  const auto& g = geometry(u_hat.grid());
  std::vector<double> acc(P.levels(), 0.0);
  for (std::size_t q = 0; q < u_hat.size(); ++q) {
    const auto& mw = P.weights(q);
    if (mw.count == 0) continue;
    const double e = g.multiplicity[q] * std::norm(u_hat[q]);
    for (int i = 0; i < mw.count; ++i)
      acc[mw.first_level + i - P.j_min()] += mw.weight[i] * mw.weight[i] * e;
  }
  const GridSpec& grid = u_hat.grid();
  const double N = static_cast<double>(grid.size());
  const double scale = grid.volume() / (N * N);
  for (double& a : acc) a = std::sqrt(a * scale);
  return acc;
}

double tail_norm(const SpectralField& u_hat, const DyadicPartition& P) {
  const auto& g = geometry(u_hat.grid());
  double acc = 0.0;
  for (std::size_t q = 0; q < u_hat.size(); ++q) {
    if (g.k2[q] == 0.0) continue;
    const auto& mw = P.weights(q);
    double covered = 0.0;
    for (int i = 0; i < mw.count; ++i) covered += mw.weight[i];
    acc += g.multiplicity[q] * std::norm((1.0 - covered) * u_hat[q]);
  }
  const GridSpec& grid = u_hat.grid();
  const double N = static_cast<double>(grid.size());
  return std::sqrt(acc * grid.volume() / (N * N));
}

NormReport combine_blocks(const std::vector<double>& blocks, int j_min,
                          const BesovIndex& idx) {
  NormReport rep;
  double acc = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int j = j_min + static_cast<int>(i);
    const double v = std::exp2(j * idx.s) * blocks[i];
    rep.per_block.emplace_back(j, v);
    acc += idx.r == 1 ? v : v * v;
  }
  rep.total = idx.r == 1 ? acc : std::sqrt(acc);
  return rep;
}

SpectralField dyadic_block(int j, const SpectralField& u_hat, const DyadicPartition& P) {
  if (!P.contains(j))
    throw std::out_of_range(fmt::format("level {} outside resolvable range [{}, {}]", j,
                                        P.j_min(), P.j_max()));
  require_same_grid(u_hat.grid(), P.grid());
  SpectralField out(u_hat.grid());
  for (std::size_t q = 0; q < u_hat.size(); ++q) out[q] = P.weight(j, q) * u_hat[q];
  return out;
}

Field dyadic_block(int j, const Field& u, const DyadicPartition& P) {
  return inverse(dyadic_block(j, transform(u), P));
}

Field low_cutoff(int j, const Field& u, const DyadicPartition& P) {
  if (j < P.j_min() || j > P.j_max() + 1)
    throw std::out_of_range(fmt::format("cutoff level {} outside [{}, {}]", j, P.j_min(),
                                        P.j_max() + 1));
  require_same_grid(u.grid(), P.grid());
  const SpectralField u_hat = transform(u);
  SpectralField out(u.grid());
  for (std::size_t q = 0; q < u_hat.size(); ++q) {
    double w = 0.0;
    for (int i = P.j_min(); i < j; ++i) w += P.weight(i, q);
    out[q] = w * u_hat[q];
  }
  return inverse(out);
}

NormReport besov_norm(const SpectralField& u_hat, const BesovIndex& idx,
                      const DyadicPartition& P) {
  require_admissible(idx, u_hat.grid().dim());
  NormReport rep = combine_blocks(block_norms(u_hat, P), P.j_min(), idx);
  rep.mean = std::abs(u_hat[0]) / static_cast<double>(u_hat.grid().size());
  rep.tail = tail_norm(u_hat, P);
  return rep;
}

NormReport besov_norm(const Field& u, const BesovIndex& idx, const DyadicPartition& P) {
  return besov_norm(transform(u), idx, P);
}

void validate_series(const FieldSeries& series) {
  if (series.times.empty()) throw std::invalid_argument("empty field series");
  if (series.times.size() != series.fields.size())
    throw std::invalid_argument("series times and fields differ in length");
  for (std::size_t n = 1; n < series.times.size(); ++n) {
    if (!(series.times[n] > series.times[n - 1]))
      throw std::invalid_argument("series times must be strictly increasing");
    require_same_grid(series.fields[0].grid(), series.fields[n].grid());
  }
}

BlockProfile block_profile(const FieldSeries& series, const DyadicPartition& P) {
  validate_series(series);
  BlockProfile out;
  out.reserve(series.fields.size());
  for (const Field& f : series.fields) out.push_back(block_norms(transform(f), P));
  return out;
}

NormReport time_space_norm(const std::vector<double>& times, const BlockProfile& profile,
                           int q, const BesovIndex& idx, int j_min) {
  if (times.empty() || profile.size() != times.size())
    throw std::invalid_argument("time-space norm needs one block profile per sample");
  if (q != 1 && q != 2 && q != kInfinity)
    throw std::invalid_argument("time exponent must be 1, 2 or infinity");
  const std::size_t levels = profile[0].size();
  std::vector<double> blocks(levels, 0.0);
  for (std::size_t i = 0; i < levels; ++i) {
    double acc = 0.0;
    if (q == kInfinity) {
      for (const auto& row : profile) acc = std::max(acc, row[i]);
    } else {
      for (std::size_t n = 0; n + 1 < times.size(); ++n) {
        const double a = profile[n][i], b = profile[n + 1][i];
        const double h = times[n + 1] - times[n];
        acc += q == 1 ? 0.5 * h * (a + b) : 0.5 * h * (a * a + b * b);
      }
      if (q == 2) acc = std::sqrt(acc);
    }
    blocks[i] = acc;
  }
  return combine_blocks(blocks, j_min, idx);
}

NormReport time_space_norm(const FieldSeries& series, int q, const BesovIndex& idx,
                           const DyadicPartition& P) {
  validate_series(series);
  require_admissible(idx, P.grid().dim());
  return time_space_norm(series.times, block_profile(series, P), q, idx, P.j_min());
}

double triple_norm_B(const std::vector<double>& times, const BlockProfile& u,
                     const BlockProfile& dt_u, const BlockProfile& lap_u, int d,
                     int j_min) {
  const BesovIndex idx{0.5 * d, 2, 1};
  return time_space_norm(times, u, kInfinity, idx, j_min).total +
         time_space_norm(times, dt_u, 1, idx, j_min).total +
         time_space_norm(times, lap_u, 1, idx, j_min).total;
}

double triple_norm_B(const FieldSeries& u, const FieldSeries& dt_u,
                     const FieldSeries& lap_u, const DyadicPartition& P) {
  validate_series(u);
  validate_series(dt_u);
  validate_series(lap_u);
  if (u.times != dt_u.times || u.times != lap_u.times)
    throw std::invalid_argument("series for the triple norm must share sample times");
  return triple_norm_B(u.times, block_profile(u, P), block_profile(dt_u, P),
                       block_profile(lap_u, P), P.grid().dim(), P.j_min());
}

void write_norm_csv(std::ostream& os, const NormReport& report) {
  os << "j,value\n";
  for (const auto& [j, v] : report.per_block) os << fmt::format("{},{:.17g}\n", j, v);
  os << fmt::format("total,{:.17g}\n", report.total);
}

}  // namespace rdt::lp
