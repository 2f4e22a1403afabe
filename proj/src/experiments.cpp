#include "rdt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rdt/fft.hpp"
#include "rdt/harness.hpp"
#include "rdt/spectral_ops.hpp"

namespace rdt::exp {

namespace {

lp::BesovIndex critical(int d) { return {0.5 * d, 2, 1}; }

double critical_norm(const Field& u, const lp::DyadicPartition& P) {
  return lp::besov_norm(u, critical(u.grid().dim()), P).total;
}

struct Mode {
  std::array<int, 3> k;
  double a, b;
};

}  // namespace

Field random_bandlimited(const GridSpec& grid, int K, std::uint64_t seed, double amplitude) {
  if (K < 1 || 3 * K > grid.points()) throw std::invalid_argument("band limit not resolved");
  UniformSource rng(seed);
  const int d = grid.dim();
  std::vector<Mode> modes;
  for (int a = -K; a <= K; ++a)
    for (int b = (d > 1 ? -K : 0); b <= (d > 1 ? K : 0); ++b)
      for (int c = (d > 2 ? -K : 0); c <= (d > 2 ? K : 0); ++c) {
        const int r2 = a * a + b * b + c * c;
        if (r2 == 0 || r2 > K * K) continue;
        const double ca = rng.next();
        const double sa = rng.next();
        modes.push_back({{a, b, c}, ca, sa});
      }
  const double w = grid.base_frequency();
  Field u = Field::sample(grid, [&](std::array<double, 3> x) {
    double s = 0.0;
    for (const Mode& m : modes) {
      const double ph = w * (m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]);
      s += m.a * std::cos(ph) + m.b * std::sin(ph);
    }
    return s;
  });
  u *= amplitude / u.max_abs();
  return u;
}

Field pure_mode(const GridSpec& grid, std::array<int, 3> k, double amplitude) {
  const double w = grid.base_frequency();
  return Field::sample(grid, [&](std::array<double, 3> x) {
    return amplitude * std::cos(w * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
  });
}

double product_ratio(const GridSpec& grid, std::uint64_t seed) {
  UniformSource rng(seed);
  const double au = 1.25 + 0.75 * rng.next();
  const double av = 1.25 + 0.75 * rng.next();
  const Field u = random_bandlimited(grid, 4, 1000 + seed, au);
  const Field v = random_bandlimited(grid, 4, 2000 + seed, av);
  const lp::DyadicPartition P(grid);
  return critical_norm(u * v, P) / (critical_norm(u, P) * critical_norm(v, P));
}

double composition_ratio(const GridSpec& grid, std::uint64_t seed, Nonlinearity f) {
  UniformSource rng(seed);
  const double m = 0.85 + 0.65 * rng.next();  // [0.2, 1.5]
  const Field u = random_bandlimited(grid, 3, 3000 + seed, m);
  const lp::DyadicPartition P(grid);
  Field fu(grid);
  double slope = 0.0;
  if (f == Nonlinearity::square) {
    fu = map(u, [](double x) { return x * x; });
    slope = 2.0 * m;
  } else {
    fu = map(u, [](double x) { return std::expm1(x); });
    slope = std::exp(m);
  }
  return critical_norm(fu, P) / ((1.0 + m) * slope * critical_norm(u, P));
}

double max_regularity_ratio(const GridSpec& grid, std::uint64_t seed) {
  UniformSource rng(seed);
  const double a0 = 1.25 + 0.75 * rng.next();
  const double a1 = 1.25 + 0.75 * rng.next();
  const SpectralField u0 = transform(random_bandlimited(grid, 4, 4000 + seed, 1.0));
  const SpectralField fa = transform(random_bandlimited(grid, 4, 5000 + seed, a0));
  const SpectralField fb = transform(random_bandlimited(grid, 4, 6000 + seed, a1));
  const lp::DyadicPartition P(grid);

  constexpr int steps = 128;
  const double dt = 1.0 / steps;
  std::vector<double> times;
  lp::BlockProfile pu, pdt, plap, pf;
  SpectralField u = u0;
  for (int n = 0; n <= steps; ++n) {
    const double t = n * dt;
    SpectralField f = fa + t * fb;
    if (n > 0) {
      const SpectralField f_prev = fa + (t - dt) * fb;
      u = heat_propagate(u, 1.0, f_prev, f, dt);
    }
    const SpectralField lap = laplacian(u);
    times.push_back(t);
    pu.push_back(lp::block_norms(u, P));
    plap.push_back(lp::block_norms(lap, P));
    pdt.push_back(lp::block_norms(lap + f, P));
    pf.push_back(lp::block_norms(f, P));
  }
  const int d = grid.dim();
  const double lhs = lp::triple_norm_B(times, pu, pdt, plap, d, P.j_min());
  const double rhs = lp::besov_norm(u0, critical(d), P).total +
                     lp::time_space_norm(times, pf, 1, critical(d), P.j_min()).total;
  return lhs / rhs;
}

double scale_covariance_change(const GridSpec& grid, std::array<int, 3> k) {
  const lp::DyadicPartition P(grid);
  const int d = grid.dim();
  const double n1 = critical_norm(pure_mode(grid, k), P);
  const double n2 =
      critical_norm(pure_mode(grid, {2 * k[0], 2 * k[1], 2 * k[2]}, std::pow(2.0, -0.5 * d)), P);
  return std::abs(n2 / n1 - 1.0);
}

dyn::ChemState reference_perturbation(const GridSpec& grid, std::uint64_t seed, double amplitude) {
  const thermo::ThermoParams params;
  const auto eq = thermo::find_equilibrium({1.0, 1.0, 1.0}, params);
  auto s = dyn::ChemState::uniform(grid, eq);
  for (int i = 0; i < 4; ++i) {
    const double base = i < 3 ? eq.c_tilde[i] : eq.theta_tilde;
    s.component(i) += random_bandlimited(grid, 3, 100 * seed + i, amplitude * base);
  }
  return s;
}

GridSpec reference_trajectory_grid() { return GridSpec(2, 32, 2.0 * std::numbers::pi); }

dyn::SolverConfig reference_solver_config() {
  dyn::SolverConfig c;
  c.dt = 0.01;
  c.T = 1.0;
  c.record_every = 1;
  return c;
}

dyn::TrajectoryRecord reference_trajectory(std::uint64_t seed, const thermo::ThermoParams& params,
                                           thermo::RateConvention convention) {
  auto config = reference_solver_config();
  config.convention = convention;
  return dyn::integrate(reference_perturbation(reference_trajectory_grid(), seed), config, params);
}

double max_relative_growth(const dyn::TrajectoryRecord& record, double t_transient) {
  if (record.snapshots.empty()) throw std::invalid_argument("empty trajectory");
  const lp::DyadicPartition P(record.snapshots.front().grid());
  double worst = -std::numeric_limits<double>::infinity();
  double prev = -1.0;
  for (std::size_t n = 0; n < record.snapshots.size(); ++n) {
    if (record.times[n] < t_transient) continue;
    const double cur = perturbation_norm(record.snapshots[n], P);
    if (prev > 0.0) worst = std::max(worst, (cur - prev) / prev);
    prev = cur;
  }
  return worst;
}

PerturbationState stability_delta(const GridSpec& grid, const thermo::EquilibriumState& eq,
                                  double total_norm) {
  return harness::single_mode_data(grid, eq, {2, 1, 0}, {1.0, 1.0, 1.0, 1.0}, total_norm);
}

double perturbation_norm(const dyn::ChemState& s, const lp::DyadicPartition& P) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += critical_norm(s.component(i), P);
  return total;
}

}  // namespace rdt::exp
