#include "rdt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "rdt/dynamics.hpp"
#include "rdt/error.hpp"
#include "rdt/fft.hpp"
#include "rdt/spectral_ops.hpp"

namespace rdt::harness {

namespace {

constexpr lp::BesovIndex critical(int d) { return {0.5 * d, 2, 1}; }

struct Derivs {
  Field value;
  std::vector<Field> grad;
  Field lap;
};

Derivs derivs(const SpectralField& h) {
  Derivs d{inverse(h), {}, inverse(laplacian(h))};
  for (int a = 0; a < h.grid().dim(); ++a) d.grad.push_back(inverse(derivative(h, a)));
  return d;
}

double dot_at(const std::vector<Field>& a, const std::vector<Field>& b, std::size_t k) {
  double s = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) s += a[x][k] * b[x][k];
  return s;
}

double sum3(const thermo::Triple& c) { return c[0] + c[1] + c[2]; }

// Pointwise assembly of (F_A, F_B, F_C, G) with 1/θ = 1/θ̃ + f(ω),
// 1/θ² = 1/θ̃² + g(ω) and 1/Σc_i = 1/Σc̃_i + f(Σz_i).
std::array<Field, 4> assemble(const std::array<Derivs, 4>& x, const thermo::EquilibriumState& eq,
                              const ThermoParams& params, bool reverse_order) {
  const GridSpec& grid = x[3].value.grid();
  const double kc = params.k_c, kt = params.k_theta;
  const double th = eq.theta_tilde;
  const double ct = sum3(eq.c_tilde);
  std::array<int, 3> order{0, 1, 2};
  if (reverse_order) order = {2, 1, 0};

  std::array<Field, 4> out{Field(grid), Field(grid), Field(grid), Field(grid)};
  const Derivs& w = x[3];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double om = w.value[k];
    const double inv_t = 1.0 / th + f_helper(om, th);
    const double inv_t2 = 1.0 / (th * th) + g_helper(om, th);
    const double gw2 = dot_at(w.grad, w.grad, k);

    double r = 0.0, zsum = 0.0;
    for (int j : order) {
      r += params.sigma[j] * x[j].value[k] / eq.c_tilde[j];
      zsum += x[j].value[k];
    }
    r = kc * r - kt * om / th;
    const double inv_s = 1.0 / ct + f_helper(zsum, ct);

    double cross = 0.0, react = 0.0, eta_term = 0.0, coupling = 0.0;
    for (int i : order) {
      const double zi = x[i].value[k];
      const double ci = zi + eq.c_tilde[i];
      const double zw = dot_at(x[i].grad, w.grad, k);
      out[i][k] = -params.sigma[i] * r + kc * inv_t * zw +
                  kc * (zi * inv_t * w.lap[k] - ci * inv_t2 * gw2);
      cross += zw;
      react += params.sigma[i] * kt * (om + th) * r;
      if (params.eta[i] != 1.0) {
        double m2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
          const double m = ci * w.grad[a][k] + (om + th) * x[i].grad[a][k];
          m2 += m * m;
        }
        eta_term += (params.eta[i] - 1.0) * m2 / (ci * (om + th));
      }
      coupling += zw + om * x[i].lap[k];
    }
    out[3][k] = kt * inv_s * cross + kt * gw2 * inv_t +
                params.kappa / kt * f_helper(zsum, ct) * w.lap[k] +
                inv_s / kt * (react + kc * kc * eta_term + kc * kc * coupling);
  }
  return out;
}

std::array<Derivs, 4> derivs_of(const PerturbationState& s) {
  return {derivs(transform(s.z[0])), derivs(transform(s.z[1])), derivs(transform(s.z[2])),
          derivs(transform(s.omega))};
}

// Block profile of one component over a series of coefficient states.
lp::BlockProfile profile(const std::vector<SpectralState>& v, int i, const lp::DyadicPartition& P,
                         bool apply_laplacian = false) {
  lp::BlockProfile out;
  out.reserve(v.size());
  for (const auto& s : v)
    out.push_back(lp::block_norms(apply_laplacian ? laplacian(s[i]) : s[i], P));
  return out;
}

IterateSeries difference(const IterateSeries& a, const IterateSeries& b) {
  if (a.times.size() != b.times.size())
    throw std::invalid_argument("series differ in sample count");
  IterateSeries d{a.times, a.values, a.rates};
  for (std::size_t n = 0; n < a.times.size(); ++n)
    for (int i = 0; i < 4; ++i) {
      d.values[n][i] -= b.values[n][i];
      d.rates[n][i] -= b.rates[n][i];
    }
  return d;
}

int sample_count(const IterationConfig& config) {
  dyn::SolverConfig sc;
  sc.dt = config.dt;
  sc.T = config.T;
  return dyn::step_count(sc);
}

std::array<double, 4> diffusivities(const ThermoParams& params, const thermo::EquilibriumState& eq) {
  const double kt = temperature_diffusivity(params, sum3(eq.c_tilde));
  return {params.k_c, params.k_c, params.k_c, kt};
}

}  // namespace

double f_helper(double x, double x_tilde) {
  if (!(x > -x_tilde))
    throw Error(ErrorKind::physics, fmt::format("pole crossing: x = {} <= -{}", x, x_tilde));
  return -x / (x_tilde * (x_tilde + x));
}

double g_helper(double x, double x_tilde) {
  if (!(x > -x_tilde))
    throw Error(ErrorKind::physics, fmt::format("pole crossing: x = {} <= -{}", x, x_tilde));
  const double s = x_tilde + x;
  // 1/s² - 1/x̃² = -x (2x̃ + x) / (s² x̃²) without cancellation.
  return -x * (2.0 * x_tilde + x) / (s * s * x_tilde * x_tilde);
}

GateResult smallness_gate(const PerturbationState& data, double h, const lp::DyadicPartition& P) {
  GateResult g;
  g.bound = std::pow(h, 4);
  const auto idx = critical(data.grid().dim());
  for (int i = 0; i < 4; ++i) {
    g.norms[i] = lp::besov_norm(data.component(i), idx, P).total;
    g.measured += g.norms[i];
  }
  g.pass = g.measured <= g.bound;
  return g;
}

std::array<Field, 3> forcing_F(const PerturbationState& state, const ThermoParams& params) {
  auto all = assemble(derivs_of(state), state.eq, params, false);
  return {std::move(all[0]), std::move(all[1]), std::move(all[2])};
}

Field forcing_G(const PerturbationState& state, const ThermoParams& params) {
  return std::move(assemble(derivs_of(state), state.eq, params, false)[3]);
}

SpectralState forcing(const SpectralState& x, const thermo::EquilibriumState& eq,
                      const ThermoParams& params, bool dealias, bool reverse_order) {
  const std::array<Derivs, 4> d{derivs(x[0]), derivs(x[1]), derivs(x[2]), derivs(x[3])};
  SpectralState out = transform_state(assemble(d, eq, params, reverse_order));
  if (dealias)
    for (auto& f : out) dealias_inplace(f);
  return out;
}

IterateSeries zero_series(const GridSpec& grid, const IterationConfig& config) {
  const int steps = sample_count(config);
  IterateSeries s;
  for (int n = 0; n <= steps; ++n) {
    s.times.push_back(n * config.dt);
    s.values.push_back(zero_spectral_state(grid));
    s.rates.push_back(zero_spectral_state(grid));
  }
  return s;
}

PicardOutput picard_step(const IterateSeries& prev, const PerturbationState& data,
                         const IterationConfig& config, const ThermoParams& params) {
  const std::size_t N = prev.times.size();
  if (N < 2) throw std::invalid_argument("iterate needs at least two samples");
  const auto nu = diffusivities(params, data.eq);
  PicardOutput out;
  out.forcing.reserve(N);
  for (const auto& x : prev.values)
    out.forcing.push_back(forcing(x, data.eq, params, config.dealias, config.reverse_order));

  auto rate = [&](const SpectralState& x, const SpectralState& f) {
    SpectralState r = f;
    for (int i = 0; i < 4; ++i) r[i].axpy(nu[i], laplacian(x[i]));
    return r;
  };

  IterateSeries& next = out.next;
  next.times = prev.times;
  const SpectralState x0 = transform_state(data);
  next.values.push_back(x0);
  next.rates.push_back(rate(x0, out.forcing[0]));
  for (std::size_t n = 0; n + 1 < N; ++n) {
    const double dt = prev.times[n + 1] - prev.times[n];
    SpectralState x = zero_spectral_state(prev.values[0][0].grid());
    for (int i = 0; i < 4; ++i)
      x[i] = heat_propagate(next.values[n][i], nu[i], out.forcing[n][i], out.forcing[n + 1][i], dt);
    next.rates.push_back(rate(x, out.forcing[n + 1]));
    next.values.push_back(std::move(x));
  }
  return out;
}

double b_norm(const IterateSeries& s, int i, const lp::DyadicPartition& P) {
  return lp::triple_norm_B(s.times, profile(s.values, i, P), profile(s.rates, i, P),
                           profile(s.values, i, P, true), P.grid().dim(), P.j_min());
}

double b_distance(const IterateSeries& a, const IterateSeries& b, const lp::DyadicPartition& P) {
  const IterateSeries d = difference(a, b);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += b_norm(d, i, P);
  return acc;
}

double forcing_norm(const std::vector<double>& times, const std::vector<SpectralState>& f, int i,
                    const lp::DyadicPartition& P) {
  return lp::time_space_norm(times, profile(f, i, P), 1, critical(P.grid().dim()), P.j_min())
      .total;
}

double limit_residual(const IterateSeries& s, const thermo::EquilibriumState& eq,
                      const ThermoParams& params, const lp::DyadicPartition& P, bool dealias) {
  const std::size_t N = s.times.size();
  if (N < 3) throw std::invalid_argument("residual needs at least three samples");
  const auto nu = diffusivities(params, eq);
  std::vector<SpectralState> res;
  res.reserve(N);
  for (std::size_t n = 0; n < N; ++n) {
    // Second-order differences: one-sided at the ends, centered inside.
    SpectralState dx = zero_spectral_state(P.grid());
    for (int i = 0; i < 4; ++i) {
      if (n == 0) {
        const double h = s.times[1] - s.times[0];
        dx[i].axpy(-1.5 / h, s.values[0][i]).axpy(2.0 / h, s.values[1][i]).axpy(-0.5 / h, s.values[2][i]);
      } else if (n == N - 1) {
        const double h = s.times[N - 1] - s.times[N - 2];
        dx[i].axpy(1.5 / h, s.values[N - 1][i]).axpy(-2.0 / h, s.values[N - 2][i]).axpy(0.5 / h, s.values[N - 3][i]);
      } else {
        const double h2 = s.times[n + 1] - s.times[n - 1];
        dx[i].axpy(1.0 / h2, s.values[n + 1][i]).axpy(-1.0 / h2, s.values[n - 1][i]);
      }
    }
    PerturbationState st{{inverse(s.values[n][0]), inverse(s.values[n][1]), inverse(s.values[n][2])},
                         inverse(s.values[n][3]), eq};
    const auto full = dyn::perturbed_rhs(st, params);
    for (int i = 0; i < 4; ++i) {
      SpectralField rhs = transform(full[i]);
      if (dealias) {
        const SpectralField lin = laplacian(s.values[n][i]);
        rhs.axpy(-nu[i], lin);
        dealias_inplace(rhs);
        rhs.axpy(nu[i], lin);
      }
      dx[i] -= rhs;
    }
    res.push_back(std::move(dx));
  }
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += forcing_norm(s.times, res, i, P);
  return acc;
}

IterationReport run_iteration(const PerturbationState& data, const IterationConfig& config,
                              const ThermoParams& params, bool with_residual) {
  if (config.kmax < 1) throw Error(ErrorKind::input, "iter.kmax must be at least 1");
  const lp::DyadicPartition P = lp::build_partition(data.grid());
  const double bound = config.h * config.h;
  IterationReport rep;
  IterateSeries x = zero_series(data.grid(), config);
  std::optional<double> prev_delta;
  int rising = 0;

  for (int k = 1; k <= config.kmax; ++k) {
    PicardOutput out = picard_step(x, data, config, params);
    IterationRow row;
    row.k = k;
    const IterateSeries d = difference(out.next, x);
    double total = 0.0, delta = 0.0;
    for (int i = 0; i < 4; ++i) {
      row.norm[i] = b_norm(out.next, i, P);
      row.dnorm[i] = b_norm(d, i, P);
      total += row.norm[i];
      delta += row.dnorm[i];
      rep.max_norm = std::max(rep.max_norm, row.norm[i]);
      if (row.norm[i] > bound) rep.est1_ok = false;
    }
    for (int i = 0; i < 3; ++i) row.norm_F += forcing_norm(out.next.times, out.forcing, i, P);
    row.norm_G = forcing_norm(out.next.times, out.forcing, 3, P);
    rep.max_forcing = std::max({rep.max_forcing, row.norm_F, row.norm_G});
    if (prev_delta && *prev_delta > 0.0) {
      row.ratio = delta / *prev_delta;
      rep.max_ratio = std::max(rep.max_ratio, *row.ratio);
      if (k >= 2 && *row.ratio > 0.5) rep.est2_ok = false;
      rising = *row.ratio >= 1.0 ? rising + 1 : 0;
    }
    if (with_residual) row.residual = limit_residual(out.next, data.eq, params, P, config.dealias);
    rep.rows.push_back(row);
    x = std::move(out.next);
    prev_delta = delta;

    if (delta <= config.tol * total) {
      rep.status = IterationStatus::converged;
      rep.message = fmt::format("converged at k = {}", k);
      break;
    }
    if (rising >= config.divergence_window) {
      rep.status = IterationStatus::diverged;
      rep.message = fmt::format("difference ratio >= 1 for {} consecutive iterations (k = {})",
                                rising, k);
      break;
    }
  }
  if (rep.status == IterationStatus::exhausted)
    rep.message = fmt::format("no convergence within {} iterations", config.kmax);
  rep.limit = std::move(x);
  return rep;
}

void write_iteration_csv(std::ostream& os, const IterationReport& report) {
  os << "k,norm_zA,norm_zB,norm_zC,norm_w,dnorm_zA,dnorm_zB,dnorm_zC,dnorm_w,ratio,norm_F,norm_G\n";
  for (const auto& r : report.rows) {
    os << r.k;
    for (double v : r.norm) os << fmt::format(",{:.17g}", v);
    for (double v : r.dnorm) os << fmt::format(",{:.17g}", v);
    os << (r.ratio ? fmt::format(",{:.17g}", *r.ratio) : std::string(","));
    os << fmt::format(",{:.17g},{:.17g}\n", r.norm_F, r.norm_G);
  }
}

std::string summary_line(const IterationReport& report, const GateResult& gate,
                         const IterationConfig& config) {
  const char* status = report.status == IterationStatus::converged ? "converged"
                       : report.status == IterationStatus::diverged ? "diverged"
                                                                    : "exhausted";
  const bool ok = report.status == IterationStatus::converged && report.est1_ok && report.est2_ok;
  return fmt::format(
      "result={} status={} iterations={} gate={} gate_norm={:.6e} gate_bound={:.6e} "
      "est1={} max_norm={:.6e} bound={:.6e} est2={} max_ratio={:.6e} max_forcing={:.6e}",
      ok ? "pass" : "fail", status, report.rows.size(), gate.pass ? "pass" : "fail", gate.measured,
      gate.bound, report.est1_ok ? "pass" : "fail", report.max_norm, config.h * config.h,
      report.est2_ok ? "pass" : "fail", report.max_ratio, report.max_forcing);
}

StabilityReport uniqueness_stability(const PerturbationState& data, const PerturbationState& delta,
                                     const IterationConfig& config, const ThermoParams& params) {
  const lp::DyadicPartition P = lp::build_partition(data.grid());
  StabilityReport rep;
  const IterationReport base = run_iteration(data, config, params);

  IterationConfig reversed = config;
  reversed.reverse_order = !config.reverse_order;
  const IterationReport again = run_iteration(data, reversed, params);
  rep.determinism_distance = b_distance(base.limit, again.limit, P);

  PerturbationState shifted = data;
  const auto idx = critical(data.grid().dim());
  for (int i = 0; i < 4; ++i) {
    shifted.component(i) += delta.component(i);
    rep.delta_norm += lp::besov_norm(delta.component(i), idx, P).total;
  }
  if (rep.delta_norm == 0.0) return rep;
  const IterationReport moved = run_iteration(shifted, config, params);
  rep.distance = b_distance(base.limit, moved.limit, P);
  return rep;
}

CrossValidation cross_validate(const IterateSeries& limit, const PerturbationState& data,
                               const IterationConfig& config, const ThermoParams& params) {
  const lp::DyadicPartition P = lp::build_partition(data.grid());
  dyn::SolverConfig sc;
  sc.dt = config.dt;
  sc.T = config.T;
  sc.dealias = config.dealias;
  sc.model = dyn::SystemModel::perturbed;
  const dyn::PerturbedTrajectory traj = dyn::integrate_perturbed(data, sc, params);
  const IterateSeries other{traj.times, traj.states, traj.rates};
  CrossValidation cv;
  cv.distance = b_distance(limit, other, P);
  for (int i = 0; i < 4; ++i) cv.limit_norm += b_norm(limit, i, P);
  return cv;
}

PerturbationState single_mode_data(const GridSpec& grid, const thermo::EquilibriumState& eq,
                                   std::array<int, 3> wavevector, std::array<double, 4> weights,
                                   double total_norm) {
  const double k0 = grid.base_frequency();
  const int d = grid.dim();
  const Field mode = Field::sample(grid, [&](const std::array<double, 3>& x) {
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += k0 * wavevector[a] * x[a];
    return std::cos(phase);
  });
  const lp::DyadicPartition P = lp::build_partition(grid);
  const double unit = lp::besov_norm(mode, critical(d), P).total;
  if (!(unit > 0.0)) throw std::invalid_argument("wavevector has no resolvable dyadic content");
  double wsum = 0.0;
  for (double w : weights) wsum += std::abs(w);
  if (!(wsum > 0.0)) throw std::invalid_argument("data weights are all zero");

  PerturbationState s = PerturbationState::zero(grid, eq);
  for (int i = 0; i < 4; ++i) s.component(i) = mode * (weights[i] / wsum * total_norm / unit);
  return s;
}

ReferenceProblem reference_problem(int n, double dt) {
  const GridSpec grid(2, n, 2.0 * std::numbers::pi);
  ThermoParams params;
  const auto eq = thermo::scale_equilibrium(thermo::find_equilibrium({1.0, 1.0, 1.0}, params), 100.0,
                                            params);
  IterationConfig config;
  config.h = params.h;
  config.dt = dt;
  const double target = 0.5 * std::pow(config.h, 4);
  auto data = single_mode_data(grid, eq, {1, 1, 0}, {1.0, 0.5, 0.75, 1.0}, target);
  return {grid, params, eq, config, std::move(data)};
}

}  // namespace rdt::harness
