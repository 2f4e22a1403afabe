#include "rdt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "rdt/error.hpp"
#include "rdt/fft.hpp"
#include "rdt/spectral_ops.hpp"

namespace rdt::dyn {

namespace {

constexpr const char* kNames[4] = {"c_A", "c_B", "c_C", "theta"};

struct Derivs {
  Field value;
  std::vector<Field> grad;
  Field lap;
};

Derivs derivs(const Field& u) {
  const SpectralField h = transform(u);
  Derivs d{u, {}, inverse(laplacian(h))};
  for (int a = 0; a < u.grid().dim(); ++a) d.grad.push_back(inverse(derivative(h, a)));
  return d;
}

double dot_at(const std::vector<Field>& a, const std::vector<Field>& b, std::size_t k) {
  double s = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) s += a[x][k] * b[x][k];
  return s;
}

void require_positive_field(const Field& f, const char* name, double t) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f[k]))
      throw Error(ErrorKind::physics,
                  fmt::format("non-finite value in {} at node {} (t = {:.6g})", name, k, t));
    if (!(f[k] > 0.0)) {
      throw Error(ErrorKind::physics,
                  fmt::format("positivity lost in {} at node {} (value {:.6g}, t = {:.6g})",
                              name, k, f[k], t));
    }
  }
}

}  // namespace

int step_count(const SolverConfig& config) {
  if (!(config.dt > 0.0)) throw Error(ErrorKind::input, "run.dt must be positive");
  if (!(config.T >= config.dt)) throw Error(ErrorKind::input, "run.T must be at least run.dt");
  if (config.record_every < 1) throw Error(ErrorKind::input, "run.record_every must be >= 1");
  const double ratio = config.T / config.dt;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw Error(ErrorKind::input, "run.T must be an integer multiple of run.dt");
  return static_cast<int>(n);
}

std::array<Field, 3> rhs_concentration(const ChemState& state, const ThermoParams& params,
                                       RateConvention convention) {
  const GridSpec& grid = state.grid();
  for (int i = 0; i < 4; ++i) require_positive_field(state.component(i), kNames[i], 0.0);
  const Field R = thermo::rate_field(state.c, state.theta, params, convention);
  const std::vector<Field> g = gradient(map(state.theta, [](double v) { return std::log(v); }));
  std::array<Field, 3> out{Field(grid), Field(grid), Field(grid)};
  for (int i = 0; i < 3; ++i) {
    std::vector<Field> flux;
    for (const Field& ga : g) flux.push_back(state.c[i] * ga);
    out[i] = divergence(flux);
    out[i] *= params.k_c;
    out[i].axpy(-params.sigma[i], R);
  }
  return out;
}

Field rhs_temperature(const ChemState& state, const ThermoParams& params,
                      RateConvention convention) {
  const GridSpec& grid = state.grid();
  for (int i = 0; i < 4; ++i) require_positive_field(state.component(i), kNames[i], 0.0);
  const Field R = thermo::rate_field(state.c, state.theta, params, convention);
  const Derivs th = derivs(state.theta);
  std::array<Derivs, 3> ci{derivs(state.c[0]), derivs(state.c[1]), derivs(state.c[2])};
  std::array<Derivs, 3> pi{derivs(state.c[0] * state.theta), derivs(state.c[1] * state.theta),
                           derivs(state.c[2] * state.theta)};
  const double kc2 = params.k_c * params.k_c;
  const double kt = params.k_theta;
  double sig_sum = 0.0;
  for (double s : params.sigma) sig_sum += s;

  Field out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = state.theta[k];
    double S = 0.0, cross = 0.0, bracket = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double c = state.c[i][k];
      S += c;
      cross += dot_at(ci[i].grad, th.grad, k);
      const double gp2 = dot_at(pi[i].grad, pi[i].grad, k);
      bracket += (params.eta[i] - 1.0) * gp2 / (c * theta) + pi[i].lap[k];
    }
    const double num = params.kappa * th.lap[k] + sig_sum * kt * theta * R[k] + kc2 * bracket;
    out[k] = kt * cross / S + kt * dot_at(th.grad, th.grad, k) / theta + num / (kt * S);
  }
  return out;
}

std::array<Field, 4> perturbed_rhs(const PerturbationState& state, const ThermoParams& params) {
  const GridSpec& grid = state.grid();
  const auto& eq = state.eq;
  const Derivs w = derivs(state.omega);
  std::array<Derivs, 3> z{derivs(state.z[0]), derivs(state.z[1]), derivs(state.z[2])};
  const double kc = params.k_c, kt = params.k_theta;

  std::array<Field, 4> out{Field(grid), Field(grid), Field(grid), Field(grid)};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = state.omega[k] + eq.theta_tilde;
    if (!(theta > 0.0)) throw PositivityError("theta", k, theta);
    double r = 0.0;
    for (int j = 0; j < 3; ++j) r += params.sigma[j] * state.z[j][k] / eq.c_tilde[j];
    r = kc * r - kt * state.omega[k] / eq.theta_tilde;
    const double gw2 = dot_at(w.grad, w.grad, k);

    double S = 0.0, cross = 0.0, eta_term = 0.0, reg = 0.0, react = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double zi = state.z[i][k];
      const double ci = zi + eq.c_tilde[i];
      if (!(ci > 0.0)) throw PositivityError(kNames[i], k, ci);
      const double zw = dot_at(z[i].grad, w.grad, k);
      out[i][k] = kc * z[i].lap[k] - params.sigma[i] * r +
                  kc * (zw / theta + zi * w.lap[k] / theta - ci * gw2 / (theta * theta));
      S += ci;
      cross += zw;
      if (params.eta[i] != 1.0) {
        double m2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
          const double m = ci * w.grad[a][k] + theta * z[i].grad[a][k];
          m2 += m * m;
        }
        eta_term += (params.eta[i] - 1.0) * m2 / (ci * theta);
      }
      reg += ci * w.lap[k] + zw + state.omega[k] * z[i].lap[k];
      react += params.sigma[i] * kt * theta * r;
    }
    const double lhs_extra = kt * kt * (cross + S * gw2 / theta);
    const double rhs = params.kappa * w.lap[k] + react + kc * kc * (eta_term + reg);
    out[3][k] = (lhs_extra + rhs) / (kt * S);
  }
  return out;
}

thermo::EquilibriumState mean_reference(const ChemState& state) {
  thermo::EquilibriumState eq;
  for (int i = 0; i < 3; ++i) eq.c_tilde[i] = state.c[i].mean();
  eq.theta_tilde = state.theta.mean();
  return eq;
}

namespace {

double total(const thermo::Triple& c) { return c[0] + c[1] + c[2]; }

ChemState to_physical(const SpectralState& u) {
  return {{inverse(u[0]), inverse(u[1]), inverse(u[2])}, inverse(u[3])};
}

PerturbationState to_perturbation(const SpectralState& u, const thermo::EquilibriumState& eq) {
  return {{inverse(u[0]), inverse(u[1]), inverse(u[2])}, inverse(u[3]), eq};
}

}  // namespace

SplitSystem condensed_system(const ThermoParams& params, const SolverConfig& config,
                             const thermo::EquilibriumState& reference) {
  SplitSystem sys;
  const double kt = temperature_diffusivity(params, total(reference.c_tilde));
  sys.diffusivity = {params.k_c, params.k_c, params.k_c, kt};
  const auto convention = config.convention;
  const bool dealias = config.dealias;
  sys.nonlinear = [params, convention, dealias, kt](const SpectralState& u) {
    const ChemState s = to_physical(u);
    const auto rc = rhs_concentration(s, params, convention);
    const Field rt = rhs_temperature(s, params, convention);
    SpectralState out{transform(rc[0]), transform(rc[1]), transform(rc[2]), transform(rt)};
    out[3].axpy(-kt, laplacian(u[3]));
    if (dealias)
      for (auto& f : out) dealias_inplace(f);
    return out;
  };
  sys.check = [](const SpectralState& u, double t) {
    for (int i = 0; i < 4; ++i) require_positive_field(inverse(u[i]), kNames[i], t);
  };
  return sys;
}

SplitSystem perturbed_system(const ThermoParams& params, const SolverConfig& config,
                             const thermo::EquilibriumState& eq) {
  SplitSystem sys;
  const double kt = temperature_diffusivity(params, total(eq.c_tilde));
  sys.diffusivity = {params.k_c, params.k_c, params.k_c, kt};
  const bool dealias = config.dealias;
  sys.nonlinear = [params, eq, dealias](const SpectralState& u) {
    SpectralState out = transform_state(perturbed_rhs(to_perturbation(u, eq), params));
    for (int i = 0; i < 4; ++i) {
      const double nu = i < 3 ? params.k_c : temperature_diffusivity(params, total(eq.c_tilde));
      out[i].axpy(-nu, laplacian(u[i]));
      if (dealias) dealias_inplace(out[i]);
    }
    return out;
  };
  sys.check = [eq](const SpectralState& u, double t) {
    for (int i = 0; i < 4; ++i) {
      Field f = inverse(u[i]);
      f += i < 3 ? eq.c_tilde[i] : eq.theta_tilde;
      require_positive_field(f, kNames[i], t);
    }
  };
  return sys;
}

Stepper::Stepper(SplitSystem system, const GridSpec& grid, double dt)
    : system_(std::move(system)), grid_(grid), dt_(dt) {
  const auto& g = geometry(grid);
  for (int i = 0; i < 4; ++i) {
    const std::size_t m = g.k2.size();
    decay_[i].resize(m);
    phi1_[i].resize(m);
    phi2_[i].resize(m);
    for (std::size_t q = 0; q < m; ++q) {
      const EtdWeights w = etd_weights(system_.diffusivity[i] * g.k2[q] * dt);
      decay_[i][q] = w.decay;
      phi1_[i][q] = w.phi1;
      phi2_[i][q] = w.phi2;
    }
  }
}

SpectralState Stepper::step(const SpectralState& u) const {
  const SpectralState n0 = system_.nonlinear(u);
  SpectralState a = zero_spectral_state(grid_);
  for (int i = 0; i < 4; ++i)
    for (std::size_t q = 0; q < a[i].size(); ++q)
      a[i][q] = decay_[i][q] * u[i][q] + dt_ * phi1_[i][q] * n0[i][q];
  const SpectralState na = system_.nonlinear(a);
  for (int i = 0; i < 4; ++i)
    for (std::size_t q = 0; q < a[i].size(); ++q)
      a[i][q] += dt_ * phi2_[i][q] * (na[i][q] - n0[i][q]);
  return a;
}

SpectralState Stepper::time_derivative(const SpectralState& u) const {
  SpectralState out = system_.nonlinear(u);
  for (int i = 0; i < 4; ++i) out[i].axpy(system_.diffusivity[i], laplacian(u[i]));
  return out;
}

ChemState step(const ChemState& state, const SolverConfig& config, const ThermoParams& params) {
  if (!(config.dt > 0.0)) throw Error(ErrorKind::input, "run.dt must be positive");
  const auto ref = config.reference.value_or(mean_reference(state));
  Stepper stepper(condensed_system(params, config, ref), state.grid(), config.dt);
  const SpectralState u = transform_state(state);
  for (int i = 0; i < 4; ++i) require_positive_field(state.component(i), kNames[i], 0.0);
  const SpectralState next = stepper.step(u);
  stepper.system().check(next, config.dt);
  return to_physical(next);
}

namespace {

void record_snapshot(TrajectoryRecord& rec, double t, ChemState s, const ThermoParams& params,
                     RateConvention convention) {
  const GridSpec& grid = s.grid();
  const double alpha = params.sigma[0], beta = params.sigma[1], gamma = -params.sigma[2];
  const double dv = grid.cell_volume();
  double z0 = 0.0, z1 = 0.0, e = 0.0, ent = 0.0;
  double min_c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const thermo::StatePoint p{{s.c[0][k], s.c[1][k], s.c[2][k]}, s.theta[k]};
    z0 += gamma * p.c[0] + alpha * p.c[2];
    z1 += gamma * p.c[1] + beta * p.c[2];
    e += thermo::internal_energy(p, params);
    ent += thermo::entropy(p, params);
    min_c = std::min({min_c, p.c[0], p.c[1], p.c[2]});
  }
  const Field R = thermo::rate_field(s.c, s.theta, params, convention);
  std::array<thermo::Vec, 3> u;
  for (int i = 0; i < 3; ++i) u[i] = thermo::darcy_velocity(i, s.c[i], s.theta, params);
  const auto prod = thermo::entropy_production(s.c, s.theta, u, R, params);

  rec.times.push_back(t);
  rec.Z0.push_back(z0 * dv);
  rec.Z1.push_back(z1 * dv);
  rec.energy.push_back(e * dv);
  rec.entropy.push_back(ent * dv);
  rec.min_delta.push_back(prod.delta.min());
  rec.min_theta.push_back(s.theta.min());
  rec.min_c.push_back(min_c);
  rec.constraint_violated.push_back(prod.constraint_ok ? 0 : 1);
  rec.snapshots.push_back(std::move(s));
}

}  // namespace

TrajectoryRecord integrate(const ChemState& state0, const SolverConfig& config,
                           const ThermoParams& params) {
  const int steps = step_count(config);
  const GridSpec& grid = state0.grid();
  TrajectoryRecord rec;
  const auto ref = config.reference.value_or(mean_reference(state0));
  const bool perturbed = config.model == SystemModel::perturbed;

  ChemState shifted = state0;
  if (perturbed) {
    for (int i = 0; i < 3; ++i) shifted.c[i] += -ref.c_tilde[i];
    shifted.theta += -ref.theta_tilde;
  }
  SpectralState u = transform_state(shifted);
  Stepper stepper(perturbed ? perturbed_system(params, config, ref)
                            : condensed_system(params, config, ref),
                  grid, config.dt);

  auto physical = [&](const SpectralState& v) {
    ChemState s = to_physical(v);
    if (perturbed) {
      for (int i = 0; i < 3; ++i) s.c[i] += ref.c_tilde[i];
      s.theta += ref.theta_tilde;
    }
    return s;
  };

  try {
    stepper.system().check(u, 0.0);
    record_snapshot(rec, 0.0, physical(u), params, config.convention);
    for (int n = 1; n <= steps; ++n) {
      u = stepper.step(u);
      const double t = n * config.dt;
      stepper.system().check(u, t);
      if (n % config.record_every == 0 || n == steps)
        record_snapshot(rec, t, physical(u), params, config.convention);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::physics) throw;
    rec.failure = e.what();
  }
  return rec;
}

PerturbedTrajectory integrate_perturbed(const PerturbationState& state0,
                                        const SolverConfig& config,
                                        const ThermoParams& params) {
  const int steps = step_count(config);
  Stepper stepper(perturbed_system(params, config, state0.eq), state0.grid(), config.dt);
  SpectralState u = transform_state(state0);
  PerturbedTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(u);
  out.rates.push_back(stepper.time_derivative(u));
  for (int n = 1; n <= steps; ++n) {
    u = stepper.step(u);
    stepper.system().check(u, n * config.dt);
    out.times.push_back(n * config.dt);
    out.states.push_back(u);
    out.rates.push_back(stepper.time_derivative(u));
  }
  return out;
}

DiagnosticsReport diagnostics(const TrajectoryRecord& record, double entropy_tol,
                              double delta_tol) {
  DiagnosticsReport rep;
  const std::size_t n = record.times.size();
  if (n == 0) return rep;
  rep.min_delta = *std::min_element(record.min_delta.begin(), record.min_delta.end());
  rep.min_theta = *std::min_element(record.min_theta.begin(), record.min_theta.end());
  rep.min_c = *std::min_element(record.min_c.begin(), record.min_c.end());
  const double e0 = record.energy[0];
  for (std::size_t k = 0; k < n; ++k) {
    rep.relative_energy_drift =
        std::max(rep.relative_energy_drift, std::abs(record.energy[k] - e0) / std::abs(e0));
    rep.max_Z_drift = std::max({rep.max_Z_drift, std::abs(record.Z0[k] - record.Z0[0]),
                                std::abs(record.Z1[k] - record.Z1[0])});
    if (record.constraint_violated[k]) {
      rep.constraint_ok = false;
      rep.violations.push_back(fmt::format("eta constraint violated at t = {:.6g}", record.times[k]));
    } else if (record.min_delta[k] < -delta_tol) {
      rep.violations.push_back(fmt::format("entropy production {:.3e} < 0 at t = {:.6g}",
                                           record.min_delta[k], record.times[k]));
    }
    if (k == 0) continue;
    const double dt = record.times[k] - record.times[k - 1];
    rep.max_energy_drift_rate =
        std::max(rep.max_energy_drift_rate, std::abs(record.energy[k] - record.energy[k - 1]) / dt);
    const double inc = record.entropy[k] - record.entropy[k - 1];
    if (k == 1 || inc < rep.min_entropy_increment) rep.min_entropy_increment = inc;
    if (inc < -entropy_tol)
      rep.violations.push_back(
          fmt::format("entropy decreased by {:.3e} at t = {:.6g}", -inc, record.times[k]));
  }
  return rep;
}

void write_diagnostics_csv(std::ostream& os, const TrajectoryRecord& record) {
  os << "t,Z0,Z1,energy,entropy,min_delta,min_theta,min_c\n";
  for (std::size_t k = 0; k < record.times.size(); ++k)
    os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                      record.times[k], record.Z0[k], record.Z1[k], record.energy[k],
                      record.entropy[k], record.min_delta[k], record.min_theta[k],
                      record.min_c[k]);
}

ReactionSeries reaction_ode(const thermo::Triple& c0, double theta0, const ReactionConfig& config,
                            const ThermoParams& params) {
  SolverConfig sc;
  sc.dt = config.dt;
  sc.T = config.T;
  sc.record_every = config.record_every;
  const int steps = step_count(sc);
  thermo::require_positive({c0, theta0});

  using State = std::array<double, 4>;
  double sig_sum = 0.0;
  for (double s : params.sigma) sig_sum += s;
  const auto convention = config.convention;

  auto system = [&](const State& x, State& dxdt, double /*t*/) {
    const thermo::StatePoint p{{x[0], x[1], x[2]}, x[3]};
    const double R = thermo::rate(p, params, convention);
    for (int i = 0; i < 3; ++i) dxdt[i] = -params.sigma[i] * R;
    dxdt[3] = x[3] * R * sig_sum / (x[0] + x[1] + x[2]);
  };

  const double alpha = params.sigma[0], beta = params.sigma[1], gamma = -params.sigma[2];
  ReactionSeries out;
  int counter = 0;
  auto observer = [&](const State& x, double t) {
    const thermo::StatePoint p{{x[0], x[1], x[2]}, x[3]};
    thermo::require_positive(p);
    if (counter++ % config.record_every != 0 && counter != steps + 1) return;
    out.t.push_back(t);
    out.state.push_back(p);
    out.Z0.push_back(gamma * x[0] + alpha * x[2]);
    out.Z1.push_back(gamma * x[1] + beta * x[2]);
    out.R.push_back(thermo::rate(p, params, convention));
  };

  State x{c0[0], c0[1], c0[2], theta0};
  boost::numeric::odeint::runge_kutta4<State> rk4;
  boost::numeric::odeint::integrate_n_steps(rk4, system, x, 0.0, config.dt,
                                            static_cast<std::size_t>(steps), observer);
  return out;
}

}  // namespace rdt::dyn
