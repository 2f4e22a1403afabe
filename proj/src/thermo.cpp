#include "rdt/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rdt/error.hpp"
#include "rdt/spectral_ops.hpp"

namespace rdt::thermo {

void validate(const ThermoParams& params) {
  if (!(params.k_c > 0.0)) throw std::invalid_argument("k_c must be positive");
  if (!(params.k_theta > 0.0)) throw std::invalid_argument("k_theta must be positive");
  if (!(params.kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  if (!(params.nu >= 0.0)) throw std::invalid_argument("nu must be non-negative");
  for (double e : params.eta)
    if (!(e > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(params.h > 0.0 && params.h < 1.0)) throw std::invalid_argument("h must lie in (0, 1)");
}

RateConvention parse_convention(const std::string& name) {
  if (name == "r1" || name == "mass_action") return RateConvention::mass_action;
  if (name == "r2" || name == "linear_response") return RateConvention::linear_response;
  if (name == "rt4" || name == "Rt4" || name == "affinity") return RateConvention::affinity_form;
  throw Error(ErrorKind::input, "unknown rate convention '" + name + "'");
}

std::string to_string(RateConvention convention) {
  switch (convention) {
    case RateConvention::mass_action: return "r1";
    case RateConvention::linear_response: return "r2";
    case RateConvention::affinity_form: return "rt4";
  }
  return "?";
}

void require_positive(const StatePoint& p) {
  static const char* names[] = {"c_A", "c_B", "c_C"};
  for (int i = 0; i < kSpecies; ++i)
    if (!(p.c[i] > 0.0)) throw PositivityError(names[i], 0, p.c[i]);
  if (!(p.theta > 0.0)) throw PositivityError("theta", 0, p.theta);
}

double free_energy(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  const double lt = std::log(p.theta);
  double psi = 0.0;
  for (double c : p.c) psi += params.k_c * c * p.theta * std::log(c) - params.k_theta * c * p.theta * lt;
  return psi;
}

double species_entropy(int i, const StatePoint& p, const ThermoParams& params) {
  const double c = p.c[i];
  return -c * (params.k_c * std::log(c) - params.k_theta * (std::log(p.theta) + 1.0));
}

double entropy(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  double s = 0.0;
  for (int i = 0; i < kSpecies; ++i) s += species_entropy(i, p, params);
  return s;
}

double temperature_from_entropy(const Triple& c, double s, const ThermoParams& params) {
  double total = 0.0, clc = 0.0;
  for (double ci : c) {
    if (ci < 0.0) throw PositivityError("c", 0, ci);
    total += ci;
    if (ci > 0.0) clc += ci * std::log(ci);
  }
  if (!(total > 0.0)) throw std::invalid_argument("total concentration must be positive");
  return std::exp((s + params.k_c * clc) / (params.k_theta * total) - 1.0);
}

double internal_energy(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  double e = 0.0;
  for (double c : p.c) e += params.k_theta * c * p.theta;
  return e;
}

double internal_energy_cs(const Triple& c, double s, const ThermoParams& params) {
  return internal_energy({c, temperature_from_entropy(c, s, params)}, params);
}

double chemical_potential(int i, const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  return params.k_c * p.theta * (std::log(p.c[i]) + 1.0) -
         params.k_theta * p.theta * std::log(p.theta);
}

double affinity(const StatePoint& p, const ThermoParams& params) {
  return chemical_potential(0, p, params) + chemical_potential(1, p, params) -
         chemical_potential(2, p, params);
}

double pressure(int i, const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  return params.k_c * p.c[i] * p.theta;
}

double equilibrium_constant(double theta, const Triple& k_c, const Triple& k_theta) {
  if (!(theta > 0.0)) throw PositivityError("theta", 0, theta);
  return std::pow(theta, k_theta[0] + k_theta[1] - k_theta[2]) /
         std::exp(k_c[0] + k_c[1] - k_c[2]);
}

double equilibrium_constant(double theta, const ThermoParams& params) {
  const Triple kc{params.k_c, params.k_c, params.k_c};
  const Triple kt{params.k_theta, params.k_theta, params.k_theta};
  return equilibrium_constant(theta, kc, kt);
}

namespace {

double log_quotient(const StatePoint& p) {
  return std::log(p.c[0]) + std::log(p.c[1]) - std::log(p.c[2]);
}

}  // namespace

double rate_mass_action(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  return std::exp(params.k_c * log_quotient(p) + params.k_theta * std::log(p.theta) -
                  params.k_c) -
         1.0;
}

double rate_linear_response(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  return params.k_c * log_quotient(p) + params.k_theta * std::log(p.theta) - params.k_c;
}

double rate_affinity_form(const StatePoint& p, const ThermoParams& params) {
  require_positive(p);
  return params.k_c * log_quotient(p) - params.k_theta * std::log(p.theta) + params.k_c;
}

double rate(const StatePoint& p, const ThermoParams& params, RateConvention convention) {
  switch (convention) {
    case RateConvention::mass_action: return rate_mass_action(p, params);
    case RateConvention::linear_response: return rate_linear_response(p, params);
    case RateConvention::affinity_form: return rate_affinity_form(p, params);
  }
  throw std::logic_error("unhandled rate convention");
}

double linearized_rate(const Triple& z, double omega, const EquilibriumState& eq,
                       const ThermoParams& params) {
  double acc = 0.0;
  for (int j = 0; j < kSpecies; ++j) acc += params.sigma[j] * z[j] / eq.c_tilde[j];
  return params.k_c * acc - params.k_theta * omega / eq.theta_tilde;
}

double dissipation_reaction(double R, double eta1, double eta2, DissipationForm form) {
  if (form == DissipationForm::quadratic) return eta1 * R * R;
  const double arg = eta2 * R + 1.0;
  if (!(arg > 0.0))
    throw Error(ErrorKind::physics, fmt::format("dissipation log argument {} is not positive", arg));
  return eta1 * R * std::log(arg);
}

double virtual_work_residual(const StatePoint& p, const ThermoParams& params,
                             RateConvention convention) {
  const double R = rate(p, params, convention);
  const double dF_dR = -affinity(p, params);
  double d_over_r = 0.0;
  if (convention == RateConvention::mass_action) {
    // 𝒟/R = η₁ ln(η₂R + 1) stays finite as R -> 0.
    d_over_r = p.theta * std::log1p(R);
  } else {
    d_over_r = p.theta * R;
  }
  return std::abs(dF_dR + d_over_r);
}

EquilibriumState find_equilibrium(const Triple& c_tilde, const ThermoParams& params,
                                  RateConvention convention) {
  for (double c : c_tilde)
    if (!(c > 0.0)) throw PositivityError("c_tilde", 0, c);
  const double lq = std::log(c_tilde[0]) + std::log(c_tilde[1]) - std::log(c_tilde[2]);
  double log_theta = 0.0;
  if (convention == RateConvention::affinity_form)
    log_theta = (params.k_c * lq + params.k_c) / params.k_theta;
  else
    log_theta = (params.k_c - params.k_c * lq) / params.k_theta;
  return {c_tilde, std::exp(log_theta)};
}

EquilibriumState scale_equilibrium(const EquilibriumState& eq, double lambda,
                                   const ThermoParams& params) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
  EquilibriumState out = eq;
  for (double& c : out.c_tilde) c *= lambda;
  out.theta_tilde *= std::pow(lambda, params.k_c / params.k_theta);
  return out;
}

double IdentityReport::max_rel_err() const {
  double m = temperature_rel_err;
  for (double e : potential_rel_err) m = std::max(m, e);
  return m;
}

IdentityReport verify_thermo_identities(const StatePoint& p, const ThermoParams& params,
                                 double rel_step) {
  require_positive(p);
  if (!(rel_step > 0.0 && rel_step <= 1e-2))
    throw std::invalid_argument("finite-difference step must lie in (0, 1e-2]");
  IdentityReport rep;
  const double s = entropy(p, params);
  const double hs = rel_step * std::max(1.0, std::abs(s));
  const double de_ds = (internal_energy_cs(p.c, s + hs, params) -
                        internal_energy_cs(p.c, s - hs, params)) /
                       (2.0 * hs);
  rep.temperature_rel_err = std::abs(de_ds - p.theta) / std::abs(p.theta);

  for (int i = 0; i < kSpecies; ++i) {
    Triple up = p.c, dn = p.c;
    const double hc = rel_step * p.c[i];
    up[i] += hc;
    dn[i] -= hc;
    const double de_dc =
        (internal_energy_cs(up, s, params) - internal_energy_cs(dn, s, params)) / (2.0 * hc);
    const double mu = chemical_potential(i, p, params);
    rep.potential_rel_err[i] = std::abs(de_dc - mu) / std::max(std::abs(mu), 1e-300);
  }
  return rep;
}

// ------------------------------------------------------------ field level

namespace {

void require_positive_field(const Field& f, const char* name) {
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!(f[k] > 0.0)) throw PositivityError(name, k, f[k]);
}

}  // namespace

Field rate_field(const std::array<Field, 3>& c, const Field& theta,
                 const ThermoParams& params, RateConvention convention) {
  Field out(theta.grid());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = rate({{c[0][k], c[1][k], c[2][k]}, theta[k]}, params, convention);
  return out;
}

Vec darcy_velocity(int i, const Field& c_i, const Field& theta, const ThermoParams& params) {
  Vec g = gradient(c_i * theta);
  for (Field& f : g) f *= -params.k_c / params.eta[i];
  return g;
}

Vec heat_flux(const Field& theta, const ThermoParams& params) {
  Vec g = gradient(theta);
  for (Field& f : g) f *= -params.kappa;
  return g;
}

Vec entropy_flux(const Field& theta, const ThermoParams& params) {
  require_positive_field(theta, "theta");
  Vec q = heat_flux(theta, params);
  for (Field& f : q)
    for (std::size_t k = 0; k < f.size(); ++k) f[k] /= theta[k];
  return q;
}

double pressure_identity_residual(int i, const Field& c_i, const Field& theta,
                                  const ThermoParams& params) {
  require_positive_field(c_i, "c");
  require_positive_field(theta, "theta");
  const GridSpec& grid = theta.grid();
  Field P(grid), mu(grid), s(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    StatePoint p;
    p.c = {1.0, 1.0, 1.0};
    p.c[i] = c_i[k];
    p.theta = theta[k];
    P[k] = pressure(i, p, params);
    mu[k] = chemical_potential(i, p, params);
    s[k] = species_entropy(i, p, params);
  }
  const Vec gP = gradient(P), gmu = gradient(mu), gth = gradient(theta);
  double acc = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const Field r = gP[a] - c_i * gmu[a] - s * gth[a];
    const double n = l2_norm(r);
    acc += n * n;
  }
  return std::sqrt(acc);
}

EntropyProduction entropy_production(const std::array<Field, 3>& c, const Field& theta,
                                     const std::array<Vec, 3>& u, const Field& R,
                                     const ThermoParams& params) {
  require_positive_field(theta, "theta");
  const GridSpec& grid = theta.grid();
  const int d = grid.dim();
  EntropyProduction out{Field(grid)};
  const Vec gth = gradient(theta);

  // ν Σ|∇u_i|², only assembled when a viscosity is present.
  Field visc(grid);
  if (params.nu > 0.0) {
    for (int i = 0; i < kSpecies; ++i)
      for (int a = 0; a < d; ++a)
        for (const Field& g : gradient(u[i][a])) visc += g * g;
    visc *= params.nu;
  }

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const StatePoint p{{c[0][k], c[1][k], c[2][k]}, theta[k]};
    double drag = 0.0, chem = 0.0;
    for (int i = 0; i < kSpecies; ++i) {
      double u2 = 0.0;
      for (int a = 0; a < d; ++a) u2 += u[i][a][k] * u[i][a][k];
      drag += (params.sigma[i] * R[k] + params.eta[i]) * u2;
      chem += chemical_potential(i, p, params) * params.sigma[i] * R[k];
    }
    double g2 = 0.0;
    for (int a = 0; a < d; ++a) g2 += gth[a][k] * gth[a][k];
    if (drag < 0.0 && out.constraint_ok) {
      out.constraint_ok = false;
      out.first_violation = k;
    }
    out.delta[k] = (visc[k] + drag + chem + params.kappa * g2 / p.theta) / p.theta;
  }
  return out;
}

}  // namespace rdt::thermo
