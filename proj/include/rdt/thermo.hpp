#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rdt/grid.hpp"

namespace rdt::thermo {

inline constexpr int kSpecies = 3;
using Triple = std::array<double, kSpecies>;

/// Coefficients of the ideal three-species mixture A + B <-> C.
struct ThermoParams {
  double k_c = 1.0;
  double k_theta = 1.0;
  double kappa = 1.0;
  double nu = 0.0;  // viscosity; zero for the Darcy reduction
  Triple eta{1.0, 1.0, 1.0};
  Triple sigma{1.0, 1.0, -1.0};
  double h = 0.1;
};

/// Throws std::invalid_argument when a coefficient is out of range.
void validate(const ThermoParams& params);

struct StatePoint {
  Triple c{1.0, 1.0, 1.0};
  double theta = 1.0;
};

struct EquilibriumState {
  Triple c_tilde{1.0, 1.0, 1.0};
  double theta_tilde = 1.0;
};

/// mass_action: (c_A c_B / c_C)^{k^c} θ^{k^θ} / e^{k^c} - 1
/// linear_response: k^c ln(c_A c_B / c_C) + k^θ ln θ - k^c
/// affinity_form: k^c ln(c_A c_B / c_C) - k^θ ln θ + k^c (default downstream)
enum class RateConvention { mass_action, linear_response, affinity_form };

RateConvention parse_convention(const std::string& name);
std::string to_string(RateConvention convention);

/// Throws Error(physics) on non-positive concentration or temperature.
void require_positive(const StatePoint& p);

double free_energy(const StatePoint& p, const ThermoParams& params);
double entropy(const StatePoint& p, const ThermoParams& params);
double species_entropy(int i, const StatePoint& p, const ThermoParams& params);
double temperature_from_entropy(const Triple& c, double s, const ThermoParams& params);
double internal_energy(const StatePoint& p, const ThermoParams& params);
/// e₁(c, s) = internal energy with θ eliminated through the entropy.
double internal_energy_cs(const Triple& c, double s, const ThermoParams& params);
double chemical_potential(int i, const StatePoint& p, const ThermoParams& params);
double affinity(const StatePoint& p, const ThermoParams& params);
double pressure(int i, const StatePoint& p, const ThermoParams& params);

double equilibrium_constant(double theta, const ThermoParams& params);
/// Per-species coefficients, k_c = (k_A^c, k_B^c, k_C^c) and likewise k_theta.
double equilibrium_constant(double theta, const Triple& k_c, const Triple& k_theta);

double rate_mass_action(const StatePoint& p, const ThermoParams& params);
double rate_linear_response(const StatePoint& p, const ThermoParams& params);
double rate_affinity_form(const StatePoint& p, const ThermoParams& params);
double rate(const StatePoint& p, const ThermoParams& params, RateConvention convention);

/// k^c Σ σ_j z_j / c̃_j - k^θ ω / θ̃
double linearized_rate(const Triple& z, double omega, const EquilibriumState& eq,
                       const ThermoParams& params);

enum class DissipationForm { general, quadratic };

/// general: η₁ R ln(η₂ R + 1); quadratic: η₁ R². Throws Error(physics) when the
/// logarithm argument is not positive.
double dissipation_reaction(double R, double eta1, double eta2, DissipationForm form);

/// |δF/δR + 𝒟(R)/R| with R from the convention, where δF/δR = -affinity.
/// Pairs the quadratic form (η = θ) with the log-linear conventions and the
/// general form (η₁ = θ, η₂ = 1) with mass action.
double virtual_work_residual(const StatePoint& p, const ThermoParams& params,
                             RateConvention convention);

EquilibriumState find_equilibrium(const Triple& c_tilde, const ThermoParams& params,
                                  RateConvention convention = RateConvention::affinity_form);
EquilibriumState scale_equilibrium(const EquilibriumState& eq, double lambda,
                                   const ThermoParams& params);

struct IdentityReport {
  double temperature_rel_err = 0.0;        // |∂_s e₁ - θ| / |θ|
  Triple potential_rel_err{0.0, 0.0, 0.0};  // |∂_{c_i} e₁ - ψ_{c_i}| / |ψ_{c_i}|
  double max_rel_err() const;
};

/// Central differences through temperature_from_entropy with relative step.
/// Throws std::invalid_argument for steps outside (0, 1e-2].
IdentityReport verify_thermo_identities(const StatePoint& p, const ThermoParams& params,
                                 double rel_step = 1e-5);

// ------------------------------------------------------------ field level

using Vec = std::vector<Field>;

Field rate_field(const std::array<Field, 3>& c, const Field& theta,
                 const ThermoParams& params, RateConvention convention);

/// u_i = -k^c ∇(c_i θ) / η_i
Vec darcy_velocity(int i, const Field& c_i, const Field& theta, const ThermoParams& params);
/// q = -κ∇θ
Vec heat_flux(const Field& theta, const ThermoParams& params);
/// j = q / θ
Vec entropy_flux(const Field& theta, const ThermoParams& params);

/// L² norm of ∇P_i - (c_i ∇ψ_{c_i} + s_i ∇θ) summed over axes.
double pressure_identity_residual(int i, const Field& c_i, const Field& theta,
                                  const ThermoParams& params);

struct EntropyProduction {
  Field delta;
  /// Σ_i (σ_i R + η_i)|u_i|² ≥ 0 at every node.
  bool constraint_ok = true;
  std::size_t first_violation = 0;
};

/// Δ = (1/θ)[Σ ν|∇u_i|² + Σ (σ_i R + η_i)|u_i|² + Σ μ_i σ_i R + κ|∇θ|²/θ].
EntropyProduction entropy_production(const std::array<Field, 3>& c, const Field& theta,
                                     const std::array<Vec, 3>& u, const Field& R,
                                     const ThermoParams& params);

}  // namespace rdt::thermo
