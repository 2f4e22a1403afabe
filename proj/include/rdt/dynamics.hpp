#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdt/grid.hpp"
#include "rdt/perturbation.hpp"
#include "rdt/thermo.hpp"

namespace rdt::dyn {

using thermo::RateConvention;
using thermo::ThermoParams;

struct ChemState {
  std::array<Field, 3> c;
  Field theta;

  static ChemState uniform(const GridSpec& grid, const thermo::EquilibriumState& eq) {
    return {{Field(grid, eq.c_tilde[0]), Field(grid, eq.c_tilde[1]), Field(grid, eq.c_tilde[2])},
            Field(grid, eq.theta_tilde)};
  }
  const GridSpec& grid() const { return theta.grid(); }
  const Field& component(int i) const { return i < 3 ? c[i] : theta; }
  Field& component(int i) { return i < 3 ? c[i] : theta; }
};

/// condensed: the full reaction-diffusion-temperature system in (c_i, θ).
/// perturbed: the regularized system with linearized rate in (z_i, ω).
enum class SystemModel { condensed, perturbed };

struct SolverConfig {
  double dt = 1e-2;
  double T = 1.0;
  RateConvention convention = RateConvention::affinity_form;
  bool dealias = true;
  int record_every = 1;
  SystemModel model = SystemModel::condensed;
  /// Sets the temperature diffusivity split (and the expansion point of the
  /// perturbed model). Defaults to the spatial means of the initial state.
  std::optional<thermo::EquilibriumState> reference;
};

/// Throws Error(input) on dt ≤ 0, T < dt, T/dt not an integer, record_every < 1.
int step_count(const SolverConfig& config);

/// -σ_i R + k^c ∇·(c_i ∇ln θ) per species (the k^c∆c_i part is excluded).
std::array<Field, 3> rhs_concentration(const ChemState& state, const ThermoParams& params,
                                       RateConvention convention = RateConvention::affinity_form);

/// ∂_tθ isolated from the temperature equation:
///   k^θ Σ∇c_i·∇θ / S + k^θ|∇θ|²/θ
///   + [κ∆θ + Σσ_i k^θ θ R + (k^c)² Σ((η_i-1)|∇(c_iθ)|²/(c_iθ) + ∆(c_iθ))] / (k^θ S),
/// with S = Σc_i.
Field rhs_temperature(const ChemState& state, const ThermoParams& params,
                      RateConvention convention = RateConvention::affinity_form);

/// Full right-hand side (∂_t z_A, ∂_t z_B, ∂_t z_C, ∂_t ω) of the perturbed
/// system, assembled directly from its defining equations.
std::array<Field, 4> perturbed_rhs(const PerturbationState& state, const ThermoParams& params);

/// Stiff part L and nonreactive remainder N of a system written as ∂_t u = L u + N(u),
/// with L diagonal and equal to a diffusivity times ∆ for each component.
struct SplitSystem {
  std::array<double, 4> diffusivity{};
  std::function<SpectralState(const SpectralState&)> nonlinear;
  /// Called on physical fields after every step; throws on positivity loss.
  std::function<void(const SpectralState&, double t)> check;
};

SplitSystem condensed_system(const ThermoParams& params, const SolverConfig& config,
                             const thermo::EquilibriumState& reference);
SplitSystem perturbed_system(const ThermoParams& params, const SolverConfig& config,
                             const thermo::EquilibriumState& eq);

/// Second-order exponential Runge-Kutta step: diffusion exact per mode,
/// remainder by a Heun-type predictor/corrector.
class Stepper {
 public:
  Stepper(SplitSystem system, const GridSpec& grid, double dt);
  SpectralState step(const SpectralState& u) const;
  /// L u + N(u).
  SpectralState time_derivative(const SpectralState& u) const;
  const SplitSystem& system() const { return system_; }

 private:
  SplitSystem system_;
  GridSpec grid_;
  double dt_;
  std::array<std::vector<double>, 4> decay_, phi1_, phi2_;
};

thermo::EquilibriumState mean_reference(const ChemState& state);

/// One step of the condensed system (config.model is ignored).
ChemState step(const ChemState& state, const SolverConfig& config, const ThermoParams& params);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ChemState> snapshots;
  std::vector<double> Z0, Z1, energy, entropy, min_delta, min_theta, min_c;
  /// Σ_i(σ_iR + η_i)|u_i|² < 0 somewhere at that snapshot.
  std::vector<unsigned char> constraint_violated;
  std::optional<std::string> failure;
};

/// Runs to T. The perturbed model expands around config.reference (required).
TrajectoryRecord integrate(const ChemState& state0, const SolverConfig& config,
                           const ThermoParams& params);

/// Perturbation trajectory kept in coefficient space with exact time
/// derivatives, sampled every step.
struct PerturbedTrajectory {
  std::vector<double> times;
  std::vector<SpectralState> states;
  std::vector<SpectralState> rates;
};

PerturbedTrajectory integrate_perturbed(const PerturbationState& state0,
                                        const SolverConfig& config,
                                        const ThermoParams& params);

struct DiagnosticsReport {
  double max_energy_drift_rate = 0.0;  // max_n |E_{n+1} - E_n| / Δt
  double relative_energy_drift = 0.0;  // max_n |E_n - E_0| / |E_0|
  double min_entropy_increment = 0.0;  // min_n (S_{n+1} - S_n), 0 for one sample
  double max_Z_drift = 0.0;
  double min_delta = 0.0;
  double min_theta = 0.0;
  double min_c = 0.0;
  bool constraint_ok = true;
  std::vector<std::string> violations;
};

/// Per-step drift and monotonicity defects; violations flagged against the
/// given tolerances with the offending time.
DiagnosticsReport diagnostics(const TrajectoryRecord& record, double entropy_tol = 1e-8,
                              double delta_tol = 1e-12);

void write_diagnostics_csv(std::ostream& os, const TrajectoryRecord& record);

struct ReactionConfig {
  double dt = 1e-3;
  double T = 10.0;
  RateConvention convention = RateConvention::affinity_form;
  int record_every = 1;
};

struct ReactionSeries {
  std::vector<double> t;
  std::vector<thermo::StatePoint> state;
  std::vector<double> Z0, Z1, R;
};

/// Spatially homogeneous reaction with dc_i/dt = -σ_i R and
/// dθ/dt = θ R Σσ_i / Σc_i, classical fourth-order Runge-Kutta.
ReactionSeries reaction_ode(const thermo::Triple& c0, double theta0, const ReactionConfig& config,
                            const ThermoParams& params);

}  // namespace rdt::dyn
