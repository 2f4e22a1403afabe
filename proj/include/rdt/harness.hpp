#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdt/littlewood_paley.hpp"
#include "rdt/perturbation.hpp"
#include "rdt/thermo.hpp"

namespace rdt::harness {

using thermo::ThermoParams;

struct GateResult {
  bool pass = false;
  double measured = 0.0;  // Σ_i ‖z_i0‖ + ‖ω0‖ in Ḃ^{d/2}_{2,1}
  double bound = 0.0;     // h⁴
  std::array<double, 4> norms{};
};

GateResult smallness_gate(const PerturbationState& data, double h, const lp::DyadicPartition& P);

/// f(x; x̃) = 1/(x̃ + x) - 1/x̃. Throws Error(physics) when x ≤ -x̃.
double f_helper(double x, double x_tilde);
/// g(x; x̃) = 1/(x̃ + x)² - 1/x̃². Throws Error(physics) when x ≤ -x̃.
double g_helper(double x, double x_tilde);

/// Concentration forcings F_i evaluated at one state.
std::array<Field, 3> forcing_F(const PerturbationState& state, const ThermoParams& params);
/// Temperature forcing G evaluated at one state.
Field forcing_G(const PerturbationState& state, const ThermoParams& params);

struct IterationConfig {
  double h = 0.1;
  int kmax = 12;
  double T = 1.0;
  double dt = 1.0 / 256.0;
  /// Converged when Σ‖δ‖_𝓑 ≤ tol · Σ‖X‖_𝓑.
  double tol = 1e-12;
  bool dealias = true;
  /// Assemble sums over species in reverse order (determinism probe).
  bool reverse_order = false;
  int divergence_window = 3;
};

/// Forcings (F_A, F_B, F_C, G) from coefficients, optionally 2/3-truncated.
SpectralState forcing(const SpectralState& x, const thermo::EquilibriumState& eq,
                      const ThermoParams& params, bool dealias, bool reverse_order = false);

/// An iterate on the uniform time grid, with its exact time derivative.
struct IterateSeries {
  std::vector<double> times;
  std::vector<SpectralState> values;
  std::vector<SpectralState> rates;
};

IterateSeries zero_series(const GridSpec& grid, const IterationConfig& config);

struct PicardOutput {
  IterateSeries next;
  /// Forcing of the previous iterate at every sample.
  std::vector<SpectralState> forcing;
};

/// Solves ∂_t z_i - k^c∆z_i = F_i(prev), ∂_tω - κ̃∆ω = G(prev) on [0, T] from
/// the fixed data.
PicardOutput picard_step(const IterateSeries& prev, const PerturbationState& data,
                         const IterationConfig& config, const ThermoParams& params);

/// ‖·‖_𝓑 of component i of a series.
double b_norm(const IterateSeries& s, int component, const lp::DyadicPartition& P);
/// Σ_i ‖a_i - b_i‖_𝓑 (times must agree).
double b_distance(const IterateSeries& a, const IterateSeries& b, const lp::DyadicPartition& P);
/// ‖F‖ in L̃¹_T(Ḃ^{d/2}_{2,1}) of component i of a forcing series.
double forcing_norm(const std::vector<double>& times, const std::vector<SpectralState>& f,
                    int component, const lp::DyadicPartition& P);

/// Σ_i ‖D_t X_i - RHS_i(X)‖ in L̃¹_T(Ḃ^{d/2}_{2,1}), D_t second-order finite
/// differences in time, RHS the full perturbed system.
double limit_residual(const IterateSeries& s, const thermo::EquilibriumState& eq,
                      const ThermoParams& params, const lp::DyadicPartition& P,
                      bool dealias);

struct IterationRow {
  int k = 0;
  std::array<double, 4> norm{};
  std::array<double, 4> dnorm{};
  std::optional<double> ratio;
  double norm_F = 0.0;  // Σ_i ‖F_i‖ of the forcing that produced this iterate
  double norm_G = 0.0;
  double residual = 0.0;
};

enum class IterationStatus { converged, diverged, exhausted };

struct IterationReport {
  std::vector<IterationRow> rows;
  IterationStatus status = IterationStatus::exhausted;
  bool est1_ok = true;  // every iterate norm ≤ h²
  bool est2_ok = true;  // every ratio ≤ 0.5 from k = 2
  double max_norm = 0.0;
  double max_ratio = 0.0;
  double max_forcing = 0.0;
  IterateSeries limit;
  std::string message;
};

/// The gate is not enforced here; callers decide whether to run ungated data.
IterationReport run_iteration(const PerturbationState& data, const IterationConfig& config,
                              const ThermoParams& params, bool with_residual = false);

void write_iteration_csv(std::ostream& os, const IterationReport& report);
std::string summary_line(const IterationReport& report, const GateResult& gate,
                         const IterationConfig& config);

struct StabilityReport {
  double determinism_distance = 0.0;
  double distance = 0.0;
  double delta_norm = 0.0;  // Σ_i ‖δ_i‖_{Ḃ^{d/2}_{2,1}}
  double ratio() const { return delta_norm > 0.0 ? distance / delta_norm : 0.0; }
};

/// (a) rerun with reversed assembly order, (b) rerun from data + delta.
StabilityReport uniqueness_stability(const PerturbationState& data, const PerturbationState& delta,
                                     const IterationConfig& config, const ThermoParams& params);

struct CrossValidation {
  double distance = 0.0;
  double limit_norm = 0.0;
};

/// Integrates the perturbed system with the time stepper from the same data
/// and compares against the Picard limit in the 𝓑 norm.
CrossValidation cross_validate(const IterateSeries& limit, const PerturbationState& data,
                               const IterationConfig& config, const ThermoParams& params);

/// cos(k·x) in every component, amplitudes proportional to weights and
/// scaled so that the gate measures exactly total_norm.
PerturbationState single_mode_data(const GridSpec& grid, const thermo::EquilibriumState& eq,
                                   std::array<int, 3> wavevector, std::array<double, 4> weights,
                                   double total_norm);

struct ReferenceProblem {
  GridSpec grid;
  ThermoParams params;
  thermo::EquilibriumState eq;
  IterationConfig config;
  PerturbationState data;
};

/// h = 0.1, d = 2, L = 2π, T = 1, equilibrium (100, 100, 100, 100e),
/// single-mode data at total norm h⁴/2.
ReferenceProblem reference_problem(int n = 64, double dt = 1.0 / 256.0);

}  // namespace rdt::harness
