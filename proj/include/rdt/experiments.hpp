#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "rdt/dynamics.hpp"
#include "rdt/grid.hpp"
#include "rdt/littlewood_paley.hpp"
#include "rdt/perturbation.hpp"

namespace rdt::exp {

/// Uniform in [-1, 1) from a seeded mt19937_64, independent of the standard
/// library's distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// Σ_{0 < |k| ≤ K} (a_k cos(k·x) + b_k sin(k·x)) with seeded coefficients,
/// evaluated at the nodes; identical function on every grid that resolves K.
/// Scaled to max |u| = amplitude.
Field random_bandlimited(const GridSpec& grid, int K, std::uint64_t seed, double amplitude);

/// cos(k·x) with integer wavevector k.
Field pure_mode(const GridSpec& grid, std::array<int, 3> k, double amplitude = 1.0);

/// ‖uv‖ / (‖u‖ ‖v‖) in Ḃ^{d/2}_{2,1} for a seeded pair.
double product_ratio(const GridSpec& grid, std::uint64_t seed);

enum class Nonlinearity { square, expm1 };

/// ‖f(u)‖ / (Q₀(‖u‖_∞) ‖u‖) in Ḃ^{d/2}_{2,1}, Q₀(m) = (1 + m) max_{|x|≤m}|f'(x)|.
double composition_ratio(const GridSpec& grid, std::uint64_t seed, Nonlinearity f);

/// [‖u‖_{L̃^∞} + ‖∂_t u‖_{L̃^1} + ‖∆u‖_{L̃^1}] / [‖u₀‖ + ‖f‖_{L̃^1}] at s = d/2
/// for ∂_t u - ∆u = f(t) with seeded u₀ and a forcing linear in time on [0, 1].
double max_regularity_ratio(const GridSpec& grid, std::uint64_t seed);

/// |N(2k) / N(k) - 1| with N the Ḃ^{d/2}_{2,1} norm and the doubled mode's
/// amplitude multiplied by 2^{-d/2}.
double scale_covariance_change(const GridSpec& grid, std::array<int, 3> k);

/// Random small perturbation of the canonical equilibrium (1, 1, 1, e) for the
/// condensed system; seeds 1, 2, 3 are the reference trajectories.
dyn::ChemState reference_perturbation(const GridSpec& grid, std::uint64_t seed,
                                      double amplitude = 0.05);

/// d = 2, n = 32, L = 2π; dt = 0.01, T = 1, every step recorded.
GridSpec reference_trajectory_grid();
dyn::SolverConfig reference_solver_config();
dyn::TrajectoryRecord reference_trajectory(std::uint64_t seed, const thermo::ThermoParams& params = {},
                                           thermo::RateConvention convention =
                                               thermo::RateConvention::affinity_form);

/// Largest relative step-to-step increase of perturbation_norm over snapshots
/// with t ≥ t_transient; ≤ 0 for monotone decay.
double max_relative_growth(const dyn::TrajectoryRecord& record, double t_transient);

/// Perturbation used for the stability constant: mode (2, 1, 0) in all four
/// components with equal weights.
PerturbationState stability_delta(const GridSpec& grid, const thermo::EquilibriumState& eq,
                                  double total_norm);

/// Σ_i ‖c_i - mean‖ + ‖θ - mean‖ in Ḃ^{d/2}_{2,1}.
double perturbation_norm(const dyn::ChemState& s, const lp::DyadicPartition& P);

}  // namespace rdt::exp
