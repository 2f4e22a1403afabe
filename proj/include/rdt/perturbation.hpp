#pragma once

#include <array>

#include "rdt/fft.hpp"
#include "rdt/grid.hpp"
#include "rdt/thermo.hpp"

namespace rdt {

/// Deviations (z_A, z_B, z_C, ω) from a reference equilibrium.
struct PerturbationState {
  std::array<Field, 3> z;
  Field omega;
  thermo::EquilibriumState eq;

  static PerturbationState zero(const GridSpec& grid, const thermo::EquilibriumState& eq) {
    return {{Field(grid), Field(grid), Field(grid)}, Field(grid), eq};
  }
  const GridSpec& grid() const { return omega.grid(); }
  const Field& component(int i) const { return i < 3 ? z[i] : omega; }
  Field& component(int i) { return i < 3 ? z[i] : omega; }
};

/// Four coefficient arrays in the order (z_A, z_B, z_C, ω) or (c_A, c_B, c_C, θ).
using SpectralState = std::array<SpectralField, 4>;

inline SpectralState zero_spectral_state(const GridSpec& grid) {
  return {SpectralField(grid), SpectralField(grid), SpectralField(grid), SpectralField(grid)};
}

/// Transforms the four components of any state exposing component(i).
template <class State>
SpectralState transform_state(const State& s) {
  return {transform(s.component(0)), transform(s.component(1)), transform(s.component(2)),
          transform(s.component(3))};
}

inline SpectralState transform_state(const std::array<Field, 4>& f) {
  return {transform(f[0]), transform(f[1]), transform(f[2]), transform(f[3])};
}

/// Effective diffusivity assigned to the temperature:
///   (k^c)²/k^θ + κ/(k^θ Σc̃_i).
inline double temperature_diffusivity(const thermo::ThermoParams& p, double c_tilde_total) {
  return p.k_c * p.k_c / p.k_theta + p.kappa / (p.k_theta * c_tilde_total);
}

}  // namespace rdt
