#pragma once

#include <array>
#include <span>
#include <vector>

#include "rdt/grid.hpp"

namespace rdt {

/// Per-mode tables for the stored half spectrum of a grid.
struct SpectralGeometry {
  std::vector<std::array<int, 3>> index;   // signed frequency indices
  std::vector<std::array<double, 3>> ik;   // odd-derivative symbol per axis (Nyquist zeroed)
  std::vector<double> k2;                  // |ξ|²
  std::vector<double> radius;              // |ξ|
  std::vector<double> multiplicity;        // 1 or 2 (conjugate partner not stored)
  std::vector<unsigned char> keep;         // 2/3-rule mask
};

/// Cached, thread-safe lookup.
const SpectralGeometry& geometry(const GridSpec& grid);

/// Parseval: torus L² norm computed from coefficients.
double l2_norm(const SpectralField& u_hat);
/// Σ_modes |û|² with conjugate multiplicity (equals N Σ_x |u|²).
double coefficient_energy(const SpectralField& u_hat);

SpectralField derivative(const SpectralField& u_hat, int axis);
SpectralField laplacian(const SpectralField& u_hat);
void dealias_inplace(SpectralField& u_hat);

std::vector<Field> gradient(const Field& u);
Field laplacian(const Field& u);
/// Throws std::invalid_argument if v.size() != dim or grids differ.
Field divergence(std::span<const Field> v);
/// 2/3-rule truncation.
Field dealias(const Field& u);

/// Exponential-integrator weights for a = ν|ξ|²Δt ≥ 0:
///   decay = e^{-a}, phi1 = (1 - e^{-a})/a, phi2 = (a - 1 + e^{-a})/a²,
///   psi = phi1 - phi2 (weight on the start-of-step forcing).
struct EtdWeights {
  double decay;
  double phi1;
  double phi2;
  double psi;
};
EtdWeights etd_weights(double a);

/// One step of ∂_t u - ν∆u = f with the forcing linear in time between f0
/// (start) and f1 (end). Exact when the forcing is constant.
SpectralField heat_propagate(const SpectralField& u0, double nu, const SpectralField& f0,
                             const SpectralField& f1, double dt);
SpectralField heat_propagate(const SpectralField& u0, double nu, double dt);

Field heat_propagate(const Field& u0, double nu, const Field& f0, const Field& f1,
                     double dt);
Field heat_propagate(const Field& u0, double nu, const Field& f, double dt);
Field heat_propagate(const Field& u0, double nu, double dt);

}  // namespace rdt
