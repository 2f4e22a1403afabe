#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "rdt/dynamics.hpp"
#include "rdt/grid.hpp"
#include "rdt/harness.hpp"
#include "rdt/thermo.hpp"

namespace rdt::config {

/// Initial data added to the equilibrium.
///   equilibrium: none
///   mode:        cos(k·x) in every component, weights, total critical norm
///   random:      band-limited, max |z_i| = amplitude · c̃_i
enum class InitKind { equilibrium, mode, random };

struct InitSpec {
  InitKind kind = InitKind::equilibrium;
  std::array<int, 3> wavevector{1, 1, 0};
  std::array<double, 4> weights{1.0, 0.5, 0.75, 1.0};
  /// Total Ḃ^{d/2}_{2,1} norm for mode data; defaults to h⁴/2.
  double norm = -1.0;
  double amplitude = 0.05;
  int band = 3;
};

struct RunConfig {
  GridSpec grid{2, 32, 6.283185307179586};
  thermo::ThermoParams params;
  thermo::Triple eq_c{1.0, 1.0, 1.0};
  double eq_scale = 1.0;
  dyn::SolverConfig solver;
  harness::IterationConfig iteration;
  InitSpec init;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

/// Raw `key = value` pairs; '#' starts a comment. Throws Error(input) on a
/// malformed line or a repeated key.
std::map<std::string, std::string> parse_pairs(std::istream& is, const std::string& origin);

/// Throws Error(input) for unknown keys or out-of-range values, naming the key.
RunConfig from_pairs(const std::map<std::string, std::string>& pairs);

/// Throws Error(input) naming the path when it cannot be opened.
RunConfig load(const std::string& path);

/// Reads a number; accepts `a/b` and a trailing `pi` factor (`2pi`, `pi/2`).
double parse_number(const std::string& text, const std::string& key);

/// Equilibrium selected by the configuration (scaled).
thermo::EquilibriumState equilibrium(const RunConfig& c);

/// Initial deviations from the equilibrium.
PerturbationState initial_perturbation(const RunConfig& c);

/// Canonical keys with their meaning, one per line.
const std::map<std::string, std::string>& documented_keys();

}  // namespace rdt::config
