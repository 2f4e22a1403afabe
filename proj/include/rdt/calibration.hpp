#pragma once

// Generated by tools/calibrate: observed maximum on seeds 1..50 (three
// reference trajectories for the dynamics constants) times 1.5.

#include <cstdint>

namespace rdt::calib {

inline constexpr std::uint64_t kFirstSeed = 1;
inline constexpr std::uint64_t kLastSeed = 50;
inline constexpr int kReferenceTrajectories = 3;
inline constexpr double kDecayTransient = 0.1;

/// ‖uv‖ ≤ C ‖u‖ ‖v‖ in Ḃ^{d/2}_{2,1} (observed 1.499221e-01)
inline constexpr double kProductLaw = 2.248832e-01;
/// f(x) = x², Q(m) = C (1 + m) 2m (observed 3.203791e-01)
inline constexpr double kCompositionSquare = 4.805687e-01;
/// f(x) = e^x - 1, Q(m) = C (1 + m) e^m (observed 6.753046e-01)
inline constexpr double kCompositionExpm1 = 1.012957e+00;
/// heat-equation estimate, s = d/2, ν = 1, T = 1 (observed 2.012627e+00)
inline constexpr double kMaxRegularity = 3.018940e+00;
/// max_k ‖F^k‖, ‖G^k‖ ≤ C h⁴ on the reference iteration (observed 7.641608e-04)
inline constexpr double kForcing = 1.146241e-03;
/// limit distance ≤ C ‖δ₀‖ on the reference iteration (observed 2.985790e+00)
inline constexpr double kStability = 4.478685e+00;
/// max_n |E_{n+1} - E_n| / Δt on the reference trajectories (observed 3.267618e-03)
inline constexpr double kEnergyDriftRate = 4.901427e-03;
/// largest relative step increase of the perturbation norm after t = 0.1 (observed -9.753708e-03)
inline constexpr double kDecayGrowth = 1.000000e-12;

}  // namespace rdt::calib
