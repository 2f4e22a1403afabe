#pragma once

#include "rdt/grid.hpp"

namespace rdt {

/// Forward real-to-complex transform, unnormalized:
///   û(ξ) = Σ_x u(x) e^{-i ξ·x}.
SpectralField transform(const Field& u);

/// Inverse complex-to-real transform, carries the 1/n^d factor.
Field inverse(const SpectralField& u_hat);

}  // namespace rdt
