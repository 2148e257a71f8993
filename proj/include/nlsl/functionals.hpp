#pragma once

#include "nlsl/core.hpp"
#include "nlsl/spectral.hpp"

namespace nlsl {

/// E = ½‖D¹u‖₂² + ∫ F(|u|) dx.
double energy(const RadialField& field, const ModelParams& params, const SpectralBasis& basis);

/// ∫ F(|u|) dx alone.
double potential_energy(const RadialField& field, const ModelParams& params);

/// (∫_{|x| ≤ R} |u|² dx)^{1/2}. The density is taken constant on the dual cells
/// of the grid, so the result is continuous and nondecreasing in R, and exact
/// for fields that are constant on the ball.
double mass_in_ball(const RadialField& field, double radius);

}  // namespace nlsl
