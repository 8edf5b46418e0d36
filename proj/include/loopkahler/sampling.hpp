#pragma once

#include <random>
#include <string_view>

#include "loopkahler/fields.hpp"

namespace loopkahler {

/// Deterministic per-experiment seed derivation from one base seed.
std::uint64_t split_seed(std::uint64_t base, std::string_view tag);

/// Smooth random loop: each coordinate is a low-order trigonometric
/// polynomial in s, scaled to stay within `radius` of the chart origin.
Loop random_loop(const KahlerModel& m, const LoopGrid& grid, std::mt19937_64& rng,
                 double radius = 0.8, int max_harmonic = 2);

/// Random aligned tangent with smooth node dependence.
LoopTangent random_tangent(const Loop& g, std::mt19937_64& rng, double scale = 1.0);

/// Random analytic test field (constant / linear / harmonic mix) with exact
/// derivative callbacks.
LoopVectorField random_field(const KahlerModel& m, std::mt19937_64& rng);

}  // namespace loopkahler
