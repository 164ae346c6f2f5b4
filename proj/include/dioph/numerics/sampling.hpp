#pragma once

#include "dioph/numerics/types.hpp"

#include <cstdint>
#include <vector>

namespace dioph {

// Halton points in [0,1)^dim under a seeded Cranley-Patterson rotation.
// Coordinates are exact rationals; the same (count, dim, seed) always gives the same points.
std::vector<RatVector> low_discrepancy_points(std::size_t count, std::size_t dim, std::uint64_t seed);

}  // namespace dioph
