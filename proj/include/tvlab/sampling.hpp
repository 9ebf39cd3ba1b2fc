#pragma once

#include <cstdint>
#include <vector>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

struct SampledPoints {
  std::vector<Vec> points;
  bool budget_exhausted = false;  // fewer than count points survived rejection
};

// Points of the set inside B_radius(center): quasi-random ambient draws pushed through the
// projector. Deterministic in (inputs, seed) and independent of thread scheduling.
SampledPoints sample_set_points(const SetSpec& s, const Vec& center, double radius, int count,
                                std::uint64_t seed);

}  // namespace tvlab
