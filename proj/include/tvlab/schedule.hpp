#pragma once

#include <cstdint>
#include <vector>

#include "tvlab/errors.hpp"

namespace tvlab {

// Shrinking-radius schedule driving every estimator: the delta/rho/epsilon quantifiers of
// the characterization constants are swept along `radii`. `relaxation_scale * radius` is
// the per-radius slack for the relaxed equality/cone-membership constraints.
struct RadiusSchedule {
  std::vector<double> radii;
  int samples_per_radius = 2000;
  double relaxation_scale = 0.125;
  std::uint64_t seed = 0;

  double relaxation(std::size_t k) const { return relaxation_scale * radii.at(k); }

  void validate() const {
    if (radii.empty()) fail(Err::BadArgument, "schedule has no radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > 0)) fail(Err::BadArgument, "schedule radii must be positive");
      if (i > 0 && !(radii[i] < radii[i - 1]))
        fail(Err::BadArgument, "schedule radii must be strictly decreasing");
    }
    if (samples_per_radius < 1) fail(Err::BadArgument, "samples_per_radius must be >= 1");
    if (!(relaxation_scale > 0)) fail(Err::BadArgument, "relaxation_scale must be > 0");
  }

  static RadiusSchedule geometric(double delta0, double factor, int count, int samples,
                                  std::uint64_t seed) {
    if (!(delta0 > 0) || !(factor > 0) || !(factor < 1) || count < 1)
      fail(Err::BadArgument, "geometric schedule requires delta0 > 0, 0 < factor < 1, count >= 1");
    RadiusSchedule s;
    double r = delta0;
    for (int k = 0; k < count; ++k, r *= factor) s.radii.push_back(r);
    s.samples_per_radius = samples;
    s.seed = seed;
    return s;
  }
};

}  // namespace tvlab
