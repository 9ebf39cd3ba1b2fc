#include "tvlab/sampling.hpp"

#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/rng.hpp"

namespace tvlab {

SampledPoints sample_set_points(const SetSpec& s, const Vec& center, double radius, int count,
                                std::uint64_t seed) {
  if (!(radius > 0)) fail(Err::BadArgument, "sample_set_points: radius must be > 0");
  if (count < 1) fail(Err::BadArgument, "sample_set_points: count must be >= 1");
  if (static_cast<int>(center.size()) != s.dim())
    fail(Err::DimensionMismatch, "sample_set_points");

  Halton stream(mix_seed(seed, 0x5a3c1e5ULL));
  SampledPoints out;
  const std::uint64_t budget = 24ULL * static_cast<std::uint64_t>(count);
  for (std::uint64_t i = 0; i < budget && out.points.size() < static_cast<std::size_t>(count);
       ++i) {
    Vec q = stream.cube_point(i, center, radius);
    for (const auto& p : project(s, q)) {
      if (dist(p, center) <= radius && out.points.size() < static_cast<std::size_t>(count))
        out.points.push_back(p);
    }
  }
  out.budget_exhausted = out.points.size() < static_cast<std::size_t>(count);
  return out;
}

}  // namespace tvlab
