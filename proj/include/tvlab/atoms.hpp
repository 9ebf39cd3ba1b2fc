#pragma once

#include <cstdint>
#include <optional>

#include "tvlab/normal_fan.hpp"
#include "tvlab/scene.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

// The atom of every dual-constant estimator and cone sampler: a configuration
// (a, b, x, x1*, x2*) with its diagnostics. x1s/x2s hold the minimizing dual pair chosen
// by whichever estimator consumed the atom.
struct NormalPairSample {
  Vec a, b, x;
  Vec x1s, x2s;
  double ratio = 0.0;       // |x-a| / |x-b|
  double align1 = 0.0;      // <x1s, x-a> / (|x1s| |x-a|)
  double align2 = 0.0;
  double cone_residual1 = 0.0;  // dist(x1s/|x1s| ish, N_A(a)) measured on the unit direction
  double cone_residual2 = 0.0;

  // implementation payload
  NormalFan fan_a, fan_b;
  Vec u1, u2;               // (x-a)/|x-a|, (x-b)/|x-b|
  double norm_xa = 0.0, norm_xb = 0.0;
};

// Draw one atom near xbar at scale delta. Structured modes launch along a proximal
// direction from one set and land on the other via the projector, so the ratio is ~1 and
// both alignments are exact; the free mode draws everything independently. Deterministic
// in (scene, delta, seed, radius_index, sample_index).
std::optional<NormalPairSample> sample_pair_atom(const Scene& scene, double delta,
                                                 std::uint64_t seed, int radius_index,
                                                 std::int64_t sample_index);

// Same atom with x replaced by its perpendicular-bisector foot, so |x-a| = |x-b| exactly
// (the restricted/equidistant family). nullopt when the foot leaves B_delta(xbar).
std::optional<NormalPairSample> sample_equidistant_atom(const Scene& scene, double delta,
                                                        std::uint64_t seed, int radius_index,
                                                        std::int64_t sample_index);

}  // namespace tvlab
