#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

// Finitely generated model of the proximal normal cone at a point. When the cone is a
// linear subspace the orthonormal basis is kept alongside the +/- generators so the
// cap-constrained searches have a closed form.
struct NormalFan {
  Vec basepoint;
  std::vector<Vec> generators;      // unit generators; empty means the cone is {0}
  std::vector<Vec> subspace_basis;  // nonempty iff the cone is a linear subspace
  bool exact = true;

  bool is_zero() const { return generators.empty(); }
  bool is_subspace() const { return !subspace_basis.empty(); }
};

// Proximal normal cone oracle; throws NotInSet when a is not in the set. Exact for the
// primitive variants; union/intersection fans are filtered by the inverse-projection
// certificate and marked exact=false.
NormalFan proximal_normals(const SetSpec& s, const Vec& a);

// true when a ∈ project(s, a + t v) for some t > 0 (bisection over shrinking t)
bool proximal_certificate(const SetSpec& s, const Vec& a, const Vec& v);

// nearest point of the conic hull
Vec cone_project(const NormalFan& fan, const Vec& v);

double cone_distance(const NormalFan& fan, const Vec& v);

// max over unit d in the cone of <d, v_hat>; -1 for the zero cone
double max_unit_dot(const NormalFan& fan, const Vec& v_hat);

// minimize <d, c> over unit d in the cone with <d, u> >= cap_cos.
// nullopt when the cap misses the cone (or the cone is {0}).
std::optional<Vec> min_dot_direction(const NormalFan& fan, const Vec& u, double cap_cos,
                                     const Vec& c);

// negated cone (for -N_A(a) in the angle form)
NormalFan negate(const NormalFan& fan);

struct FrechetResidual {
  double value = 0.0;      // clip(limsup estimate, 0)
  bool degenerate = false; // no set points found near a at this probe scale
  int points_used = 0;
};

// empirical limsup of <v, x-a>/|x-a| over set points sampled in B_probe_radius(a)
FrechetResidual frechet_normal_residual(const SetSpec& s, const Vec& a, const Vec& v,
                                        double probe_radius, int probe_count,
                                        std::uint64_t seed = 0x5eedULL);

}  // namespace tvlab
