#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvlab/parallel.hpp"
#include "tvlab/scene.hpp"
#include "tvlab/schedule.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

enum class ConstantKind { Str, Tr, Itr, ItrW, ItrC, ItrP, AngleItr };

const char* kind_name(ConstantKind k);
std::optional<ConstantKind> kind_from_name(const std::string& name);
inline const std::vector<ConstantKind>& all_constant_kinds() {
  static const std::vector<ConstantKind> kinds = {
      ConstantKind::Str, ConstantKind::Tr,   ConstantKind::Itr,     ConstantKind::ItrW,
      ConstantKind::ItrC, ConstantKind::ItrP, ConstantKind::AngleItr};
  return kinds;
}

struct PerRadiusValue {
  double radius = 0.0;
  double value = 1.0;          // finite-sample upper bound of the per-radius infimum
  std::int64_t feasible = 0;   // feasible samples that contributed
};

struct ConstantEstimate {
  ConstantKind kind = ConstantKind::Str;
  std::vector<PerRadiusValue> per_radius;
  double extrapolated = 1.0;   // value at the smallest radius (empty-feasible => exactly 1)
  bool empty_feasible = false;
  double drift = 0.0;          // |last - previous| inter-radius drift, the uncertainty band
  double seconds = 0.0;
};

ConstantEstimate estimate_constant(ConstantKind kind, const Scene& scene,
                                   const RadiusSchedule& sched, const Exec& exec);

// spec-named entry points
ConstantEstimate estimate_str(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_tr(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_itr(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_itr_w(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_itr_c(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_itr_p(const Scene&, const RadiusSchedule&, const Exec& = Exec::serial());
ConstantEstimate estimate_angle_itr(const Scene&, const RadiusSchedule&,
                                    const Exec& = Exec::serial());

// dist(x, A ∩ B): the scene's oracle when present, otherwise the alternating-projection
// fallback (certified common point within 1e-10; heuristic upper bound in nonconvex scenes).
double intersection_distance(const Scene& scene, const Vec& x);

// min over t in [t_lo, t_hi] of |t d1 + (1-t) d2|; optimal t reported through t_star
double segment_min_norm(const Vec& d1, const Vec& d2, double t_lo, double t_hi,
                        double* t_star = nullptr);

}  // namespace tvlab
