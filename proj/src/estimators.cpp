#include "tvlab/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "tvlab/atoms.hpp"
#include "tvlab/constructions.hpp"
#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/normal_fan.hpp"
#include "tvlab/product_distance.hpp"
#include "tvlab/rng.hpp"
#include "tvlab/sampling.hpp"

namespace tvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snap_unit(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return v > 1.0 - 1e-12 ? 1.0 : v;
}

struct RadiusOutcome {
  double value = kInf;  // +inf marks "no feasible sample"
  std::int64_t feasible = 0;
};

// assemble the estimate from per-radius reductions
ConstantEstimate finish(ConstantKind kind, const RadiusSchedule& sched,
                        const std::vector<RadiusOutcome>& outs) {
  ConstantEstimate est;
  est.kind = kind;
  bool any_feasible = false;
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    PerRadiusValue prv;
    prv.radius = sched.radii[k];
    prv.feasible = outs[k].feasible;
    prv.value = outs[k].feasible > 0 ? snap_unit(outs[k].value) : 1.0;
    any_feasible = any_feasible || outs[k].feasible > 0;
    est.per_radius.push_back(prv);
  }
  est.empty_feasible = !any_feasible;
  est.extrapolated = est.per_radius.back().value;
  if (est.empty_feasible) est.extrapolated = 1.0;
  if (est.per_radius.size() >= 2) {
    const auto& v = est.per_radius;
    est.drift = std::abs(v[v.size() - 1].value - v[v.size() - 2].value);
  }
  return est;
}

// order-independent reduction: min over per-sample values (inf = infeasible sample)
RadiusOutcome reduce_min(const std::vector<double>& vals) {
  RadiusOutcome out;
  for (double v : vals) {
    if (v == kInf) continue;
    ++out.feasible;
    out.value = std::min(out.value, v);
  }
  return out;
}

// ----------------------------------------------------------------------------- str / tr

ConstantEstimate run_str(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  std::vector<RadiusOutcome> outs(sched.radii.size());
  const double sc = 1.0 + norm(scene.xbar);
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double delta = sched.radii[k];
    const Halton stream(mix_seed(sched.seed, 0x57aULL, k));
    std::vector<double> vals(sched.samples_per_radius, kInf);
    std::vector<int> errors(sched.samples_per_radius, 0);
    parallel_for(sched.samples_per_radius, exec, [&](std::int64_t i) {
      Vec x = stream.ball_point(static_cast<std::uint64_t>(i), scene.xbar, delta);
      double di;
      try {
        di = intersection_distance(scene, x);
      } catch (const Error&) {
        errors[i] = 1;
        return;
      }
      if (di <= 1e-12 * sc) return;  // x effectively in A ∩ B
      double ratio = std::max(distance(scene.A, x), distance(scene.B, x)) / di;
      vals[i] = std::clamp(ratio, 0.0, 1.0);
    });
    for (int e : errors)
      if (e)
        fail(Err::IntersectionUnavailable,
             "str: alternating-projection intersection fallback failed to certify a common "
             "point; provide an intersection oracle for this scene");
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::Str, sched, outs);
}

// dist(x, (A - t1) ∩ (B - t2)) via alternating projections on the translated pair;
// -1 signals "no common point found within budget" (the translation separates the sets)
double translated_intersection_distance(const Scene& scene, const Vec& x, const Vec& t1,
                                        const Vec& t2) {
  const double sc = 1.0 + norm(x);
  Vec y = x;
  for (int it = 0; it < 400; ++it) {
    Vec prev = y;
    y = sub(project_one(scene.A, add(y, t1)), t1);
    y = sub(project_one(scene.B, add(y, t2)), t2);
    if (dist(prev, y) < 1e-14 * sc) break;
  }
  if (distance(scene.A, add(y, t1)) > 1e-10 * sc || distance(scene.B, add(y, t2)) > 1e-10 * sc)
    return -1.0;
  return dist(x, y);
}

ConstantEstimate run_tr(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  std::vector<RadiusOutcome> outs(sched.radii.size());
  const double sc = 1.0 + norm(scene.xbar);
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double delta = sched.radii[k];
    const Halton xs(mix_seed(sched.seed, 0x7aULL, k));
    const Halton ts(mix_seed(sched.seed, 0x7bULL, k));
    std::vector<double> vals(sched.samples_per_radius, kInf);
    parallel_for(sched.samples_per_radius, exec, [&](std::int64_t i) {
      const auto u = static_cast<std::uint64_t>(i);
      Vec x = xs.ball_point(u, scene.xbar, delta);
      Vec t1 = ts.ball_point(2 * u, zero_vec(x.size()), delta);
      Vec t2 = ts.ball_point(2 * u + 1, zero_vec(x.size()), delta);
      double da = distance(scene.A, add(x, t1));
      double db = distance(scene.B, add(x, t2));
      double di = translated_intersection_distance(scene, x, t1, t2);
      if (di < 0) {
        vals[i] = 0.0;  // translated intersection empty within budget
        return;
      }
      if (di <= 1e-12 * sc) return;
      vals[i] = std::clamp(std::max(da, db) / di, 0.0, 1.0);
    });
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::Tr, sched, outs);
}

// ----------------------------------------------------------------------------- itr family

// min |t d1 + (1-t) d2| over cap-constrained cone directions; alternating linear
// minimization over the two caps plus direct generator-pair enumeration
double strict_pair_value(const NormalPairSample& atom, double cap_cos, Vec* x1s, Vec* x2s) {
  auto d1 = min_dot_direction(atom.fan_a, atom.u1, cap_cos, atom.u2);
  if (!d1) return kInf;
  auto d2 = min_dot_direction(atom.fan_b, atom.u2, cap_cos, *d1);
  if (!d2) return kInf;
  for (int round = 0; round < 4; ++round) {
    auto n1 = min_dot_direction(atom.fan_a, atom.u1, cap_cos, *d2);
    if (n1) d1 = n1;
    auto n2 = min_dot_direction(atom.fan_b, atom.u2, cap_cos, *d1);
    if (n2) d2 = n2;
  }
  double t = 0.5;
  double best = segment_min_norm(*d1, *d2, 0.0, 1.0, &t);
  Vec b1 = *d1, b2 = *d2;
  double bt = t;
  for (const auto& ga : atom.fan_a.generators) {
    if (dot(ga, atom.u1) < cap_cos) continue;
    for (const auto& gb : atom.fan_b.generators) {
      if (dot(gb, atom.u2) < cap_cos) continue;
      double tt;
      double v = segment_min_norm(ga, gb, 0.0, 1.0, &tt);
      if (v < best) {
        best = v;
        b1 = ga;
        b2 = gb;
        bt = tt;
      }
    }
  }
  if (x1s && x2s) {
    double tc = std::clamp(bt, 1e-9, 1.0 - 1e-9);
    *x1s = scale(b1, tc);
    *x2s = scale(b2, 1.0 - tc);
  }
  return best;
}

// exact-alignment value with relaxed cone membership: the split t is confined to the
// interval where t*res1 and (1-t)*res2 stay below the relaxation slack
double relaxed_pair_value(const Vec& u1, const Vec& u2, double res1, double res2, double rel,
                          double* t_out = nullptr) {
  double t_lo = res2 > 0 ? 1.0 - rel / res2 : 0.0;
  double t_hi = res1 > 0 ? rel / res1 : 1.0;
  t_lo = std::max(t_lo, 1e-9);
  t_hi = std::min(t_hi, 1.0 - 1e-9);
  if (t_lo > t_hi) return kInf;
  return segment_min_norm(u1, u2, t_lo, t_hi, t_out);
}

ConstantEstimate run_itr(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  std::vector<RadiusOutcome> outs(sched.radii.size());
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double delta = sched.radii[k];
    std::vector<double> vals(sched.samples_per_radius, kInf);
    parallel_for(sched.samples_per_radius, exec, [&](std::int64_t i) {
      auto atom = sample_pair_atom(scene, delta, sched.seed, static_cast<int>(k), i);
      if (!atom) return;
      if (!(atom->ratio > 1.0 - delta) || !(atom->ratio < 1.0 + delta)) return;
      vals[i] = strict_pair_value(*atom, 1.0 - delta, &atom->x1s, &atom->x2s);
    });
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::Itr, sched, outs);
}

ConstantEstimate run_itr_c(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  std::vector<RadiusOutcome> outs(sched.radii.size());
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double delta = sched.radii[k];
    const double rel = sched.relaxation(k);
    std::vector<double> vals(sched.samples_per_radius, kInf);
    parallel_for(sched.samples_per_radius, exec, [&](std::int64_t i) {
      auto atom = sample_equidistant_atom(scene, delta, sched.seed, static_cast<int>(k), i);
      if (!atom) return;
      double t;
      double v = relaxed_pair_value(atom->u1, atom->u2, atom->cone_residual1,
                                    atom->cone_residual2, rel, &t);
      vals[i] = v;
    });
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::ItrC, sched, outs);
}

ConstantEstimate run_itr_w(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  constexpr int kShrinkLevels = 4;
  constexpr int kInnerSamples = 12;
  std::vector<RadiusOutcome> outs(sched.radii.size());
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double rho = sched.radii[k];
    const double rel = sched.relaxation(k);
    const std::int64_t outer =
        std::max<std::int64_t>(16, sched.samples_per_radius / (kShrinkLevels * kInnerSamples / 2));
    std::vector<double> vals(outer, kInf);
    parallel_for(outer, exec, [&](std::int64_t i) {
      auto atom = sample_equidistant_atom(scene, rho, sched.seed, static_cast<int>(k), i);
      if (!atom) return;
      double sup_over_shrink = -kInf;
      for (int j = 0; j < kShrinkLevels; ++j) {
        const double eps = 0.5 * rho * std::pow(0.5, j);
        double inner_min = kInf;
        for (int m = 0; m < kInnerSamples; ++m) {
          double v;
          if (m == 0) {
            // degenerate inner configuration: primes collapse onto (a, b)
            v = relaxed_pair_value(atom->u1, atom->u2, atom->cone_residual1,
                                   atom->cone_residual2, rel);
          } else {
            const std::uint64_t s = mix_seed(sched.seed, 0x17bULL + k, i * 131 + j * 17 + m);
            Halton hh(s);
            Vec x1p = hh.ball_point(1, atom->a, eps * 0.999);
            double R = dist(atom->x, x1p);
            if (R < 1e-13) continue;
            Vec target = hh.ball_point(2, atom->b, eps * 0.999);
            Vec dir = sub(atom->x, target);
            double dn = norm(dir);
            if (dn < 1e-13) continue;
            Vec x2p = axpy(atom->x, -R / dn, dir);
            if (dist(x2p, atom->b) > eps) continue;
            // sampled set points a', b' carrying the relaxed cone constraints
            auto as = sample_set_points(scene.A, atom->a, eps, 1, mix_seed(s, 5));
            auto bs = sample_set_points(scene.B, atom->b, eps, 1, mix_seed(s, 6));
            const Vec& ap = as.points.empty() ? atom->a : as.points.front();
            const Vec& bp = bs.points.empty() ? atom->b : bs.points.front();
            NormalFan fa = as.points.empty() ? atom->fan_a : proximal_normals(scene.A, ap);
            NormalFan fb = bs.points.empty() ? atom->fan_b : proximal_normals(scene.B, bp);
            if (fa.is_zero() || fb.is_zero()) continue;
            Vec u1 = scale(sub(atom->x, x1p), 1.0 / R);
            Vec u2 = scale(sub(atom->x, x2p), 1.0 / R);
            v = relaxed_pair_value(u1, u2, cone_distance(fa, u1), cone_distance(fb, u2), rel);
          }
          inner_min = std::min(inner_min, v);
        }
        if (inner_min < kInf) sup_over_shrink = std::max(sup_over_shrink, inner_min);
      }
      if (sup_over_shrink > -kInf) vals[i] = sup_over_shrink;
    });
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::ItrW, sched, outs);
}

ConstantEstimate run_itr_p(const Scene& scene, const RadiusSchedule& sched, const Exec& exec) {
  constexpr int kAlphaGridSize = 64;
  constexpr int kRhoGridSize = 21;
  std::vector<RadiusOutcome> outs(sched.radii.size());
  const double sc = 1.0 + norm(scene.xbar);
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double eps = sched.radii[k];
    const std::int64_t triples = std::min<std::int64_t>(sched.samples_per_radius, 400);
    std::vector<double> vals(triples, kInf);
    parallel_for(triples, exec, [&](std::int64_t i) {
      auto atom = sample_equidistant_atom(scene, eps, sched.seed, static_cast<int>(k), i);
      if (!atom) return;
      auto alpha_at = [&](int idx) {
        return static_cast<double>(idx) / static_cast<double>(kAlphaGridSize - 1);
      };
      auto feasible = [&](double alpha) {
        const double lam_fac = alpha + 1.0 / std::sqrt(eps);
        for (int m = 0; m < kRhoGridSize; ++m) {
          const double rho = eps * std::pow(0.5, m + 1);
          if (rho < 1e-6 * eps) break;
          const double lam = lam_fac * rho;
          double F = product_diag_distance(scene.A, atom->a, lam, scene.B, atom->b, lam,
                                           atom->x, rho, mix_seed(sched.seed, k, i));
          if (F + alpha * rho <= atom->norm_xa + 1e-11 * sc) return true;
        }
        return false;
      };
      // alpha = 0 is always feasible (x' = x, endpoints a, b witness the distance)
      int lo = 0, hi = kAlphaGridSize - 1;
      if (feasible(alpha_at(hi))) {
        vals[i] = alpha_at(hi);
        return;
      }
      while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (feasible(alpha_at(mid)))
          lo = mid;
        else
          hi = mid;
      }
      vals[i] = alpha_at(lo);
    });
    outs[k] = reduce_min(vals);
  }
  return finish(ConstantKind::ItrP, sched, outs);
}

// angle form: largest threshold such that no sampled pair makes an angle below it with
// both N_B(b) and -N_A(a); reported as sin(angle) clamped to [0, 1]
ConstantEstimate run_angle_itr(const Scene& scene, const RadiusSchedule& sched,
                               const Exec& exec) {
  std::vector<RadiusOutcome> outs(sched.radii.size());
  for (std::size_t k = 0; k < sched.radii.size(); ++k) {
    const double delta = sched.radii[k];
    const Halton ha(mix_seed(sched.seed, 0xa4aULL, k));
    const Halton hb(mix_seed(sched.seed, 0xa4bULL, k));
    std::vector<double> vals(sched.samples_per_radius, kInf);
    parallel_for(sched.samples_per_radius, exec, [&](std::int64_t i) {
      const auto u = static_cast<std::uint64_t>(i);
      Vec a = project_one(scene.A, ha.ball_point(u, scene.xbar, delta));
      Vec b = project_one(scene.B, hb.ball_point(u, scene.xbar, delta));
      if (dist(a, scene.xbar) > delta || dist(b, scene.xbar) > delta) return;
      if (contains(scene.B, a) || contains(scene.A, b)) return;
      Vec v = sub(a, b);
      double vn = norm(v);
      if (vn < 1e-13) return;
      Vec v_hat = scale(v, 1.0 / vn);
      NormalFan fa = proximal_normals(scene.A, a);
      NormalFan fb = proximal_normals(scene.B, b);
      if (fa.is_zero() || fb.is_zero()) return;
      double theta_b = std::acos(std::clamp(max_unit_dot(fb, v_hat), -1.0, 1.0));
      double theta_a = std::acos(std::clamp(max_unit_dot(negate(fa), v_hat), -1.0, 1.0));
      vals[i] = std::max(theta_a, theta_b);
    });
    RadiusOutcome out = reduce_min(vals);
    if (out.feasible > 0) out.value = std::sin(std::min(out.value, 0.5 * M_PI));
    outs[k] = out;
  }
  return finish(ConstantKind::AngleItr, sched, outs);
}

}  // namespace

const char* kind_name(ConstantKind k) {
  switch (k) {
    case ConstantKind::Str: return "str";
    case ConstantKind::Tr: return "tr";
    case ConstantKind::Itr: return "itr";
    case ConstantKind::ItrW: return "itr_w";
    case ConstantKind::ItrC: return "itr_c";
    case ConstantKind::ItrP: return "itr_p";
    case ConstantKind::AngleItr: return "angle_itr";
  }
  return "?";
}

std::optional<ConstantKind> kind_from_name(const std::string& name) {
  for (ConstantKind k : all_constant_kinds())
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

double segment_min_norm(const Vec& d1, const Vec& d2, double t_lo, double t_hi, double* t_star) {
  Vec diff = sub(d1, d2);
  double den = norm2(diff);
  double t = den < 1e-30 ? t_lo : -dot(d2, diff) / den;
  t = std::clamp(t, t_lo, t_hi);
  if (t_star) *t_star = t;
  return norm(add(scale(d1, t), scale(d2, 1.0 - t)));
}

double intersection_distance(const Scene& scene, const Vec& x) {
  if (scene.intersection) return distance(*scene.intersection, x);
  const double sc = 1.0 + norm(x);
  Vec y = x;
  for (int it = 0; it < 1000; ++it) {
    Vec prev = y;
    y = project_one(scene.A, y);
    y = project_one(scene.B, y);
    if (dist(prev, y) < 1e-14 * sc) break;
  }
  if (distance(scene.A, y) > 1e-10 * sc || distance(scene.B, y) > 1e-10 * sc)
    fail(Err::IntersectionUnavailable,
         "alternating-projection fallback did not certify a common point of A and B");
  return dist(x, y);
}

ConstantEstimate estimate_constant(ConstantKind kind, const Scene& scene,
                                   const RadiusSchedule& sched, const Exec& exec) {
  sched.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ConstantEstimate est;
  switch (kind) {
    case ConstantKind::Str: est = run_str(scene, sched, exec); break;
    case ConstantKind::Tr: est = run_tr(scene, sched, exec); break;
    case ConstantKind::Itr: est = run_itr(scene, sched, exec); break;
    case ConstantKind::ItrW: est = run_itr_w(scene, sched, exec); break;
    case ConstantKind::ItrC: est = run_itr_c(scene, sched, exec); break;
    case ConstantKind::ItrP: est = run_itr_p(scene, sched, exec); break;
    case ConstantKind::AngleItr: est = run_angle_itr(scene, sched, exec); break;
  }
  est.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

ConstantEstimate estimate_str(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::Str, s, r, e);
}
ConstantEstimate estimate_tr(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::Tr, s, r, e);
}
ConstantEstimate estimate_itr(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::Itr, s, r, e);
}
ConstantEstimate estimate_itr_w(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::ItrW, s, r, e);
}
ConstantEstimate estimate_itr_c(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::ItrC, s, r, e);
}
ConstantEstimate estimate_itr_p(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::ItrP, s, r, e);
}
ConstantEstimate estimate_angle_itr(const Scene& s, const RadiusSchedule& r, const Exec& e) {
  return estimate_constant(ConstantKind::AngleItr, s, r, e);
}

}  // namespace tvlab
