#include "tvlab/product_distance.hpp"

#include <algorithm>
#include <cmath>

#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/rng.hpp"

namespace tvlab {

namespace {

double trunc_dist(const SetSpec& s, const Vec& c, double lam, const Vec& y) {
  if (std::isinf(lam)) return distance(s, y);
  return distance_truncated(s, c, lam, y);
}

}  // namespace

double product_diag_distance(const SetSpec& A, const Vec& a, double lam_a, const SetSpec& B,
                             const Vec& b, double lam_b, const Vec& x, double rho,
                             std::uint64_t seed) {
  if (!(rho > 0)) fail(Err::BadArgument, "product_diag_distance: rho must be > 0");
  if (!(lam_a > 0) || !(lam_b > 0))
    fail(Err::BadArgument, "product_diag_distance: truncation radii must be > 0");

  // emptiness of a truncated factor makes the objective identically +inf
  if (trunc_dist(A, a, lam_a, x) == kEmptySentinel ||
      trunc_dist(B, b, lam_b, x) == kEmptySentinel)
    return kEmptySentinel;

  auto clip_ball = [&](const Vec& y) {
    Vec d = sub(y, x);
    double n = norm(d);
    if (n <= rho) return y;
    return axpy(x, rho / n, d);
  };

  struct Eval {
    double f;
    Vec grad_dir;  // unit subgradient of the active branch (zero inside both sets)
  };
  auto eval = [&](const Vec& y) -> Eval {
    double da = trunc_dist(A, a, lam_a, y);
    double db = trunc_dist(B, b, lam_b, y);
    Eval e;
    e.f = std::max(da, db);
    e.grad_dir = zero_vec(y.size());
    if (e.f > 1e-14) {
      // direction away from the nearest point of the active branch
      const SetSpec& active = (da >= db) ? A : B;
      Vec p = project_one(active, y);
      Vec g = sub(y, p);
      double gn = norm(g);
      if (gn > 1e-14) e.grad_dir = scale(g, 1.0 / gn);
    }
    return e;
  };

  Halton dirs(mix_seed(seed, 0xd1f5ULL));
  const std::size_t n = x.size();

  std::vector<Vec> starts = {x, clip_ball(axpy(x, 0.5, sub(a, x))), clip_ball(axpy(x, 0.5, sub(b, x)))};
  for (int s = 0; s < 3; ++s) starts.push_back(axpy(x, 0.9 * rho, dirs.direction(100 + s, n)));

  double best = kEmptySentinel;
  Vec best_y = x;
  for (const auto& start : starts) {
    Vec y = start;
    Eval e = eval(y);
    // subgradient phase
    for (int j = 0; j < 30 && e.f > 1e-14; ++j) {
      double step = rho / static_cast<double>(j + 2);
      Vec cand = clip_ball(axpy(y, -step, e.grad_dir));
      Eval ce = eval(cand);
      if (ce.f < e.f) {
        y = cand;
        e = ce;
      }
    }
    if (e.f < best) {
      best = e.f;
      best_y = y;
    }
  }

  // pattern polish from the overall best point: axes plus a fixed low-discrepancy fan
  std::vector<Vec> pattern;
  for (std::size_t i = 0; i < n; ++i) {
    pattern.push_back(unit_axis(n, i));
    pattern.push_back(scale(unit_axis(n, i), -1.0));
  }
  for (int s = 0; s < 8; ++s) pattern.push_back(dirs.direction(200 + s, n));

  Vec y = best_y;
  double fy = best;
  double step = 0.5 * rho;
  while (step > 1e-8 * rho) {
    bool improved = false;
    for (const auto& d : pattern) {
      Vec cand = clip_ball(axpy(y, step, d));
      double fc = eval(cand).f;
      if (fc < fy - 1e-16) {
        y = cand;
        fy = fc;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::min(best, fy);
}

}  // namespace tvlab
