#include "tvlab/normal_fan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/sampling.hpp"

namespace tvlab {

namespace {

constexpr double kBoundaryTol = 1e-9;

std::vector<Vec> orthonormal_complement_of(const std::vector<Vec>& span, std::size_t n) {
  std::vector<Vec> basis = span;
  std::vector<Vec> comp;
  for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
    Vec cand = unit_axis(n, i);
    for (const auto& b : basis) cand = axpy(cand, -dot(cand, b), b);
    double l = norm(cand);
    if (l > 1e-9) {
      cand = scale(cand, 1.0 / l);
      basis.push_back(cand);
      comp.push_back(cand);
    }
  }
  return comp;
}

NormalFan subspace_fan(Vec basepoint, std::vector<Vec> basis) {
  NormalFan fan;
  fan.basepoint = std::move(basepoint);
  for (const auto& b : basis) {
    fan.generators.push_back(b);
    fan.generators.push_back(scale(b, -1.0));
  }
  fan.subspace_basis = std::move(basis);
  return fan;
}

NormalFan ray_fan(Vec basepoint, Vec g) {
  NormalFan fan;
  fan.basepoint = std::move(basepoint);
  fan.generators.push_back(normalized(g));
  return fan;
}

NormalFan zero_fan(Vec basepoint) {
  NormalFan fan;
  fan.basepoint = std::move(basepoint);
  return fan;
}

// small nonnegative least squares: min |G l - v|, l >= 0 (Lawson-Hanson active set)
std::vector<double> nnls(const std::vector<Vec>& gens, const Vec& v) {
  const std::size_t m = gens.size();
  std::vector<double> lam(m, 0.0);
  std::vector<bool> active(m, false);
  Vec resid = v;
  for (int outer = 0; outer < 3 * static_cast<int>(m) + 10; ++outer) {
    // most positive gradient among inactive columns
    int pick = -1;
    double bestw = 1e-12 * (1.0 + norm(v));
    for (std::size_t j = 0; j < m; ++j) {
      if (active[j]) continue;
      double w = dot(gens[j], resid);
      if (w > bestw) {
        bestw = w;
        pick = static_cast<int>(j);
      }
    }
    if (pick < 0) break;
    active[pick] = true;
    // inner loop: unconstrained LS on the active set, backtrack on negative coeffs
    for (int inner = 0; inner < 3 * static_cast<int>(m) + 10; ++inner) {
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < m; ++j)
        if (active[j]) idx.push_back(j);
      const std::size_t k = idx.size();
      std::vector<std::vector<double>> G(k, std::vector<double>(k));
      std::vector<double> rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) G[i][j] = dot(gens[idx[i]], gens[idx[j]]);
        rhs[i] = dot(gens[idx[i]], v);
      }
      // ridge for numerically dependent generators
      for (std::size_t i = 0; i < k; ++i) G[i][i] += 1e-13;
      std::vector<std::vector<double>> Gc = G;
      std::vector<double> z = rhs;
      // gaussian elimination
      bool ok = true;
      for (std::size_t col = 0; col < k && ok; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
          if (std::abs(Gc[r][col]) > std::abs(Gc[piv][col])) piv = r;
        if (std::abs(Gc[piv][col]) < 1e-14) {
          ok = false;
          break;
        }
        std::swap(Gc[piv], Gc[col]);
        std::swap(z[piv], z[col]);
        for (std::size_t r = 0; r < k; ++r) {
          if (r == col) continue;
          double f = Gc[r][col] / Gc[col][col];
          for (std::size_t c = col; c < k; ++c) Gc[r][c] -= f * Gc[col][c];
          z[r] -= f * z[col];
        }
      }
      if (!ok) {
        active[pick] = false;
        break;
      }
      for (std::size_t i = 0; i < k; ++i) z[i] /= Gc[i][i];
      bool all_pos = true;
      for (std::size_t i = 0; i < k; ++i)
        if (z[i] <= 0) all_pos = false;
      if (all_pos) {
        std::fill(lam.begin(), lam.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) lam[idx[i]] = z[i];
        break;
      }
      // step toward z until the first coefficient hits zero
      double alpha = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (z[i] <= 0) {
          double denom = lam[idx[i]] - z[i];
          if (denom > 0) alpha = std::min(alpha, lam[idx[i]] / denom);
        }
      }
      for (std::size_t i = 0; i < k; ++i) lam[idx[i]] += alpha * (z[i] - lam[idx[i]]);
      for (std::size_t i = 0; i < k; ++i)
        if (lam[idx[i]] <= 1e-15) active[idx[i]] = false;
    }
    resid = v;
    for (std::size_t j = 0; j < m; ++j)
      if (lam[j] > 0) resid = axpy(resid, -lam[j], gens[j]);
  }
  return lam;
}

NormalFan primitive_fan(const SetSpec& s, const Vec& a);

// union / intersection fans: gather candidate generators from active parts and keep the
// directions certified by inverse projections on the composite set
NormalFan filtered_fan(const SetSpec& s, const Vec& a, const std::vector<const SetSpec*>& parts) {
  std::vector<Vec> cand;
  bool any_subspace = false;
  std::vector<Vec> sub_basis;
  int active_parts = 0;
  for (const auto* p : parts) {
    if (!contains(*p, a)) continue;
    ++active_parts;
    NormalFan f = primitive_fan(*p, a);
    for (auto& g : f.generators) cand.push_back(std::move(g));
    if (f.is_subspace()) {
      any_subspace = true;
      sub_basis = f.subspace_basis;
    }
  }
  NormalFan fan;
  fan.basepoint = a;
  fan.exact = false;
  bool all_kept = true;
  for (auto& g : cand) {
    if (proximal_certificate(s, a, g))
      fan.generators.push_back(std::move(g));
    else
      all_kept = false;
  }
  // single active branch whose whole fan survived keeps its structure
  if (active_parts == 1 && all_kept && any_subspace) fan.subspace_basis = std::move(sub_basis);
  std::sort(fan.generators.begin(), fan.generators.end(), lex_less);
  return fan;
}

NormalFan primitive_fan(const SetSpec& s, const Vec& a) {
  const double sc = 1.0 + norm(a);
  return std::visit(
      [&](const auto& node) -> NormalFan {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          if (std::abs(dot(node.normal, a) - node.offset) <= kBoundaryTol * sc)
            return ray_fan(a, node.normal);
          return zero_fan(a);
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          auto comp = orthonormal_complement_of(node.tangent, a.size());
          if (comp.empty()) return zero_fan(a);
          return subspace_fan(a, std::move(comp));
        } else if constexpr (std::is_same_v<T, Ball>) {
          Vec d = sub(a, node.center);
          if (std::abs(norm(d) - node.radius) <= kBoundaryTol * sc)
            return ray_fan(a, d);
          return zero_fan(a);
        } else if constexpr (std::is_same_v<T, Sphere>) {
          Vec d = sub(a, node.center);
          return subspace_fan(a, {normalized(d)});
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          std::vector<Vec> act;
          for (const auto& f : node.faces)
            if (std::abs(dot(f.normal, a) - f.offset) <= kBoundaryTol * sc)
              act.push_back(f.normal);
          if (act.empty()) return zero_fan(a);
          if (act.size() == 1) return ray_fan(a, act.front());
          NormalFan fan;
          fan.basepoint = a;
          fan.generators = std::move(act);
          std::sort(fan.generators.begin(), fan.generators.end(), lex_less);
          return fan;
        } else if constexpr (std::is_same_v<T, Region>) {
          double t = a[0] - node.vertex[0];
          Vec n = normalized(Vec{2.0 * node.coeff * t, -1.0});
          switch (node.kind) {
            case Region::Kind::Parabola:
              return subspace_fan(a, {n});
            case Region::Kind::ParabolaEpigraph: {
              double gap = (a[1] - node.vertex[1]) - node.coeff * t * t;
              if (gap > kBoundaryTol * sc) return zero_fan(a);  // interior
              return ray_fan(a, n);
            }
            case Region::Kind::ParabolaHypograph: {
              double gap = node.coeff * t * t - (a[1] - node.vertex[1]);
              if (gap > kBoundaryTol * sc) return zero_fan(a);
              return ray_fan(a, scale(n, -1.0));
            }
          }
          return zero_fan(a);
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          std::vector<const SetSpec*> parts;
          for (const auto& p : node.parts) parts.push_back(&p);
          return filtered_fan(s, a, parts);
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          std::vector<const SetSpec*> parts;
          for (const auto& p : node.parts) parts.push_back(&p);
          return filtered_fan(s, a, parts);
        }
      },
      s.node);
}

}  // namespace

bool proximal_certificate(const SetSpec& s, const Vec& a, const Vec& v) {
  const double sc = 1.0 + norm(a);
  double t = 1.0;
  for (int j = 0; j < 40; ++j, t *= 0.5) {
    Vec probe = axpy(a, t, normalized(v));
    for (const auto& p : project(s, probe))
      if (dist(p, a) <= 1e-9 * sc + 1e-9 * t) return true;
  }
  return false;
}

NormalFan proximal_normals(const SetSpec& s, const Vec& a) {
  if (static_cast<int>(a.size()) != s.dim()) fail(Err::DimensionMismatch, "proximal_normals");
  if (!contains(s, a))
    fail(Err::NotInSet, "proximal_normals: basepoint is not in the set (the empty normal-cone "
                        "convention for outside points is modeled as an error)");
  return primitive_fan(s, a);
}

NormalFan negate(const NormalFan& fan) {
  NormalFan out = fan;
  for (auto& g : out.generators) g = scale(g, -1.0);
  return out;
}

Vec cone_project(const NormalFan& fan, const Vec& v) {
  if (fan.is_zero()) return zero_vec(v.size());
  if (fan.is_subspace()) {
    Vec p = zero_vec(v.size());
    for (const auto& b : fan.subspace_basis) p = axpy(p, dot(v, b), b);
    return p;
  }
  if (fan.generators.size() == 1) {
    double c = std::max(0.0, dot(v, fan.generators[0]));
    return scale(fan.generators[0], c);
  }
  auto lam = nnls(fan.generators, v);
  Vec p = zero_vec(v.size());
  for (std::size_t j = 0; j < lam.size(); ++j)
    if (lam[j] > 0) p = axpy(p, lam[j], fan.generators[j]);
  return p;
}

double cone_distance(const NormalFan& fan, const Vec& v) { return dist(v, cone_project(fan, v)); }

double max_unit_dot(const NormalFan& fan, const Vec& v_hat) {
  if (fan.is_zero()) return -1.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : fan.generators) best = std::max(best, dot(g, v_hat));
  Vec p = cone_project(fan, v_hat);
  double pn = norm(p);
  if (pn > 1e-12) best = std::max(best, pn);
  return best;
}

namespace {

// minimize a*cos(phi) + b*sin(phi) over [0, phi_max]
double best_angle(double a, double b, double phi_max) {
  double best = 0.0;
  double fbest = a;  // phi = 0
  auto eval = [&](double phi) {
    double f = a * std::cos(phi) + b * std::sin(phi);
    if (f < fbest) {
      fbest = f;
      best = phi;
    }
  };
  eval(phi_max);
  double crit = std::atan2(b, a) + M_PI;  // minimizer of a cos + b sin on the circle
  if (crit >= 0 && crit <= phi_max) eval(crit);
  crit -= 2 * M_PI;
  if (crit >= 0 && crit <= phi_max) eval(crit);
  return best;
}

}  // namespace

std::optional<Vec> min_dot_direction(const NormalFan& fan, const Vec& u, double cap_cos,
                                     const Vec& c) {
  if (fan.is_zero()) return std::nullopt;
  Vec w = cone_project(fan, u);
  double wn = norm(w);
  if (wn < cap_cos || wn < 1e-14) return std::nullopt;  // cap misses the cone
  Vec w_hat = scale(w, 1.0 / wn);

  std::optional<Vec> best;
  double fbest = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& d) {
    if (dot(d, u) < cap_cos - 1e-12) return;
    double f = dot(d, c);
    if (f < fbest - 1e-15 || (!best && f < fbest)) {
      fbest = f;
      best = d;
    }
  };

  consider(w_hat);
  for (const auto& g : fan.generators) consider(g);

  if (fan.is_subspace()) {
    // rotate w_hat inside the subspace toward -c; <d(phi), u> = cos(phi) * |w|
    Vec cW = zero_vec(u.size());
    for (const auto& b : fan.subspace_basis) cW = axpy(cW, dot(c, b), b);
    Vec v = axpy(cW, -dot(cW, w_hat), w_hat);
    double vn = norm(v);
    if (vn > 1e-13) {
      Vec v_hat = scale(v, -1.0 / vn);
      double phi_max = std::acos(std::clamp(cap_cos / wn, -1.0, 1.0));
      double phi = best_angle(dot(w_hat, c), dot(v_hat, c), phi_max);
      Vec d = add(scale(w_hat, std::cos(phi)), scale(v_hat, std::sin(phi)));
      consider(normalized(d));
    }
  } else if (fan.generators.size() >= 2) {
    // scan the 2-generator faces
    for (std::size_t i = 0; i < fan.generators.size(); ++i) {
      for (std::size_t j = i + 1; j < fan.generators.size(); ++j) {
        for (int k = 0; k <= 16; ++k) {
          double sfrac = static_cast<double>(k) / 16.0;
          Vec d = add(scale(fan.generators[i], 1.0 - sfrac), scale(fan.generators[j], sfrac));
          double dn = norm(d);
          if (dn < 1e-12) continue;
          consider(scale(d, 1.0 / dn));
        }
      }
    }
  }
  return best;
}

FrechetResidual frechet_normal_residual(const SetSpec& s, const Vec& a, const Vec& v,
                                        double probe_radius, int probe_count,
                                        std::uint64_t seed) {
  if (probe_count <= 0) fail(Err::BadArgument, "frechet residual requires probe_count >= 1");
  if (norm(v) == 0) fail(Err::BadArgument, "frechet residual requires v != 0");
  if (!contains(s, a)) fail(Err::NotInSet, "frechet residual basepoint outside the set");
  auto pts = sample_set_points(s, a, probe_radius, probe_count, seed);
  FrechetResidual out;
  double sup = -std::numeric_limits<double>::infinity();
  for (const auto& x : pts.points) {
    double n = dist(x, a);
    if (n < 1e-13 * (1.0 + norm(a))) continue;
    sup = std::max(sup, dot(v, sub(x, a)) / n);
    ++out.points_used;
  }
  if (out.points_used == 0) {
    out.degenerate = true;
    return out;
  }
  out.value = std::max(0.0, sup);
  return out;
}

}  // namespace tvlab
