#include "tvlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tvlab/errors.hpp"

namespace tvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_scale(const Vec& x) { return 1.0 + norm(x); }

// ---------------------------------------------------------------------------
// dense linear solve (partial pivoting); returns false when singular
bool solve_dense(std::vector<std::vector<double>>& M, std::vector<double>& rhs) {
  const std::size_t n = M.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-12) return false;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = M[r][col] / M[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= M[i][i];
  return true;
}

// ---------------------------------------------------------------------------
// primitive projectors

Vec project_halfspace(const HalfSpace& h, const Vec& x) {
  double excess = dot(h.normal, x) - h.offset;
  if (excess <= 0) return x;
  return axpy(x, -excess, h.normal);
}

Vec project_affine(const AffineSubspace& a, const Vec& x) {
  Vec p = a.basepoint;
  Vec d = sub(x, a.basepoint);
  for (const auto& t : a.tangent) p = axpy(p, dot(d, t), t);
  return p;
}

Vec project_ball(const Ball& b, const Vec& x) {
  Vec d = sub(x, b.center);
  double n = norm(d);
  if (n <= b.radius) return x;
  return axpy(b.center, b.radius / n, d);
}

std::vector<Vec> project_sphere(const Sphere& s, const Vec& x) {
  Vec d = sub(x, s.center);
  double n = norm(d);
  if (n < 1e-12 * (1.0 + s.radius)) {
    // every sphere point is nearest to the center; materialize the axis-aligned ones
    std::vector<Vec> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.push_back(axpy(s.center, -s.radius, unit_axis(x.size(), i)));
      out.push_back(axpy(s.center, s.radius, unit_axis(x.size(), i)));
    }
    return out;
  }
  return {axpy(s.center, s.radius / n, d)};
}

// real roots of t^3 + p t + q = 0
void depressed_cubic_roots(double p, double q, std::vector<double>& out) {
  out.clear();
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (disc > 0) {
    double r = std::sqrt(disc);
    out.push_back(std::cbrt(-0.5 * q + r) + std::cbrt(-0.5 * q - r));
  } else if (p == 0 && q == 0) {
    out.push_back(0.0);
  } else {
    double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
    if (m == 0) {
      out.push_back(0.0);
      return;
    }
    double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) out.push_back(m * std::cos((phi - 2.0 * M_PI * k) / 3.0));
  }
}

// nearest points on the curve {y = c t^2} (vertex coordinates) from (px, py)
std::vector<Vec> nearest_on_parabola(double c, double px, double py) {
  // stationarity: 2 c^2 t^3 + (1 - 2 c py) t - px = 0
  const double a3 = 2.0 * c * c;
  std::vector<double> roots;
  depressed_cubic_roots((1.0 - 2.0 * c * py) / a3, -px / a3, roots);
  // Newton polish
  for (double& t : roots) {
    for (int it = 0; it < 4; ++it) {
      double f = a3 * t * t * t + (1.0 - 2.0 * c * py) * t - px;
      double df = 3.0 * a3 * t * t + (1.0 - 2.0 * c * py);
      if (std::abs(df) < 1e-300) break;
      t -= f / df;
    }
  }
  double best = kInf;
  for (double t : roots) {
    double d2 = (t - px) * (t - px) + (c * t * t - py) * (c * t * t - py);
    best = std::min(best, d2);
  }
  std::vector<Vec> out;
  double scale = 1.0 + std::abs(px) + std::abs(py);
  for (double t : roots) {
    double d2 = (t - px) * (t - px) + (c * t * t - py) * (c * t * t - py);
    if (std::sqrt(d2) <= std::sqrt(best) + kTieTol * scale) out.push_back(Vec{t, c * t * t});
  }
  return out;
}

std::vector<Vec> project_region(const Region& r, const Vec& x) {
  if (x.size() != 2) fail(Err::DimensionMismatch, "region primitives live in R^2");
  const double px = x[0] - r.vertex[0];
  const double py = x[1] - r.vertex[1];
  const bool above = py >= r.coeff * px * px;
  if (r.kind == Region::Kind::ParabolaEpigraph && above) return {x};
  if (r.kind == Region::Kind::ParabolaHypograph && !above) return {x};
  std::vector<Vec> pts = nearest_on_parabola(r.coeff, px, py);
  for (auto& p : pts) {
    p[0] += r.vertex[0];
    p[1] += r.vertex[1];
  }
  return pts;
}

// ---------------------------------------------------------------------------
// linear systems (polyhedra, affine pieces, their intersections)

struct LinearSystem {
  std::vector<Vec> eq_n;
  std::vector<double> eq_r;
  std::vector<Vec> in_n;
  std::vector<double> in_r;
};

// orthonormal complement of span(tangent) in R^n
std::vector<Vec> orthonormal_complement(const std::vector<Vec>& tangent, std::size_t n) {
  std::vector<Vec> basis = tangent;
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

bool collect_linear(const SetSpec& s, LinearSystem& sys) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          sys.in_n.push_back(node.normal);
          sys.in_r.push_back(node.offset);
          return true;
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          for (const auto& f : node.faces) {
            sys.in_n.push_back(f.normal);
            sys.in_r.push_back(f.offset);
          }
          return true;
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          auto comp = orthonormal_complement(node.tangent, node.basepoint.size());
          for (const auto& c : comp) {
            sys.eq_n.push_back(c);
            sys.eq_r.push_back(dot(c, node.basepoint));
          }
          return true;
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          for (const auto& p : node.parts)
            if (!collect_linear(p, sys)) return false;
          return true;
        } else {
          return false;
        }
      },
      s.node);
}

bool is_convex(const SetSpec& s) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, HalfSpace> || std::is_same_v<T, Polyhedron> ||
                      std::is_same_v<T, AffineSubspace> || std::is_same_v<T, Ball>) {
          return true;
        } else if constexpr (std::is_same_v<T, Region>) {
          return node.kind == Region::Kind::ParabolaEpigraph;
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          for (const auto& p : node.parts)
            if (!is_convex(p)) return false;
          return true;
        } else {
          return false;
        }
      },
      s.node);
}

void flatten_intersection(const SetSpec& s, std::vector<const SetSpec*>& parts) {
  if (const auto* i = std::get_if<IntersectionSet>(&s.node)) {
    for (const auto& p : i->parts) flatten_intersection(p, parts);
  } else {
    parts.push_back(&s);
  }
}

// Dykstra's algorithm; exact (to tolerance) for intersections of convex sets
std::optional<Vec> dykstra(const std::vector<const SetSpec*>& parts, const Vec& x) {
  const std::size_t m = parts.size();
  Vec y = x;
  std::vector<Vec> incr(m, zero_vec(x.size()));
  const double scale = point_scale(x);
  for (int iter = 0; iter < 600; ++iter) {
    double moved = 0;
    for (std::size_t i = 0; i < m; ++i) {
      Vec z = add(y, incr[i]);
      Vec p = project_one(*parts[i], z);
      incr[i] = sub(z, p);
      moved += dist(y, p);
      y = p;
    }
    if (moved < 1e-13 * scale * static_cast<double>(m)) break;
  }
  for (const auto* p : parts)
    if (distance(*p, y) > 1e-7 * scale) return std::nullopt;
  return y;
}

// cyclic projections with polish; best-effort for nonconvex intersections
std::optional<Vec> cyclic_project(const std::vector<const SetSpec*>& parts, const Vec& x) {
  const double scale = point_scale(x);
  std::optional<Vec> best;
  double best_d = kInf;
  for (int restart = 0; restart < 3; ++restart) {
    Vec y = x;
    if (restart > 0) {
      // nudge the start toward one of the parts to escape limit cycles
      y = project_one(*parts[(restart - 1) % parts.size()], x);
    }
    for (int iter = 0; iter < 400; ++iter) {
      Vec prev = y;
      for (const auto* p : parts) y = project_one(*p, y);
      if (dist(prev, y) < 1e-14 * scale) break;
    }
    bool ok = true;
    for (const auto* p : parts)
      if (distance(*p, y) > 1e-8 * scale) ok = false;
    if (ok) {
      double d = dist(x, y);
      if (d < best_d) {
        best_d = d;
        best = y;
      }
    }
  }
  return best;
}

std::vector<Vec> project_intersection(const SetSpec& s, const Vec& x) {
  LinearSystem sys;
  if (collect_linear(s, sys)) {
    return {project_linear(sys.eq_n, sys.eq_r, sys.in_n, sys.in_r, x)};
  }
  std::vector<const SetSpec*> parts;
  flatten_intersection(s, parts);
  std::optional<Vec> p = is_convex(s) ? dykstra(parts, x) : cyclic_project(parts, x);
  if (!p) fail(Err::UnsupportedVariant, "intersection projector did not converge");
  return {*p};
}

void dedupe_sorted(std::vector<Vec>& pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vec> out;
  for (const auto& p : pts) {
    if (out.empty() || dist(out.back(), p) > tol) out.push_back(p);
  }
  pts = std::move(out);
}

}  // namespace

Vec project_linear(const std::vector<Vec>& eq_n, const std::vector<double>& eq_r,
                   const std::vector<Vec>& in_n, const std::vector<double>& in_r, const Vec& x) {
  const std::size_t n = x.size();
  const std::size_t m = in_n.size();
  const double scale = point_scale(x);

  // feasibility shortcut
  auto feasible = [&](const Vec& p) {
    for (std::size_t i = 0; i < eq_n.size(); ++i)
      if (std::abs(dot(eq_n[i], p) - eq_r[i]) > 1e-10 * scale) return false;
    for (std::size_t j = 0; j < m; ++j)
      if (dot(in_n[j], p) - in_r[j] > 1e-10 * scale) return false;
    return true;
  };

  std::optional<Vec> best;
  double best_d = kInf;

  // try active subsets of the inequalities (equalities always active)
  std::size_t max_active = n > eq_n.size() ? n - eq_n.size() : 0;
  max_active = std::min(max_active, m);
  std::vector<std::size_t> subset;

  auto try_subset = [&]() {
    std::vector<Vec> rows = eq_n;
    std::vector<double> rhs = eq_r;
    for (std::size_t j : subset) {
      rows.push_back(in_n[j]);
      rhs.push_back(in_r[j]);
    }
    const std::size_t k = rows.size();
    Vec p = x;
    std::vector<double> mu;
    if (k > 0) {
      std::vector<std::vector<double>> G(k, std::vector<double>(k));
      std::vector<double> g(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) G[i][j] = dot(rows[i], rows[j]);
        g[i] = dot(rows[i], x) - rhs[i];
      }
      if (!solve_dense(G, g)) return;
      mu = g;
      for (std::size_t i = 0; i < k; ++i) p = axpy(p, -mu[i], rows[i]);
    }
    // KKT: inequality multipliers nonnegative
    for (std::size_t i = 0; i < subset.size(); ++i)
      if (mu[eq_n.size() + i] < -1e-11) return;
    if (!feasible(p)) return;
    double d = dist(x, p);
    if (d < best_d - 1e-15 || (!best && d < best_d)) {
      best_d = d;
      best = p;
    }
  };

  // enumerate combinations of sizes 0..max_active
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t want) {
    if (want == 0) {
      try_subset();
      return;
    }
    for (std::size_t j = start; j + want <= m; ++j) {
      subset.push_back(j);
      rec(j + 1, want - 1);
      subset.pop_back();
    }
  };
  for (std::size_t size = 0; size <= max_active; ++size) rec(0, size);

  if (!best) fail(Err::BadArgument, "linear system projection found no feasible point");
  return *best;
}

std::vector<Vec> project(const SetSpec& s, const Vec& x) {
  if (static_cast<int>(x.size()) != s.dim())
    fail(Err::DimensionMismatch, "project: point dim " + std::to_string(x.size()) +
                                     " vs set dim " + std::to_string(s.dim()));
  if (!all_finite(x)) fail(Err::BadArgument, "project: point has non-finite entries");
  return std::visit(
      [&](const auto& node) -> std::vector<Vec> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return {project_halfspace(node, x)};
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          return {project_affine(node, x)};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {project_ball(node, x)};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return project_sphere(node, x);
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          std::vector<Vec> in_n;
          std::vector<double> in_r;
          for (const auto& f : node.faces) {
            in_n.push_back(f.normal);
            in_r.push_back(f.offset);
          }
          return {project_linear({}, {}, in_n, in_r, x)};
        } else if constexpr (std::is_same_v<T, Region>) {
          return project_region(node, x);
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          std::vector<Vec> cand;
          double best = kInf;
          for (const auto& part : node.parts) {
            for (auto& p : project(part, x)) {
              best = std::min(best, dist(x, p));
              cand.push_back(std::move(p));
            }
          }
          const double keep = best + kTieTol * point_scale(x);
          std::vector<Vec> out;
          for (auto& p : cand)
            if (dist(x, p) <= keep) out.push_back(std::move(p));
          dedupe_sorted(out, 1e-12 * point_scale(x));
          return out;
        } else if constexpr (std::is_same_v<T, IntersectionSet>) {
          return project_intersection(s, x);
        }
      },
      s.node);
}

Vec project_one(const SetSpec& s, const Vec& x) {
  auto pts = project(s, x);
  // project() never returns an empty list; ties are sorted lexicographically already
  // except for single-element fast paths
  auto it = std::min_element(pts.begin(), pts.end(), lex_less);
  return *it;
}

double distance(const SetSpec& s, const Vec& x) {
  double best = kInf;
  for (const auto& p : project(s, x)) best = std::min(best, dist(x, p));
  return best;
}

bool contains(const SetSpec& s, const Vec& x, double tol) { return distance(s, x) <= tol; }

double distance_truncated(const SetSpec& s, const Vec& ball_center, double lambda, const Vec& y) {
  if (lambda <= 0) fail(Err::BadArgument, "truncation radius must be positive");
  Vec p = project_one(s, y);
  if (dist(p, ball_center) <= lambda + 1e-12 * (1.0 + lambda)) return dist(y, p);
  // nearest set point escapes the ball: fall back to the intersection machinery
  SetSpec trunc = make_intersection({s, make_ball(ball_center, lambda)});
  try {
    return distance(trunc, y);
  } catch (const Error&) {
    return kInf;  // empty truncated set within the iteration budget
  }
}

}  // namespace tvlab
