#include "tvlab/constructions.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/normal_fan.hpp"
#include "tvlab/product_distance.hpp"
#include "tvlab/rng.hpp"
#include "tvlab/sampling.hpp"

namespace tvlab {

namespace {

constexpr double kStrictMargin = 1e-12;  // strict paper inequalities tested non-strictly

double chain_factor(double d) {
  return std::sqrt(2.0 * d) + 2.0 * std::sqrt((2.0 * d - d * d) / (4.0 - 6.0 * d + 3.0 * d * d));
}

// unit vector at angle acos(cos_target) from unit u, tilted toward the seed direction
Vec tilt_in_cap(const Vec& u, double cos_target, const Vec& seed_dir) {
  Vec w = axpy(seed_dir, -dot(seed_dir, u), u);
  double wn = norm(w);
  if (wn < 1e-12) return u;  // no usable orthogonal component
  double s = std::sqrt(std::max(0.0, 1.0 - cos_target * cos_target));
  return add(scale(u, cos_target), scale(w, s / wn));
}

}  // namespace

Vec bisector_foot(const Vec& a, const Vec& b, const Vec& x) {
  check_dim(a, b);
  check_dim(a, x);
  Vec ba = sub(b, a);
  double d2 = norm2(ba);
  if (d2 < 1e-24) fail(Err::BadArgument, "bisector_foot requires a != b");
  Vec m = scale(add(a, b), 0.5);
  double coef = dot(ba, sub(x, m)) / d2;
  return axpy(x, -coef, ba);
}

std::pair<Vec, Vec> rescale_normals(const Vec& a, const Vec& b, const Vec& xprime,
                                    const Vec& x1s, const Vec& x2s) {
  Vec da = sub(xprime, a);
  Vec db = sub(xprime, b);
  double na = norm(da), nb = norm(db);
  double sc = 1.0 + norm(xprime);
  if (na < 1e-15 * sc || nb < 1e-15 * sc)
    fail(Err::BadArgument, "rescale_normals requires xprime distinct from a and b");
  return {scale(da, norm(x1s) / na), scale(db, norm(x2s) / nb)};
}

double delta_prime_for(double beta, double alpha, double delta) {
  if (!(beta > 0) || !(beta < alpha) || !(beta < 1.0 / std::sqrt(2.0)) || !(delta > 0))
    fail(Err::BadArgument, "delta_prime_for requires 0 < beta < min(alpha, 1/sqrt(2)), delta > 0");
  const double bound1 = 0.5 - beta * beta;
  const double bound2 = std::min(delta, alpha - beta);
  auto ok = [&](double d) {
    if (!(d > 0) || d >= 1.0) return false;
    return 2.0 * (std::sqrt(d) + d) < bound1 && chain_factor(d) < bound2;
  };
  double hi = delta / 3.0;
  if (ok(hi)) return hi;
  double lo = 1e-15;
  if (!ok(lo)) fail(Err::BadArgument, "delta_prime_for: no feasible delta' above 1e-15");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::string ChainReport::to_json(int indent) const {
  nlohmann::json j;
  j["all_pass"] = all_pass;
  j["links"] = nlohmann::json::array();
  for (const auto& l : links)
    j["links"].push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs},
                          {"margin", l.rhs - l.lhs}, {"pass", l.pass}});
  return j.dump(indent);
}

ChainReport verify_construction_chain(const ConstructionInstance& inst) {
  const Vec &a = inst.a, &b = inst.b, &x = inst.x;
  const double d = inst.delta_prime;
  if (!(d > 0) || !(d < 1)) fail(Err::BadArgument, "delta' must lie in (0, 1)");
  const double nxa = dist(x, a), nxb = dist(x, b);
  const double sc = 1.0 + norm(x);
  if (nxa < 1e-14 * sc || nxb < 1e-14 * sc)
    fail(Err::BadArgument, "instance requires x distinct from a and b");
  if (dot(sub(x, a), sub(x, b)) > 0)
    fail(Err::BadArgument, "Case-2 instance requires <x-a, x-b> <= 0");
  const double ratio = nxa / nxb;
  if (!(ratio > 1.0 - d - 1e-12) || !(ratio < 1.0 + d + 1e-12))
    fail(Err::BadArgument, "instance ratio outside (1-d', 1+d')");
  const double n1 = norm(inst.x1s), n2 = norm(inst.x2s);
  if (n1 < 1e-15 || n2 < 1e-15 || std::abs(n1 + n2 - 1.0) > 1e-10)
    fail(Err::BadArgument, "dual pair must be nonzero with unit norm sum");
  const double al1 = dot(inst.x1s, sub(x, a)) / (n1 * nxa);
  const double al2 = dot(inst.x2s, sub(x, b)) / (n2 * nxb);
  if (!(al1 > 1.0 - d - 1e-12) || !(al2 > 1.0 - d - 1e-12))
    fail(Err::BadArgument, "alignment cosines must exceed 1 - d'");

  ChainReport rep;
  rep.m = scale(add(a, b), 0.5);
  rep.xprime = bisector_foot(a, b, x);
  auto [x1p, x2p] = rescale_normals(a, b, rep.xprime, inst.x1s, inst.x2s);
  rep.x1s_prime = x1p;
  rep.x2s_prime = x2p;

  auto link = [&](const std::string& name, double lhs, double rhs, double margin) {
    rep.links.push_back({name, lhs, rhs, lhs <= rhs + margin});
  };

  const Vec xp = rep.xprime;
  const double nxpa = dist(xp, a), nxpb = dist(xp, b);
  const double move2 = norm2(sub(x, xp));

  // identities of the foot
  link("equidistance |x'-a| = |x'-b|", std::abs(nxpa - nxpb), 0.0, 1e-10 * sc);
  link("orthogonality <x-x', x'-m> = 0", std::abs(dot(sub(x, xp), sub(xp, rep.m))), 0.0,
       1e-10 * sc * sc);

  // Step 1: |x-x'|^2 <= (2d'-d'^2)/(4(1-d')^2) min(|x-a|^2, |x-b|^2)
  const double step1_coef = (2.0 * d - d * d) / (4.0 * (1.0 - d) * (1.0 - d));
  link("step1 squared-foot-displacement bound", move2,
       step1_coef * std::min(nxa * nxa, nxb * nxb), kStrictMargin * sc * sc);

  // Step 2: |x'-a|^2 >= (4-6d'+3d'^2)/(2d'-d'^2) |x-x'|^2
  const double step2_coef = (4.0 - 6.0 * d + 3.0 * d * d) / (2.0 * d - d * d);
  link("step2 foot-to-a lower bound", step2_coef * move2, nxpa * nxpa,
       kStrictMargin * sc * sc);

  // Step 3: |(x'-a)/|x'-a| - (x-a)/|x-a|| <= 2 |x-x'| / |x'-a|   (and the b side)
  link("step3 unit-direction displacement (a)",
       dist(scale(sub(xp, a), 1.0 / nxpa), scale(sub(x, a), 1.0 / nxa)),
       2.0 * std::sqrt(move2) / nxpa, kStrictMargin);
  link("step3 unit-direction displacement (b)",
       dist(scale(sub(xp, b), 1.0 / nxpb), scale(sub(x, b), 1.0 / nxb)),
       2.0 * std::sqrt(move2) / nxpb, kStrictMargin);

  // combined displacement of the rescaled normals
  const double factor = chain_factor(d);
  link("combined normal displacement (a)", dist(x1p, inst.x1s), n1 * factor, kStrictMargin);
  link("combined normal displacement (b)", dist(x2p, inst.x2s), n2 * factor, kStrictMargin);

  // rescaling identities
  link("rescale preserves |x1*|", std::abs(norm(x1p) - n1), 0.0, 1e-12);
  link("rescale preserves |x2*|", std::abs(norm(x2p) - n2), 0.0, 1e-12);
  link("rescale unit-sum", std::abs(norm(x1p) + norm(x2p) - 1.0), 0.0, 1e-12);
  link("rescale exact alignment (a)",
       std::abs(dot(x1p, sub(xp, a)) - norm(x1p) * nxpa), 0.0, 1e-12 * sc);
  link("rescale exact alignment (b)",
       std::abs(dot(x2p, sub(xp, b)) - norm(x2p) * nxpb), 0.0, 1e-12 * sc);

  rep.all_pass = true;
  for (const auto& l : rep.links) rep.all_pass = rep.all_pass && l.pass;
  return rep;
}

std::optional<ConstructionInstance> sample_construction_instance(int dim, double delta_prime,
                                                                 std::uint64_t seed,
                                                                 bool want_case2) {
  if (dim < 2) fail(Err::BadArgument, "instances need ambient dimension >= 2");
  Halton h(mix_seed(seed, 0xca5eULL));
  const double d = delta_prime;
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Vec a(dim), b(dim), x(dim);
    for (int k = 0; k < dim; ++k) {
      a[k] = h.gauss(attempt * 3 + 0, k);
      b[k] = h.gauss(attempt * 3 + 1, k);
      x[k] = h.gauss(attempt * 3 + 2, k);
    }
    if (dist(a, b) < 1e-6) continue;
    // move x toward the bisector foot until the ratio enters the band
    Vec foot = bisector_foot(a, b, x);
    double target = 1.0 + (2.0 * h.at(attempt, 9) - 1.0) * 0.9 * d;
    auto ratio_at = [&](double s) {
      Vec xs = add(scale(x, 1.0 - s), scale(foot, s));
      return dist(xs, a) / dist(xs, b);
    };
    double lo = 0.0, hi = 1.0;
    double r0 = ratio_at(0.0);
    double s_star = 0.0;
    if (std::abs(r0 - 1.0) < 0.9 * d) {
      s_star = 0.0;
    } else {
      // ratio(1) = 1, so the target in the band is crossed somewhere on [0, 1]
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        bool same_side = (ratio_at(mid) - target) * (r0 - target) > 0;
        (same_side ? lo : hi) = mid;
      }
      s_star = hi;
    }
    Vec xs = add(scale(x, 1.0 - s_star), scale(foot, s_star));
    double ip = dot(sub(xs, a), sub(xs, b));
    if (want_case2 ? (ip > 0) : (ip <= 0)) continue;
    double nxa = dist(xs, a), nxb = dist(xs, b);
    if (nxa < 1e-9 || nxb < 1e-9) continue;
    double ratio = nxa / nxb;
    if (!(ratio > 1.0 - d) || !(ratio < 1.0 + d)) continue;

    // dual pair inside the alignment caps
    double t = 0.02 + 0.96 * h.at(attempt, 10);
    double cos1 = 1.0 - d * h.at(attempt, 11) * 0.98;
    double cos2 = 1.0 - d * h.at(attempt, 12) * 0.98;
    Vec seed1 = h.direction(attempt * 5 + 3, dim);
    Vec seed2 = h.direction(attempt * 5 + 4, dim);
    Vec d1 = tilt_in_cap(scale(sub(xs, a), 1.0 / nxa), cos1, seed1);
    Vec d2 = tilt_in_cap(scale(sub(xs, b), 1.0 / nxb), cos2, seed2);

    ConstructionInstance inst;
    inst.a = a;
    inst.b = b;
    inst.x = xs;
    inst.x1s = scale(d1, t);
    inst.x2s = scale(d2, 1.0 - t);
    inst.delta_prime = d;
    return inst;
  }
  return std::nullopt;
}

bool case1_bound_holds(const ConstructionInstance& inst, double* lhs_out, double* rhs_out) {
  if (dot(sub(inst.x, inst.a), sub(inst.x, inst.b)) <= 0)
    fail(Err::BadArgument, "Case-1 bound requires <x-a, x-b> > 0");
  const double d = inst.delta_prime;
  double lhs = norm2(add(inst.x1s, inst.x2s));
  double rhs = 0.5 - 2.0 * (std::sqrt(d) + d);
  if (lhs_out) *lhs_out = lhs;
  if (rhs_out) *rhs_out = rhs;
  return lhs > rhs - kStrictMargin;
}

void WitnessSearchProblem::validate() const {
  A.validate();
  B.validate();
  if (!(rho > 0) || !(eps > 0)) fail(Err::BadArgument, "witness search requires rho, eps > 0");
  if (!(lambda >= eps + rho)) fail(Err::BadArgument, "witness search requires lambda >= eps + rho");
  double tau_cap = (lambda - eps) / (lambda + eps);
  if (!(tau > 0) || !(tau < tau_cap))
    fail(Err::BadArgument, "witness search requires tau in (0, (lambda-eps)/(lambda+eps))");
  double m = std::max(dist(x, a), dist(x, b));
  double dd = product_diag_distance(A, a, kEmptySentinel, B, b, kEmptySentinel, x, rho);
  if (!(eps < m) || !(m < dd + eps))
    fail(Err::BadArgument, "witness search hypothesis eps < max|x-.| < dist + eps violated");
}

std::optional<Witness> lemma_witness_search(const WitnessSearchProblem& prob, int budget,
                                            std::uint64_t seed) {
  if (budget <= 0) fail(Err::BadArgument, "witness search requires budget >= 1");
  prob.validate();

  Halton h(mix_seed(seed, 0x3a7eULL));
  const std::size_t n = prob.x.size();
  const double cap = prob.eps / prob.rho;

  auto try_config = [&](const Vec& ahat, const Vec& bhat, const Vec& xhat)
      -> std::optional<Witness> {
    if (dist(ahat, prob.a) > prob.lambda || dist(bhat, prob.b) > prob.lambda) return std::nullopt;
    if (dist(xhat, prob.x) > prob.rho) return std::nullopt;
    NormalFan fa = proximal_normals(prob.A, ahat);
    NormalFan fb = proximal_normals(prob.B, bhat);
    if (fa.is_zero() || fb.is_zero()) return std::nullopt;
    Vec va = sub(xhat, ahat), vb = sub(xhat, bhat);
    double na = norm(va), nb = norm(vb);
    double mx = std::max(na, nb);
    if (mx < 1e-13) return std::nullopt;

    std::vector<Vec> cand_a = fa.generators;
    std::vector<Vec> cand_b = fb.generators;
    if (na > 1e-13) {
      Vec p = cone_project(fa, scale(va, 1.0 / na));
      if (norm(p) > 1e-10) cand_a.push_back(normalized(p));
    }
    if (nb > 1e-13) {
      Vec p = cone_project(fb, scale(vb, 1.0 / nb));
      if (norm(p) > 1e-10) cand_b.push_back(normalized(p));
    }
    for (const auto& d1 : cand_a) {
      for (const auto& d2 : cand_b) {
        for (int ti = 1; ti < 32; ++ti) {
          double t = static_cast<double>(ti) / 32.0;
          Vec x1s = scale(d1, t), x2s = scale(d2, 1.0 - t);
          double sum_norm = norm(add(x1s, x2s));
          if (sum_norm >= cap) continue;
          double lhs = dot(x1s, va) + dot(x2s, vb);
          double rhs = prob.tau * mx;
          if (lhs <= rhs) continue;
          // recheck the full conclusion before returning
          if (std::abs(norm(x1s) + norm(x2s) - 1.0) > 1e-9) continue;
          if (cone_distance(fa, x1s) > 1e-9 || cone_distance(fb, x2s) > 1e-9) continue;
          return Witness{ahat, bhat, xhat, x1s, x2s, sum_norm, lhs, rhs};
        }
      }
    }
    return std::nullopt;
  };

  // deterministic multistart over set samples near a, b and ball points near x
  for (int it = 0; it < budget; ++it) {
    Vec ahat = prob.a, bhat = prob.b, xhat = prob.x;
    if (it > 0) {
      auto as = sample_set_points(prob.A, prob.a, prob.lambda * 0.98, 1, mix_seed(seed, 2, it));
      auto bs = sample_set_points(prob.B, prob.b, prob.lambda * 0.98, 1, mix_seed(seed, 3, it));
      if (!as.points.empty()) ahat = as.points.front();
      if (!bs.points.empty()) bhat = bs.points.front();
      xhat = h.ball_point(static_cast<std::uint64_t>(it), prob.x, prob.rho * 0.98);
    }
    if (auto w = try_config(ahat, bhat, xhat)) return w;
  }
  return std::nullopt;
}

}  // namespace tvlab
