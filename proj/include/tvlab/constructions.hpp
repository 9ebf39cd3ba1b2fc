#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

// Foot of the perpendicular from x onto the bisector hyperplane of a and b:
//   x' = x - (<b-a, x-m>/|b-a|^2)(b-a),  m = (a+b)/2.
// Guarantees |x'-a| = |x'-b| and <x-x', x'-m> = 0.
Vec bisector_foot(const Vec& a, const Vec& b, const Vec& x);

// x1*' = (|x1*|/|x'-a|)(x'-a), x2*' = (|x2*|/|x'-b|)(x'-b): norms preserved, alignment exact.
std::pair<Vec, Vec> rescale_normals(const Vec& a, const Vec& b, const Vec& xprime, const Vec& x1s,
                                    const Vec& x2s);

// Largest delta' <= delta/3 (bisection grid) satisfying the two scalar margin conditions
//   2(sqrt(d') + d') < 1/2 - beta^2
//   sqrt(2 d') + 2 sqrt((2d'-d'^2)/(4-6d'+3d'^2)) < min(delta, alpha - beta).
// Requires 0 < beta < min(alpha, 1/sqrt(2)).
double delta_prime_for(double beta, double alpha, double delta);

// Case-2 data of the key-estimate construction, with the tolerance delta' it was built for.
struct ConstructionInstance {
  Vec a, b, x;
  Vec x1s, x2s;          // nonzero, |x1s| + |x2s| = 1
  double delta_prime = 0.0;
};

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;  // link asserts lhs <= rhs (+ margin)
  bool pass = false;
};

struct ChainReport {
  std::vector<ChainLink> links;
  bool all_pass = false;
  Vec m, xprime, x1s_prime, x2s_prime;
  std::string to_json(int indent = -1) const;
};

// Checks every inequality link of the Case-2 chain (midpoint foot, Steps 1-3, the combined
// normal-displacement bounds) plus the equidistance/orthogonality/rescaling identities.
// A failing link is a counterexample to the chain and is reported, not thrown.
// Precondition violations (Case-2 sign, ratio band, alignment caps, unit sum) throw.
ChainReport verify_construction_chain(const ConstructionInstance& inst);

// Rejection sampler for feasible instances. want_case2=false generates the complementary
// positive-inner-product instances used by the Case-1 bound check.
std::optional<ConstructionInstance> sample_construction_instance(int dim, double delta_prime,
                                                                 std::uint64_t seed,
                                                                 bool want_case2 = true);

// Case-1 bound: |x1s + x2s|^2 > 1/2 - 2(sqrt(d') + d') for instances with <x-a, x-b> > 0.
bool case1_bound_holds(const ConstructionInstance& inst, double* lhs = nullptr,
                       double* rhs = nullptr);

struct WitnessSearchProblem {
  SetSpec A, B;
  Vec x, a, b;
  double rho = 0.0, eps = 0.0, lambda = 0.0, tau = 0.0;
  void validate() const;  // parameter ranges + the distance hypothesis
};

struct Witness {
  Vec ahat, bhat, xhat;
  Vec x1s, x2s;
  double sum_norm = 0.0;   // |x1s + x2s| < eps/rho
  double lhs = 0.0;        // <x1s, xhat-ahat> + <x2s, xhat-bhat>
  double rhs = 0.0;        // tau * max(|xhat-ahat|, |xhat-bhat|)
};

// Best-effort multistart search for the existence result's witness; none-found is not a
// refutation (existence is guaranteed by the cited result).
std::optional<Witness> lemma_witness_search(const WitnessSearchProblem& prob, int budget,
                                            std::uint64_t seed = 0x715eULL);

}  // namespace tvlab
