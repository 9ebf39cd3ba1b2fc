#pragma once

#include <vector>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

// absolute tolerance on distances for membership decisions
inline constexpr double kMembershipTol = 1e-9;
// minimizers within this tolerance of the optimum count as ties (union projector)
inline constexpr double kTieTol = 1e-9;

// All nearest points of x in the set. Convex variants return exactly one point; union
// variants return every global minimizer across branches (ties included); nonconvex
// intersections return the best point found by the iterative fallback.
std::vector<Vec> project(const SetSpec& s, const Vec& x);

// Deterministic single projection: the lexicographically smallest of project().
Vec project_one(const SetSpec& s, const Vec& x);

double distance(const SetSpec& s, const Vec& x);

bool contains(const SetSpec& s, const Vec& x, double tol = kMembershipTol);

// dist(y, S ∩ closed-ball(center, lambda)); +inf when the truncated set is empty within
// the iteration budget. Fast path: if the plain projection lands inside the ball it is exact.
double distance_truncated(const SetSpec& s, const Vec& ball_center, double lambda, const Vec& y);

// Nearest-point projection onto {p : eq_normal_i . p = eq_rhs_i, ineq_normal_j . p <= ineq_rhs_j}
// by active-set enumeration; exact for small systems. Throws when the system is infeasible.
Vec project_linear(const std::vector<Vec>& eq_normals, const std::vector<double>& eq_rhs,
                   const std::vector<Vec>& ineq_normals, const std::vector<double>& ineq_rhs,
                   const Vec& x);

}  // namespace tvlab
