#pragma once

#include <cstdint>
#include <limits>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

inline constexpr double kEmptySentinel = std::numeric_limits<double>::infinity();

// inf over x' in closed-ball(x, rho) of max{ dist(x', A ∩ ball(a, lam_a)),
//                                            dist(x', B ∩ ball(b, lam_b)) }
// i.e. the max-norm product distance between (A trunc) x (B trunc) and the diagonal copy
// of the rho-ball. Multistart subgradient descent plus pattern polish; +inf sentinel when
// either truncated set is empty. Pass lam = +inf for the untruncated sets.
double product_diag_distance(const SetSpec& A, const Vec& a, double lam_a, const SetSpec& B,
                             const Vec& b, double lam_b, const Vec& x, double rho,
                             std::uint64_t seed = 0x9d15ULL);

}  // namespace tvlab
