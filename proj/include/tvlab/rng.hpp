#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "tvlab/vec.hpp"

namespace tvlab {

// splitmix64: cheap stateless mixing for deriving per-call / per-sample seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + splitmix64(b)));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

// radical-inverse (van der Corput) in the given prime base
inline double radical_inverse(std::uint64_t n, std::uint32_t base) {
  double inv = 1.0 / base, q = 0.0, bk = inv;
  while (n > 0) {
    q += static_cast<double>(n % base) * bk;
    n /= base;
    bk *= inv;
  }
  return q;
}

inline constexpr std::array<std::uint32_t, 20> kHaltonPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

// Low-discrepancy stream: dimension d of element i, offset by a seed-derived start index
// so distinct calls get decorrelated but reproducible sequences.
class Halton {
 public:
  explicit Halton(std::uint64_t seed) : start_(splitmix64(seed) % 100003ULL + 17ULL) {}

  double at(std::uint64_t index, std::size_t dim) const {
    return radical_inverse(start_ + index, kHaltonPrimes[dim % kHaltonPrimes.size()]);
  }

  // one standard normal via Box-Muller on dims (2k, 2k+1)
  double gauss(std::uint64_t index, std::size_t k) const {
    double u1 = at(index, 2 * k);
    double u2 = at(index, 2 * k + 1);
    u1 = std::max(u1, 1e-300);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // uniform direction on the unit sphere in R^n (dims 0..2n-1)
  Vec direction(std::uint64_t index, std::size_t n) const {
    Vec g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = gauss(index, k);
    double l = norm(g);
    if (l < 1e-12) return unit_axis(n, 0);
    return scale(g, 1.0 / l);
  }

  // uniform point in the closed ball B_radius(center); dim 2n carries the radial coordinate
  Vec ball_point(std::uint64_t index, const Vec& center, double radius) const {
    std::size_t n = center.size();
    Vec d = direction(index, n);
    double u = at(index, 2 * n);
    double r = radius * std::pow(u, 1.0 / static_cast<double>(n));
    return axpy(center, r, d);
  }

  // uniform point in the axis-aligned cube of half-width radius around center
  Vec cube_point(std::uint64_t index, const Vec& center, double radius) const {
    std::size_t n = center.size();
    Vec p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = center[k] + radius * (2.0 * at(index, k) - 1.0);
    return p;
  }

 private:
  std::uint64_t start_;
};

}  // namespace tvlab
