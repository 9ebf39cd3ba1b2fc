#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tvlab/errors.hpp"

namespace tvlab {

// Points and dual vectors are plain coordinate lists in R^n (Hilbert self-duality).
using Vec = std::vector<double>;

inline void check_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    fail(Err::DimensionMismatch, "vector dims " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  check_dim(a, b);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec add(const Vec& a, const Vec& b) {
  check_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  check_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// a + c*b
inline Vec axpy(const Vec& a, double c, const Vec& b) {
  check_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline double dist(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0) fail(Err::BadArgument, "cannot normalize zero vector");
  return scale(a, 1.0 / n);
}

inline Vec zero_vec(std::size_t n) { return Vec(n, 0.0); }

inline Vec unit_axis(std::size_t n, std::size_t i) {
  Vec r(n, 0.0);
  r[i] = 1.0;
  return r;
}

// strict lexicographic order, used for deterministic tie-breaking
inline bool lex_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.size() < b.size();
}

inline std::string to_string(const Vec& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

}  // namespace tvlab
