#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetcone {

using Vec = std::vector<double>;

// Three-way membership relative to a tolerance band around the set boundary.
enum class Classification { Inside, Boundary, Outside };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Inside: return "Inside";
    case Classification::Boundary: return "Boundary";
    default: return "Outside";
  }
}

// Uniform membership tolerance: 1e-9 scaled by the magnitude of the data.
inline double tau_mem(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

// Classify a signed margin (positive = strictly inside) against the band.
inline Classification classify_margin(double margin, double tau) {
  if (margin > tau) return Classification::Inside;
  if (margin < -tau) return Classification::Outside;
  return Classification::Boundary;
}

inline Classification flip(Classification c) {
  if (c == Classification::Inside) return Classification::Outside;
  if (c == Classification::Outside) return Classification::Inside;
  return Classification::Boundary;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec axpy(double t, const Vec& x, const Vec& y) {  // t*x + y
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = t * x[i] + y[i];
  return r;
}

inline Vec scale(double t, const Vec& x) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = t * x[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// Halton low-discrepancy sequence: radical inverse of `index` in base `base`.
inline double halton(uint64_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

// First 32 primes; enough Halton bases for jets up to n = 6 (1+6+21 = 28 dims).
inline unsigned nth_prime(unsigned k) {
  static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                    37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                    83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  if (k >= 32) throw std::out_of_range("halton base index too large");
  return primes[k];
}

}  // namespace jetcone
