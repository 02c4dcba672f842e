#pragma once

#include "jetcone/common.hpp"
#include "jetcone/sym_matrix.hpp"

namespace jetcone {

// A 2-jet (r, p, A): value, gradient, Hessian.
struct Jet {
  double r = 0;
  Vec p;
  SymMatrix A;

  Jet() = default;
  Jet(double r_, Vec p_, SymMatrix A_) : r(r_), p(std::move(p_)), A(std::move(A_)) {}

  static Jet zero(int n) { return Jet(0.0, Vec(n, 0.0), SymMatrix(n)); }

  int n() const { return static_cast<int>(p.size()); }

  Jet operator+(const Jet& o) const { return Jet(r + o.r, add(p, o.p), A + o.A); }
  Jet operator-(const Jet& o) const { return Jet(r - o.r, sub(p, o.p), A - o.A); }
  Jet operator*(double t) const { return Jet(t * r, scale(t, p), A * t); }
  Jet operator-() const { return *this * -1.0; }
};

// |||J||| = max{|r|, |p|, max_k |lambda_k(A)|}.
inline double jet_norm(const Jet& J) {
  double m = std::abs(J.r);
  m = std::max(m, norm2(J.p));
  m = std::max(m, spectral_radius(J.A));
  return m;
}

}  // namespace jetcone
