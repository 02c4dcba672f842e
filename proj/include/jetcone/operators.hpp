#pragma once

#include "jetcone/duality.hpp"
#include "jetcone/garding.hpp"

namespace jetcone {

// Parametric modulus of continuity omega(eta) = c * eta^s.
struct Modulus {
  double c = 1.0;
  double s = 1.0;
  double operator()(double eta) const { return c * std::pow(eta, s); }
};

// A proper elliptic operator together with its admissibility constraint G,
// monotonicity cone M and interior direction J0.
struct OperatorPair {
  std::string name;
  int n = 0;
  std::function<double(const Vec& x, const Jet& J)> evaluate;
  // Admissibility fiber G_x; unset means unconstrained (all of jet space).
  std::function<Classification(const Vec& x, const Jet& J)> constraint;
  MonotonicityCone M;
  Jet J0;
  BoxDomain domain;
  bool constant_coefficient = false;

  Classification constraint_classify(const Vec& x, const Jet& J) const {
    return constraint ? constraint(x, J) : Classification::Inside;
  }
  // Rejection-samples a jet admissible at x (throws after too many misses).
  Jet sample_admissible(const Vec& x, JetSampler& s, int max_tries = 4000) const;
};

struct CorrespondenceSubequation {
  OperatorPair base;
  SubequationOracle oracle;  // fibers {J in G_x : F(x,J) >= 0}
};

// Uniform-continuity structure check: F(y, J + eta*J0) >= F(x, J) for all
// sampled admissible (x, J) and |x - y| < delta; delta maximized by bisection.
Report check_regularity_UCF(const OperatorPair& P, const BoxDomain& Omega, double eta,
                            long samples = 2000, uint64_t seed = 7);

CorrespondenceSubequation build_correspondence(const OperatorPair& P);

// g(Du) det(D^2 u) = f(x) with gradient constrained to the cone D.
OperatorPair make_ot_operator(std::function<double(const Vec&)> g,
                              std::function<double(const Vec&)> f, DirectionalCone D,
                              Vec qbar, Modulus omega, BoxDomain domain);

// -u_t det(D_x^2 u) = f(x, t) on space-time jets (t the last coordinate).
OperatorPair make_krylov_operator(std::function<double(const Vec&)> f, int n_space,
                                  BoxDomain domain);

// det(A + <b(x), p> P(x)) = f(x) with the gradient cone D = ∩_x {<b(x), .> >= 0}.
OperatorPair make_pma_operator(std::function<Vec(const Vec&)> b,
                               std::function<SymMatrix(const Vec&)> Pfield,
                               std::function<double(const Vec&)> f, Vec nu,
                               BoxDomain domain);

// First-order hyperbolic-polynomial operator F(J) = g(p) on the cone M_g.
OperatorPair make_garding_operator(const HyperbolicPolynomial& g, BoxDomain domain);

}  // namespace jetcone
