#pragma once

#include "jetcone/duality.hpp"
#include "jetcone/fibermap.hpp"

namespace jetcone {

// Classical subharmonicity: jets of phi classify not-Outside (strict: Inside)
// at every interior lattice point.
Report classical_subharmonic_check(const ClassicalFunction& phi, const SubequationOracle& F,
                                   const BoxDomain& Omega, bool strict);

// Lattice sup-convolution restricted to the ball |y - x| <= 2 sqrt(eps M) + h,
// which on the lattice agrees exactly with the unrestricted maximum.
// -inf source points are ignored. OpenMP-parallel over lattice points.
GridFunction sup_convolution(const GridFunction& u, double eps);

// u + (lambda/2)|x|^2 has nonnegative second differences along all axis and
// diagonal lattice directions, within tol_fd.
Report quasi_convexity_check(const GridFunction& u, double lambda);

// u(. - y) + theta * psi restricted to the delta-shrunk domain. y is rounded
// to the lattice; |y| >= delta is rejected.
GridFunction translate_perturb(const GridFunction& u, const Vec& y, double theta,
                               const StrictApproximator& psi, double delta);

// u is nondecreasing along the polar-cone directions of D (lattice steps).
Report directionality_check(const GridFunction& u, const DirectionalCone& D);

// Families of quadratics whose negatives are M-subharmonic for a generator M.
enum class QuadraticClassKind { Aff, AffPlus, Plus, A_D, A_gamma, A_R, A_Rmin, AffPlusD };

struct QuadraticClass {
  QuadraticClassKind kind = QuadraticClassKind::Aff;
  std::optional<DirectionalCone> D;  // A_D / AffPlusD
  double gamma = 0;                  // A_gamma
  double R = 0;                      // A_R / A_Rmin
};

// Comparison-with-quadratics necessity test: for N_a seeded members a of the
// class, shifted to touch u from above on the boundary, u - a may not poke
// above tol_fd in the interior.
Report sub_A_check(const GridFunction& u, const QuadraticClass& A_class,
                   const BoxDomain& Omega, int N_a = 200, uint64_t seed = 5);

// Refutation search: a quadratic contact jet from above at x that the fiber
// F_x rejects; certifies u is not F-subharmonic at x.
struct BadTestJet {
  Jet J;
  double eps = 0;
};
std::optional<BadTestJet> find_bad_test_jet(const GridFunction& u, const SubequationOracle& F,
                                            size_t x_flat);

}  // namespace jetcone
