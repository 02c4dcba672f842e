#pragma once

#include "jetcone/operators.hpp"
#include "jetcone/potential.hpp"

namespace jetcone {

enum class BoundaryMode { Full, Reduced };

// One comparison-principle experiment: an operator with admissibility
// constraint, a classical subsolution u and supersolution w on a lattice
// domain, compared on the designated part of the boundary.
struct ComparisonExperiment {
  OperatorPair op;
  BoxDomain domain;
  ClassicalFunction sub;    // u
  ClassicalFunction super;  // w
  BoundaryMode mode = BoundaryMode::Full;
  std::string name = "comparison";
};

// Zero maximum principle harness. The grid overload screens z itself against
// the dual oracle of M (refutation-jet search at lattice points); the
// classical overload screens the two pieces exactly (piece_M against M,
// piece_dual against the dual) and evaluates z = piece_M + piece_dual.
// In both cases the domain must admit a strict approximator for M
// (Reduced mode uses the blow-down variant) or the call throws.
Report run_zmp(const MonotonicityCone& M, const BoxDomain& Omega, const GridFunction& z,
               BoundaryMode mode);
Report run_zmp(const MonotonicityCone& M, const BoxDomain& Omega,
               const ClassicalFunction& piece_M, const ClassicalFunction& piece_dual,
               BoundaryMode mode);

// Full comparison run: structural prechecks (monotonicity, uniform fiber
// continuity of the operator, nonempty admissible set, operator/constraint
// compatibility), classical admissibility of u and w, boundary hypothesis on
// the designated cells, interior conclusion within tol_fd, and a
// contrapositive probe at u + 10*tol_fd.
Report run_comparison(const ComparisonExperiment& E);

// Definitional comparison: for every strictly dual-subharmonic quadratic v in
// a seeded battery, u + v <= 0 on the boundary forces u + v <= tol_fd inside.
// Inconclusive when the battery is empty.
Report definitional_comparison_probe(const ClassicalFunction& u, const SubequationOracle& F,
                                     const BoxDomain& Omega, int battery = 40,
                                     uint64_t seed = 17);

// Doubling-of-variables sequence demonstrating failure of the classical
// continuity condition for the perturbed determinant operator
// det(A + <b(x), p> P(x)) with b of zero order beta and g of zero order
// gamma_z at x0.
struct CounterexampleRun {
  double beta = 1.0;
  double gamma_z = 1.25;
  Vec x0;
  Vec d;  // unit direction of approach, y_n = x0 + 2^-n d
  bool control = false;

  // Throws unless beta in (0,3) and gamma_z in ((beta+1)/2, 2); the control
  // flag bypasses the gamma_z range check (detector-sanity runs).
  CounterexampleRun(double beta, double gamma_z, Vec x0, Vec d, bool control = false);
};

// Emits (n, LHS_n, m_n) for n = 1..n_max, certifies the 4x4 coupling blocks
// per n, and asserts LHS_n -> 1 with m_n -> 0 (thresholds 0.9 and 1e-3 on the
// tail). extra() carries the trace, N_star, and the tail values; a nonempty
// csv_path additionally writes the trace as CSV.
Report run_standard_condition_failure(const CounterexampleRun& C, int n_max = 20,
                                      const std::string& csv_path = "");

}  // namespace jetcone
