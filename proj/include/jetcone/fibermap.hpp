#pragma once

#include <cstdint>

#include "jetcone/duality.hpp"

namespace jetcone {

// Deterministic low-discrepancy set of jets with jet_norm <= radius; a finite
// stand-in for a compact jet window. Regeneration from (radius, count, seed)
// is bit-identical.
struct JetWindow {
  double radius = 1.0;
  int sample_count = 0;
  uint64_t seed = 0;
  std::vector<Jet> points;

  static JetWindow make(int n, double radius, int sample_count, uint64_t seed);
};

// Excess of A over B: sup_{a in A} inf_{b in B} |||a - b|||.
// excess({}, B) = 0 and excess(A, {}) = +inf.
double excess(const std::vector<Jet>& A, const std::vector<Jet>& B);
// d_H(A, B) = max of the two excesses.
double hausdorff(const std::vector<Jet>& A, const std::vector<Jet>& B);

struct FiberegCertificate {
  double eta = 0;
  double delta = 0;
  Jet J0;
  BoxDomain domain;
  long pair_count = 0;
  std::vector<Violation> violations;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Certifies the uniform fiber-continuity property: for sampled x, y with
// |x - y| < delta and every window jet J that is a member at x, J + eta*J0 is
// a member at y. delta is maximized by bisection on [h, diam(Omega)] with a
// fixed seed; if even the smallest delta fails, the failing certificate
// carries witnesses.
FiberegCertificate certify_fiberegularity(const SubequationOracle& F, const BoxDomain& Omega,
                                          double eta, const JetWindow& window,
                                          long pair_count = 100, uint64_t seed = 1);

// Members of the window at x (jets not classified Outside).
std::vector<Jet> windowed_fiber(const SubequationOracle& F, const Vec& x,
                                const JetWindow& window);

// The complement of an M-monotone fiber contains arbitrarily deep jets along
// -J0: checks that -t*J0 classifies Outside for t = 1, 2, 4, ... up to t_max.
Report check_no_finite_enlargement(const SubequationOracle& E, const Vec& x, double t_max);

}  // namespace jetcone
