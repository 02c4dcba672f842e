#pragma once

#include <optional>
#include <string>

#include "jetcone/directional_cone.hpp"
#include "jetcone/grid.hpp"
#include "jetcone/jet.hpp"

#include <json.hpp>

namespace jetcone {

// Convex cone of jets cut out by up to three generator constraints:
//   r <= -gamma |p|          (optional; gamma = 0 is the negativity cone)
//   p in D                   (optional directional cone)
//   A >= (|p|/R) I  /  A >= 0  (optional; R finite or infinite)
// The closed-form Dirichlet dual is the union of the generator duals.
class MonotonicityCone {
 public:
  enum class ACon { None, PSD, Radius };

  MonotonicityCone() = default;
  MonotonicityCone(int n, std::optional<double> gamma, std::optional<DirectionalCone> D,
                   ACon acon, double R = 0.0, int a_block = 0);

  // Generators.
  static MonotonicityCone P(int n);                   // A >= 0
  static MonotonicityCone N(int n);                   // r <= 0
  static MonotonicityCone Gamma(int n, double gamma); // r <= -gamma|p|
  static MonotonicityCone Dir(DirectionalCone D);     // p in D
  static MonotonicityCone Radius(int n, double R);    // A >= (|p|/R) I
  // Composites.
  static MonotonicityCone Q(int n);                              // M(N,P)
  static MonotonicityCone DP(DirectionalCone D);                 // M(D,P)
  static MonotonicityCone NDP(DirectionalCone D);                // M(N,D,P)
  static MonotonicityCone fundamental(double gamma, DirectionalCone D, double R);
  static MonotonicityCone fundamental_inf(double gamma, DirectionalCone D);
  // Parabolic cone M(D_n, P_n) on space-time jets in R^{n+1}:
  // p_{n+1} <= 0 and the spatial block A_n >= 0.
  static MonotonicityCone parabolic(int n_space);

  int n() const { return n_; }
  std::optional<double> gamma() const { return gamma_; }
  const std::optional<DirectionalCone>& D() const { return D_; }
  ACon acon() const { return acon_; }
  double R() const { return R_; }
  int a_block() const { return a_block_ ? a_block_ : n_; }
  bool has_r_constraint() const { return gamma_.has_value(); }

  // Signed margin: positive strictly inside, negative strictly outside.
  double margin(const Jet& J) const;
  double dual_margin(const Jet& J) const;
  Classification classify(const Jet& J) const;
  Classification dual_classify(const Jet& J) const;

  // A jet interior to this cone, for use as a monotonicity direction J0.
  Jet interior_jet() const;

  // True if every constraint of `other` is implied by one of ours (syntactic
  // check used by the inclusion-reversal law tests).
  bool refines(const MonotonicityCone& other) const;

  nlohmann::json to_json() const;
  static MonotonicityCone from_json(const nlohmann::json& j);

 private:
  int n_ = 0;
  std::optional<double> gamma_;
  std::optional<DirectionalCone> D_;
  ACon acon_ = ACon::None;
  double R_ = 0;
  int a_block_ = 0;  // 0 = full matrix
};

enum class ApproximatorKind { Quadratic, Radial, Parabolic, Directional };

// Strictly M-subharmonic scaffold function psi; the engine of the zero
// maximum principle. Parabolic/directional kinds blow down to -inf on the
// excluded boundary part.
struct StrictApproximator {
  ApproximatorKind kind = ApproximatorKind::Quadratic;
  Vec qbar;          // Quadratic: <qbar, x> + alpha|x|^2
  double alpha = 0;  // Quadratic / Radial
  Vec center;        // Radial: alpha |x - center|^2
  double T = 0;      // Parabolic: |x|^2 - 1/(T - t), t the last coordinate
  double a = 0;      // Directional: 1/(a - x_1)
  double shift = 0;  // constant subtracted to meet an r-constraint
  std::string blowup_set;  // description of the boundary part where psi = -inf

  double value(const Vec& x) const;  // -inf on the blowup set
  Jet jet(const Vec& x) const;       // throws on the blowup set
  bool blows_up_at(const Vec& x) const;

  nlohmann::json to_json() const;
};

enum class ApproximatorMode { Elliptic, Parabolic };

// Builds a strict approximator for M on Omega, or throws when the cone/domain
// combination admits none (finite R with a domain that does not fit inside a
// translate of the truncated cone D ∩ B_R).
StrictApproximator strict_approximator(const MonotonicityCone& M, const BoxDomain& Omega,
                                       ApproximatorMode mode);

}  // namespace jetcone
