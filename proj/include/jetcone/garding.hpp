#pragma once

#include <optional>
#include <string>

#include "jetcone/cones.hpp"

#include <json.hpp>

namespace jetcone {

struct Monomial {
  double coeff = 0;
  std::vector<int> exponents;  // one entry per variable
};

// Homogeneous polynomial g of degree m <= 4, hyperbolic in the direction a:
// t -> g(ta + p) has m real roots for every p. Stored as dense monomials.
class HyperbolicPolynomial {
 public:
  HyperbolicPolynomial(std::vector<Monomial> monomials, Vec direction,
                       bool normalize = true);

  // g(p) = p_1^2 - p_2^2 with a = (1, 0).
  static HyperbolicPolynomial wave2();
  // det on S(2) embedded as (a11, a12, a22), direction = identity.
  static HyperbolicPolynomial det2();

  int n() const { return n_; }
  int degree() const { return m_; }
  const Vec& direction() const { return a_; }
  bool normalized() const { return normalized_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  double evaluate(const Vec& p) const;

  nlohmann::json to_json() const;
  static HyperbolicPolynomial from_json(const nlohmann::json& j);

 private:
  std::vector<Monomial> monomials_;
  Vec a_;
  int n_ = 0;
  int m_ = 0;
  bool normalized_ = false;
};

struct GardingEigenvalues {
  Vec values;  // ascending
};

// Negated real roots of t -> g(ta + p), ascending. Throws a hyperbolicity
// violation naming p when a root has a non-negligible imaginary part.
GardingEigenvalues garding_eigenvalues(const HyperbolicPolynomial& g, const Vec& p);

// Sign of the smallest eigenvalue within the membership band.
Classification garding_cone_contains(const HyperbolicPolynomial& g, const Vec& p);

// The product cone R x closure(Garding cone) x S(n) as a MonotonicityCone.
// Supported when the cone is polyhedral: either halfspaces are supplied, or
// they are derived for diagonal degree-2 forms c1 p1^2 + c2 p2^2 (c1 > 0 > c2)
// and cross-checked against the eigenvalue sign on a sample sweep.
MonotonicityCone garding_monotonicity_cone(
    const HyperbolicPolynomial& g,
    const std::optional<std::vector<Vec>>& halfspaces = std::nullopt);

}  // namespace jetcone
