#pragma once

#include <optional>
#include <string>

#include "jetcone/common.hpp"

namespace jetcone {

// Closed convex cone D = ∩_i { p : <nu_i, p> >= 0 } with nonempty interior,
// certified by a stored witness qbar with <nu_i, qbar> > 0 for all i.
// An empty normal list encodes D = R^n (whose Dirichlet dual is degenerate).
class DirectionalCone {
 public:
  DirectionalCone() = default;
  // Normals are normalized to unit length; the witness is synthesized when
  // omitted (and always re-verified).
  explicit DirectionalCone(int n, std::vector<Vec> normals = {},
                           std::optional<Vec> witness = std::nullopt);

  static DirectionalCone orthant(int n);
  static DirectionalCone halfspace(const Vec& normal);
  static DirectionalCone full_space(int n) { return DirectionalCone(n); }

  int n() const { return n_; }
  const std::vector<Vec>& normals() const { return normals_; }
  const Vec& witness() const { return qbar_; }
  bool is_full_space() const { return normals_.empty(); }

  // min_i <nu_i, p>; +inf when D = R^n.
  double margin(const Vec& p) const;
  Classification classify(const Vec& p) const;
  bool contains(const Vec& p) const { return classify(p) != Classification::Outside; }

  // Extreme-ray generators: available for R^n, halfspaces, orthants and any
  // cone whose normals are linearly independent (simplicial x subspace).
  const std::vector<Vec>& generators() const;
  bool has_generators() const;

  // Polar cone D° = { q : <q,p> >= 0 for all p in D }, tested on generators.
  bool polar_contains(const Vec& q) const;
  // Generators of D° (the normals plus, for a full-dimensional D with fewer
  // than n independent normals, nothing else: D° = cone(normals)).
  std::vector<Vec> polar_generators() const { return normals_; }

  // Dirichlet dual membership: p in (-int D)^c, i.e. -p not in int D.
  bool dirichlet_dual_contains(const Vec& p) const;
  Classification dual_classify(const Vec& p) const;

 private:
  void synthesize_generators() const;

  int n_ = 0;
  std::vector<Vec> normals_;
  Vec qbar_;
  mutable std::vector<Vec> generators_;
  mutable bool generators_tried_ = false;
};

}  // namespace jetcone
