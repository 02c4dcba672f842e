#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "jetcone/cones.hpp"
#include "jetcone/grid.hpp"

#include <json.hpp>

namespace jetcone {

nlohmann::json jet_to_json(const Jet& J);
Jet jet_from_json(const nlohmann::json& j);

struct Violation {
  Vec x;
  Jet J;
  std::string detail;
};

// Outcome of a sampled law/experiment check. `extra` carries law-specific
// numbers (measured delta, interior max, ...).
struct Report {
  std::string law;
  long samples = 0;
  std::vector<Violation> violations;
  bool inconclusive = false;

  // Law-specific numbers (measured delta, interior max, ...), merged into the
  // JSON report. Lazily created.
  nlohmann::json& extra();

  bool pass() const { return violations.empty() && !inconclusive; }
  nlohmann::json to_json() const;

 private:
  std::shared_ptr<nlohmann::json> extra_;
};

// A subequation presented as a fiberwise three-way membership oracle with a
// designated monotonicity direction J0 interior to the declared cone M.
struct SubequationOracle {
  int n = 0;
  std::function<Classification(const Vec& x, const Jet& J)> classify;
  Jet J0;
  MonotonicityCone M;
  std::string name;
  bool constant_fiber = false;
  std::optional<BoxDomain> domain;  // where x is sampled from (origin if unset)

  Classification operator()(const Vec& x, const Jet& J) const { return classify(x, J); }
};

// Constant-coefficient oracle of a monotonicity cone (fiber = M everywhere).
SubequationOracle oracle_of_cone(const MonotonicityCone& M, const std::string& name = "");

// Dirichlet dual, computed fiberwise: J is a member iff -J is not interior.
SubequationOracle dual(const SubequationOracle& F);

// Uniform random jets with jet_norm <= rho, and sample points in the oracle's
// domain (or the origin for constant fibers).
struct JetSampler {
  int n;
  double rho;
  std::mt19937_64 rng;

  JetSampler(int n_, double rho_, uint64_t seed) : n(n_), rho(rho_), rng(seed) {}
  Jet jet();
  Vec point(const SubequationOracle& F);
};

// Law check: J in F_x and J' in dual(F)_x imply J + J' in dual(M).
Report check_sum_law(SubequationOracle F, long samples, double rho = 10.0,
                     uint64_t seed = 1);

// Test helper for the interior characterization invariant: Inside iff some
// eta in {1e-2, 1e-4, 1e-6} keeps J - eta*J0 from classifying Outside.
bool interior_characterization_holds(const SubequationOracle& F, const Vec& x, const Jet& J);

extern const double kEtaGrid[3];

}  // namespace jetcone
