#pragma once

#include <optional>
#include <stdexcept>

#include "jetcone/comparison.hpp"

namespace jetcone {

// Validation failure of a manifest or experiment descriptor (CLI exit 2).
struct ManifestError : std::runtime_error {
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

// A list of independent, seeded experiments, parsed from JSON.
struct Manifest {
  struct Entry {
    std::string kind;
    std::string name;
    nlohmann::json params;  // kind-specific, may be empty
    uint64_t seed = 1;
  };

  int version = 1;
  std::vector<Entry> experiments;

  static Manifest parse(const nlohmann::json& j);  // throws ManifestError
  static Manifest load(const std::string& path);   // throws ManifestError
};

struct ExperimentResult {
  std::string name;
  std::string kind;
  nlohmann::json params;
  uint64_t seed = 0;
  Report report;

  bool pass() const { return report.pass(); }
  nlohmann::json to_json() const;
};

// Dispatches one experiment by kind. Known kinds: ot_comparison,
// krylov_comparison, garding_comparison, zmp, fibereg, counterexample.
// Unknown kinds and malformed params throw ManifestError.
Report run_experiment(const Manifest::Entry& e, uint64_t seed);

// Runs all experiments (job-parallel, deterministic per-experiment seeds,
// results in manifest order). seed_override replaces every entry seed.
std::vector<ExperimentResult> run_manifest(const Manifest& m, int jobs,
                                           std::optional<uint64_t> seed_override);

nlohmann::json summary_json(const std::vector<ExperimentResult>& results,
                            bool with_timestamp);

// Named experiment builders, shared by the manifest runner, the CLI and the
// acceptance suite.
OperatorPair ot_operator(double f_scale, BoxDomain domain);
ComparisonExperiment ot_pair(int index, uint64_t seed, double h, bool corrupt);
ComparisonExperiment krylov_pair(double h, double T, double c, double K,
                                 BoundaryMode mode);
ComparisonExperiment garding_pair(int index, uint64_t seed, double h);
// Seeded zero-maximum-principle pair on [0,1]^2: a cone-classical piece and a
// dual-classical piece whose sum touches zero on the boundary.
std::pair<ClassicalFunction, ClassicalFunction> zmp_pair(int index, uint64_t seed,
                                                         const BoxDomain& Om,
                                                         const MonotonicityCone& M);

}  // namespace jetcone
