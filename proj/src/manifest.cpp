#include "jetcone/manifest.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jetcone {

namespace {

const char* kKnownKinds[] = {"ot_comparison", "krylov_comparison", "garding_comparison",
                             "zmp", "fibereg", "counterexample"};

bool known_kind(const std::string& k) {
  for (const char* s : kKnownKinds)
    if (k == s) return true;
  return false;
}

double param(const nlohmann::json& p, const char* key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

BoxDomain unit_square(double h) { return BoxDomain({0.0, 0.0}, {1.0, 1.0}, h); }

}  // namespace

Manifest Manifest::parse(const nlohmann::json& j) {
  Manifest m;
  try {
    if (!j.is_object() || !j.contains("version") || !j.contains("experiments"))
      throw ManifestError("manifest must be an object with 'version' and 'experiments'");
    m.version = j.at("version").get<int>();
    if (m.version != 1) throw ManifestError("unsupported manifest version");
    if (!j.at("experiments").is_array())
      throw ManifestError("'experiments' must be an array");
    int idx = 0;
    for (const auto& e : j.at("experiments")) {
      Entry en;
      if (!e.is_object() || !e.contains("kind"))
        throw ManifestError("experiment entries must be objects with a 'kind'");
      en.kind = e.at("kind").get<std::string>();
      if (!known_kind(en.kind)) throw ManifestError("unknown experiment kind: " + en.kind);
      en.name = e.contains("name") ? e.at("name").get<std::string>()
                                   : en.kind + "-" + std::to_string(idx);
      en.params = e.contains("params") ? e.at("params") : nlohmann::json::object();
      if (!en.params.is_object()) throw ManifestError("'params' must be an object");
      en.seed = e.contains("seed") ? e.at("seed").get<uint64_t>() : 1;
      m.experiments.push_back(std::move(en));
      ++idx;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError(std::string("manifest schema error: ") + ex.what());
  }
  return m;
}

Manifest Manifest::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ManifestError("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + ex.what());
  }
  return parse(j);
}

OperatorPair ot_operator(double f_scale, BoxDomain domain) {
  const double s = f_scale;
  return make_ot_operator(
      [](const Vec& p) { return 1.0 + p[0] + p[1]; },
      [s](const Vec& x) { return s * (1.0 + 0.25 * dot(x, x)); },
      DirectionalCone::orthant(2),
      {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, Modulus{1.4, 1.0},
      std::move(domain));
}

ComparisonExperiment ot_pair(int index, uint64_t seed, double h, bool corrupt) {
  std::mt19937_64 rng(seed * 1000003ull + static_cast<uint64_t>(index));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double a = 0.5 + 1.5 * u01(rng);
  const double c = 1.0 + 1.0 * u01(rng);
  const double slope = 1.0 * u01(rng);

  ComparisonExperiment E;
  E.domain = unit_square(h);
  E.op = ot_operator(1.0, E.domain);
  E.mode = BoundaryMode::Full;
  E.name = "ot-pair-" + std::to_string(index);

  QuadraticFunction uq;
  uq.r0 = 0;
  uq.p0 = {a, a};
  uq.A0 = SymMatrix::identity(2) * c;
  uq.x0 = {0.0, 0.0};
  E.sub = ClassicalFunction(uq);

  // Affine supersolution touching u from above on the boundary.
  double intercept = -kInf;
  for (size_t i = 0; i < E.domain.size(); ++i) {
    if (!E.domain.on_boundary(i)) continue;
    const Vec x = E.domain.point(i);
    intercept = std::max(intercept, uq.value(x) - slope * (x[0] + x[1]));
  }
  const double drop = corrupt ? 1.0 + std::abs(intercept) : 0.0;
  const double hh = h;
  E.super = ClassicalFunction(
      [slope, intercept, drop, hh](const Vec& x) {
        double v = slope * (x[0] + x[1]) + intercept;
        if (drop > 0 && std::abs(x[0]) < 0.5 * hh && std::abs(x[1]) < 0.5 * hh) v -= drop;
        return v;
      },
      [slope](const Vec& x) {
        return Jet(slope * (x[0] + x[1]), {slope, slope}, SymMatrix(2));
      });
  return E;
}

ComparisonExperiment krylov_pair(double h, double T, double c, double K,
                                 BoundaryMode mode) {
  const double hh = h;
  BoxDomain dom({0.0, 0.0, 0.0}, {1.0, 1.0, T}, h, [hh, T](const Vec& x) {
    // Parabolic boundary: initial slice or lateral walls (not the top slice
    // interior).
    if (x[2] < 0.5 * hh) return true;
    for (int i = 0; i < 2; ++i)
      if (x[i] < 0.5 * hh || x[i] > 1.0 - 0.5 * hh) return true;
    return false;
  });
  ComparisonExperiment E;
  E.domain = dom;
  E.op = make_krylov_operator([](const Vec&) { return 1.0; }, 2, dom);
  E.mode = mode;
  E.name = "krylov";
  E.sub = ClassicalFunction(
      [c](const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]) - c * x[2]; },
      [c](const Vec& x) {
        SymMatrix A(3);
        A.set(0, 0, 1.0);
        A.set(1, 1, 1.0);
        return Jet(0.5 * (x[0] * x[0] + x[1] * x[1]) - c * x[2], {x[0], x[1], -c}, A);
      });
  E.super = ClassicalFunction([K](const Vec&) { return K; },
                              [K](const Vec&) { return Jet(K, Vec(3, 0.0), SymMatrix(3)); });
  return E;
}

ComparisonExperiment garding_pair(int index, uint64_t seed, double h) {
  std::mt19937_64 rng(seed * 2000003ull + static_cast<uint64_t>(index));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double c = 0.5 + 0.5 * u01(rng);
  const double s = c + 0.5 + 0.5 * u01(rng);

  const double hh = h;
  BoxDomain dom({0.0, 0.0}, {1.0, 1.0}, h,
                // Excluded boundary part: the face {x = 0}.
                [hh](const Vec& x) { return x[0] > 0.5 * hh; });
  ComparisonExperiment E;
  E.domain = dom;
  E.op = make_garding_operator(HyperbolicPolynomial::wave2(), dom);
  E.mode = BoundaryMode::Reduced;
  E.name = "garding-pair-" + std::to_string(index);
  // Both gradients lie on the cone edge: u is a (boundary) subsolution, w a
  // supersolution; u - w = (c - s)(x + y) touches 0 exactly at the excluded
  // corner (0,0) and stays below 0 on the designated boundary.
  E.sub = ClassicalFunction(
      [c](const Vec& x) { return c * (x[0] + x[1]); },
      [c](const Vec& x) { return Jet(c * (x[0] + x[1]), {c, c}, SymMatrix(2)); });
  E.super = ClassicalFunction(
      [s](const Vec& x) { return s * (x[0] + x[1]); },
      [s](const Vec& x) { return Jet(s * (x[0] + x[1]), {s, s}, SymMatrix(2)); });
  return E;
}

std::pair<ClassicalFunction, ClassicalFunction> zmp_pair(int index, uint64_t seed,
                                                         const BoxDomain& Om,
                                                         const MonotonicityCone& M) {
  std::mt19937_64 rng(seed * 3000017ull + static_cast<uint64_t>(index));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int n = M.n();

  // Cone-classical piece: gradient pushed into the directional cone, convex.
  QuadraticFunction phi;
  phi.x0 = Vec(n, 0.0);
  phi.r0 = 0;
  const double alpha = 0.5 + 1.5 * u01(rng);
  phi.A0 = SymMatrix::identity(n) * alpha;
  phi.p0 = Vec(n);
  for (double& v : phi.p0) v = alpha + u01(rng);  // gradient alpha*x + p0 stays positive

  // Dual-classical piece: one nonnegative Hessian eigenvalue suffices.
  QuadraticFunction chi;
  chi.x0 = Vec(n, 0.5);
  chi.r0 = 0;
  chi.A0 = SymMatrix(n);
  chi.A0.set(0, 0, 0.1 + 1.9 * u01(rng));
  if (n > 1) chi.A0.set(1, 1, -(0.1 + 2.9 * u01(rng)));
  chi.p0 = Vec(n);
  for (double& v : chi.p0) v = 2.0 * u01(rng) - 1.0;

  // Shift so z = phi + chi touches zero from below on the boundary.
  double bmax = -kInf;
  for (size_t i = 0; i < Om.size(); ++i) {
    if (!Om.on_boundary(i)) continue;
    const Vec x = Om.point(i);
    bmax = std::max(bmax, phi.value(x) + chi.value(x));
  }
  phi.r0 -= bmax;
  return {ClassicalFunction(phi), ClassicalFunction(chi)};
}

namespace {

Report aggregate(const std::string& law, const std::vector<Report>& parts,
                 const std::vector<std::string>& names) {
  Report rep;
  rep.law = law;
  rep.samples = static_cast<long>(parts.size());
  auto arr = nlohmann::json::array();
  for (size_t i = 0; i < parts.size(); ++i) {
    const Report& r = parts[i];
    arr.push_back({{"name", names[i]}, {"pass", r.pass()}, {"report", r.to_json()}});
    if (!r.pass()) {
      Violation v = r.violations.empty() ? Violation{{}, Jet(), "inconclusive"}
                                         : r.violations.front();
      v.detail = names[i] + ": " + v.detail;
      rep.violations.push_back(std::move(v));
    }
  }
  rep.extra()["parts"] = arr;
  return rep;
}

Report run_ot_comparison(const nlohmann::json& p, uint64_t seed) {
  const double h = param(p, "h", 0.01);
  const int pairs = static_cast<int>(param(p, "pairs", 20));
  const bool corrupt = p.contains("corrupt") && p.at("corrupt").get<bool>();
  std::vector<Report> parts;
  std::vector<std::string> names;
  for (int k = 0; k < pairs; ++k) {
    ComparisonExperiment E = ot_pair(k, seed, h, corrupt && k == 0);
    parts.push_back(run_comparison(E));
    names.push_back(E.name + (corrupt && k == 0 ? " (corrupted)" : ""));
  }
  return aggregate("optimal-transport comparison battery", parts, names);
}

Report run_krylov_comparison(const nlohmann::json& p, uint64_t /*seed*/) {
  const double h = param(p, "h", 1.0 / 60.0);
  const double T = param(p, "T", 2.0 / 3.0);
  const double c = param(p, "c", 2.0);
  const double K = param(p, "K", 1.0);
  const std::string mode = p.contains("mode") ? p.at("mode").get<std::string>() : "reduced";
  if (mode != "reduced" && mode != "full")
    throw ManifestError("krylov_comparison: mode must be 'reduced' or 'full'");
  ComparisonExperiment E = krylov_pair(
      h, T, c, K, mode == "reduced" ? BoundaryMode::Reduced : BoundaryMode::Full);
  return run_comparison(E);
}

Report run_garding_comparison(const nlohmann::json& p, uint64_t seed) {
  const double h = param(p, "h", 0.02);
  const int pairs = static_cast<int>(param(p, "pairs", 5));
  std::vector<Report> parts;
  std::vector<std::string> names;
  for (int k = 0; k < pairs; ++k) {
    ComparisonExperiment E = garding_pair(k, seed, h);
    parts.push_back(run_comparison(E));
    names.push_back(E.name);
  }
  return aggregate("first-order hyperbolic-polynomial comparison battery", parts, names);
}

Report run_zmp_experiment(const nlohmann::json& p, uint64_t seed) {
  const double h = param(p, "h", 0.01);
  const int pairs = static_cast<int>(param(p, "pairs", 100));
  BoxDomain Om = unit_square(h);
  MonotonicityCone M = MonotonicityCone::DP(DirectionalCone::orthant(2));
  std::vector<Report> parts;
  std::vector<std::string> names;
  for (int k = 0; k < pairs; ++k) {
    auto [phi, chi] = zmp_pair(k, seed, Om, M);
    parts.push_back(run_zmp(M, Om, phi, chi, BoundaryMode::Full));
    names.push_back("zmp-pair-" + std::to_string(k));
  }
  return aggregate("zero maximum principle battery", parts, names);
}

Report run_fibereg(const nlohmann::json& p, uint64_t seed) {
  const double h = param(p, "h", 0.01);
  const double eta = param(p, "eta", 0.1);
  const int window_count = static_cast<int>(param(p, "window_count", 120));
  const double window_radius = param(p, "window_radius", 3.0);
  const long pair_count = static_cast<long>(param(p, "pair_count", 100));

  BoxDomain Om = unit_square(h);
  OperatorPair P = ot_operator(1.0, Om);
  CorrespondenceSubequation C = build_correspondence(P);
  JetWindow W = JetWindow::make(2, window_radius, window_count, seed);
  FiberegCertificate cert = certify_fiberegularity(C.oracle, Om, eta, W, pair_count, seed);
  FiberegCertificate dcert =
      certify_fiberegularity(dual(C.oracle), Om, eta, W, pair_count, seed);

  Report rep;
  rep.law = "uniform fiber continuity of the operator subequation and its dual";
  rep.samples = cert.pair_count * window_count;
  rep.extra()["certificate"] = cert.to_json();
  rep.extra()["dual_certificate"] = dcert.to_json();
  const double common = std::min(cert.delta, dcert.delta);
  rep.extra()["delta_common"] = common;
  if (!cert.pass)
    rep.violations.push_back({{}, Jet(), "primal fiber map not certified"});
  if (!dcert.pass)
    rep.violations.push_back({{}, Jet(), "dual fiber map not certified"});
  if (common <= 0 && rep.violations.empty())
    rep.violations.push_back({{}, Jet(), "no common delta > 0"});
  return rep;
}

Report run_counterexample(const nlohmann::json& p, uint64_t /*seed*/) {
  const double beta = param(p, "beta", 1.0);
  const double gamma_z = param(p, "gamma_z", 1.25);
  Vec x0 = p.contains("x0") ? p.at("x0").get<Vec>() : Vec{0.0, 0.0};
  Vec d = p.contains("d") ? p.at("d").get<Vec>() : Vec{1.0, 0.0};
  const bool control = p.contains("control") && p.at("control").get<bool>();
  const int n_max = static_cast<int>(param(p, "n_max", 20));
  try {
    CounterexampleRun C(beta, gamma_z, std::move(x0), std::move(d), control);
    return run_standard_condition_failure(C, n_max);
  } catch (const std::invalid_argument& ex) {
    throw ManifestError(std::string("counterexample: ") + ex.what());
  }
}

}  // namespace

Report run_experiment(const Manifest::Entry& e, uint64_t seed) {
  try {
    if (e.kind == "ot_comparison") return run_ot_comparison(e.params, seed);
    if (e.kind == "krylov_comparison") return run_krylov_comparison(e.params, seed);
    if (e.kind == "garding_comparison") return run_garding_comparison(e.params, seed);
    if (e.kind == "zmp") return run_zmp_experiment(e.params, seed);
    if (e.kind == "fibereg") return run_fibereg(e.params, seed);
    if (e.kind == "counterexample") return run_counterexample(e.params, seed);
  } catch (const ManifestError&) {
    throw;
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError(e.name + ": bad params: " + ex.what());
  }
  throw ManifestError("unknown experiment kind: " + e.kind);
}

std::vector<ExperimentResult> run_manifest(const Manifest& m, int jobs,
                                           std::optional<uint64_t> seed_override) {
  const int count = static_cast<int>(m.experiments.size());
  std::vector<ExperimentResult> results(count);
  std::vector<std::string> validation_errors(count);
  if (jobs < 1) jobs = 1;
#ifdef _OPENMP
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
#endif
  for (int i = 0; i < count; ++i) {
    const Manifest::Entry& e = m.experiments[i];
    ExperimentResult r;
    r.name = e.name;
    r.kind = e.kind;
    r.params = e.params;
    r.seed = seed_override.value_or(e.seed);
    try {
      r.report = run_experiment(e, r.seed);
    } catch (const ManifestError& ex) {
      validation_errors[i] = ex.what();
    } catch (const std::exception& ex) {
      r.report.law = e.kind;
      r.report.violations.push_back({{}, Jet(), std::string("error: ") + ex.what()});
    }
    results[i] = std::move(r);
  }
  for (const std::string& err : validation_errors)
    if (!err.empty()) throw ManifestError(err);
  return results;
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json j;
  j["experiment"] = name;
  j["kind"] = kind;
  j["params"] = params;
  j["seed"] = seed;
  j["pass"] = pass();
  nlohmann::json rj = report.to_json();
  // Hoist the headline numbers when the experiment produced them.
  for (const char* key : {"prechecks", "boundary_max", "interior_max"})
    if (rj.contains(key)) j[key] = rj.at(key);
  auto witnesses = nlohmann::json::array();
  for (const Violation& v : report.violations)
    witnesses.push_back({{"x", v.x}, {"J", jet_to_json(v.J)}, {"detail", v.detail}});
  j["witnesses"] = witnesses;
  j["report"] = rj;
  return j;
}

nlohmann::json summary_json(const std::vector<ExperimentResult>& results,
                            bool with_timestamp) {
  nlohmann::json j;
  j["version"] = 1;
  j["count"] = results.size();
  int passed = 0;
  auto arr = nlohmann::json::array();
  for (const ExperimentResult& r : results) {
    arr.push_back({{"experiment", r.name}, {"kind", r.kind}, {"pass", r.pass()}});
    if (r.pass()) ++passed;
  }
  j["experiments"] = arr;
  j["passed"] = passed;
  j["failed"] = static_cast<int>(results.size()) - passed;
  j["all_pass"] = passed == static_cast<int>(results.size());
  if (with_timestamp) {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
  }
  return j;
}

}  // namespace jetcone
