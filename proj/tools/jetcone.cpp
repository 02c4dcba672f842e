// Command-line front end: cone classification, approximators, hyperbolic
// polynomial eigenvalues, fiber-continuity certification, comparison
// experiments and manifest runs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetcone/manifest.hpp"

namespace {

using namespace jetcone;

std::optional<uint64_t> env_seed() {
  const char* s = std::getenv("JETCONE_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (...) {
    throw ManifestError("JETCONE_SEED is not an unsigned integer");
  }
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }),
          s.end());
  return s;
}

Vec parse_vec(const std::string& s) {
  Vec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    v.push_back(std::stod(tok));
  }
  if (v.empty()) throw ManifestError("empty vector: '" + s + "'");
  return v;
}

// Jet grammar: "r,(p1,...,pn),A" with A either a scalar s (meaning s*I) or
// bracketed rows "[[a,b],[b,c]]". A bare scalar means the scaled vertex jet
// (r, 0, 0).
Jet parse_jet(const std::string& raw, int n_hint) {
  const std::string s = strip_spaces(raw);
  const size_t open = s.find('(');
  if (open == std::string::npos) {
    const double r = std::stod(s);
    return Jet(r, Vec(n_hint, 0.0), SymMatrix(n_hint));
  }
  const size_t close = s.find(')', open);
  if (close == std::string::npos || open < 2 || s[open - 1] != ',')
    throw ManifestError("bad jet syntax: '" + raw + "'");
  const double r = std::stod(s.substr(0, open - 1));
  const Vec p = parse_vec(s.substr(open + 1, close - open - 1));
  const int n = static_cast<int>(p.size());
  if (close + 2 > s.size() || s[close + 1] != ',')
    throw ManifestError("bad jet syntax (missing matrix part): '" + raw + "'");
  const std::string ap = s.substr(close + 2);
  SymMatrix A(n);
  if (!ap.empty() && ap[0] == '[') {
    // rows [[...],[...]]
    std::string body = ap;
    for (char& c : body)
      if (c == '[' || c == ']') c = ';';
    std::vector<Vec> rows;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ';'))
      if (!tok.empty() && tok != ",") rows.push_back(parse_vec(tok));
    if (static_cast<int>(rows.size()) != n)
      throw ManifestError("matrix rows do not match gradient dimension");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw ManifestError("matrix is not square");
      for (int j = 0; j < n; ++j)
        if (std::abs(rows[i][j] - rows[j][i]) > 1e-12)
          throw ManifestError("matrix is not symmetric");
      for (int j = i; j < n; ++j) A.set(i, j, rows[i][j]);
    }
  } else {
    const double d = std::stod(ap);
    A = SymMatrix::identity(n) * d;
  }
  return Jet(r, p, A);
}

struct ConeSpec {
  std::string family;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double R = 0;
  int n = 2;
  bool parabolic = false;
};

MonotonicityCone build_cone(const ConeSpec& cs) {
  bool has_gamma = !std::isnan(cs.gamma);
  std::optional<DirectionalCone> D;
  MonotonicityCone::ACon acon = MonotonicityCone::ACon::None;
  double R = 0;
  bool parabolic = cs.parabolic;
  if (!cs.family.empty()) {
    std::stringstream ss(strip_spaces(cs.family));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "N")
        has_gamma = true;  // gamma = 0
      else if (tok == "P")
        acon = MonotonicityCone::ACon::PSD;
      else if (tok == "D")
        D = DirectionalCone::orthant(cs.n);
      else if (tok == "R") {
        if (cs.R <= 0) throw ManifestError("family token R requires --R > 0");
        acon = MonotonicityCone::ACon::Radius;
        R = cs.R;
      } else if (tok == "Dn" || tok == "Pn")
        parabolic = true;
      else if (!tok.empty())
        throw ManifestError("unknown family token: '" + tok + "'");
    }
  }
  if (parabolic) return MonotonicityCone::parabolic(cs.n);
  std::optional<double> g;
  if (has_gamma) g = std::isnan(cs.gamma) ? 0.0 : cs.gamma;
  if (!g && !D && acon == MonotonicityCone::ACon::None)
    throw ManifestError("empty cone description: give --family, --gamma or --R");
  return MonotonicityCone(cs.n, g, std::move(D), acon, R);
}

HyperbolicPolynomial load_poly(const std::string& spec) {
  if (spec == "wave2") return HyperbolicPolynomial::wave2();
  if (spec == "det2") return HyperbolicPolynomial::det2();
  std::ifstream is(spec);
  if (!is) throw ManifestError("cannot open polynomial file: " + spec);
  nlohmann::json j;
  is >> j;
  return HyperbolicPolynomial::from_json(j);
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_manifest_cmd(const std::string& path, const std::string& out, int jobs,
                     bool no_timestamp) {
  Manifest m = Manifest::load(path);
  std::vector<ExperimentResult> results = run_manifest(m, jobs, env_seed());
  std::filesystem::create_directories(out);
  bool all_pass = true;
  for (size_t i = 0; i < results.size(); ++i) {
    std::string fname = results[i].name;
    for (char& c : fname)
      if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    std::ostringstream os;
    os << out << "/report_" << i << "_" << fname << ".json";
    std::ofstream of(os.str());
    of << results[i].to_json().dump(2) << "\n";
    all_pass = all_pass && results[i].pass();
  }
  {
    std::ofstream of(out + "/summary.json");
    of << summary_json(results, !no_timestamp).dump(2) << "\n";
  }
  std::cout << (all_pass ? "all experiments passed" : "some experiments failed") << " ("
            << results.size() << " run, reports in " << out << ")\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetcone: cone duality, fiber continuity and comparison experiments"};
  app.require_subcommand(1);

  // --- cones ---
  auto* cones = app.add_subcommand("cones", "cone membership, duals, approximators");
  cones->require_subcommand(1);
  ConeSpec cs;
  std::string jet_str = "0";
  double T = 1.0;
  auto add_cone_opts = [&](CLI::App* c) {
    c->add_option("--family", cs.family, "comma list of generators: N,P,D,R,Dn,Pn");
    c->add_option("--gamma", cs.gamma, "gradient-slope generator r <= -gamma|p|");
    c->add_option("--R", cs.R, "curvature-radius generator A >= (|p|/R) I");
    c->add_option("--n", cs.n, "jet dimension (default 2)");
  };
  auto* c_dual = cones->add_subcommand("dual", "classify a jet against the dual cone");
  add_cone_opts(c_dual);
  c_dual->add_option("--jet", jet_str, "jet 'r,(p...),A'")->required();
  auto* c_cls = cones->add_subcommand("classify", "classify a jet against the cone");
  add_cone_opts(c_cls);
  c_cls->add_option("--jet", jet_str, "jet 'r,(p...),A'")->required();
  auto* c_apx = cones->add_subcommand("approximator", "strict approximator parameters");
  add_cone_opts(c_apx);
  c_apx->add_flag("--parabolic", cs.parabolic, "blow-down (reduced boundary) variant");
  c_apx->add_option("--T", T, "time extent of the space-time box (default 1)");

  // --- garding ---
  auto* gard = app.add_subcommand("garding", "hyperbolic-polynomial eigenvalues and cone");
  gard->require_subcommand(1);
  std::string poly_spec = "wave2", p_str;
  auto* g_eig = gard->add_subcommand("eigenvalues", "ordered eigenvalues at p");
  g_eig->add_option("--poly", poly_spec, "wave2 | det2 | polynomial JSON file");
  g_eig->add_option("--p", p_str, "gradient point 'p1,p2,...'")->required();
  auto* g_cone = gard->add_subcommand("cone", "cone membership at p");
  g_cone->add_option("--poly", poly_spec, "wave2 | det2 | polynomial JSON file");
  g_cone->add_option("--p", p_str, "gradient point 'p1,p2,...'")->required();

  // --- fibereg ---
  auto* fib = app.add_subcommand("fibereg", "certify uniform fiber continuity (OT pair)");
  double f_eta = 0.1, f_h = 0.01, f_radius = 3.0;
  int f_pairs = 100, f_count = 120;
  uint64_t seed = 1;
  fib->add_option("--eta", f_eta);
  fib->add_option("--grid-h", f_h);
  fib->add_option("--pairs", f_pairs);
  fib->add_option("--window-count", f_count);
  fib->add_option("--window-radius", f_radius);
  fib->add_option("--seed", seed);

  // --- compare ---
  auto* cmp = app.add_subcommand("compare", "run a comparison experiment");
  std::string exp_kind = "ot", cmp_mode = "reduced";
  bool corrupt = false;
  int pairs = 0;
  double cmp_h = 0, cmp_K = 1.0;
  cmp->add_option("--experiment", exp_kind, "ot | krylov | garding")->required();
  cmp->add_flag("--corrupt", corrupt, "corrupt one boundary cell (ot only)");
  cmp->add_option("--mode", cmp_mode, "reduced | full (krylov only)");
  cmp->add_option("--pairs", pairs, "battery size");
  cmp->add_option("--grid-h", cmp_h, "lattice spacing");
  cmp->add_option("--K", cmp_K, "supersolution constant (krylov only)");
  cmp->add_option("--seed", seed);

  // --- counterexample ---
  auto* cex = app.add_subcommand("counterexample",
                                 "doubling-of-variables continuity-condition failure");
  double beta = 1.0, gamma_z = 1.25;
  bool control = false;
  int n_max = 20;
  std::string csv_path, d_str = "1,0";
  cex->add_option("--beta", beta);
  cex->add_option("--gamma-z", gamma_z);
  cex->add_flag("--control", control, "bypass the zero-order range check");
  cex->add_option("--n-max", n_max);
  cex->add_option("--csv", csv_path, "write the (n, LHS_n, m_n) trace as CSV");
  cex->add_option("--d", d_str, "approach direction 'd1,d2'");

  // --- run ---
  auto* run = app.add_subcommand("run", "execute a JSON experiment manifest");
  std::string manifest_path, out_dir = ".";
  int jobs = 1;
  bool no_timestamp = false;
  run->add_option("manifest", manifest_path, "manifest JSON path")->required();
  run->add_option("--out", out_dir, "output directory for reports");
  run->add_option("--jobs", jobs, "parallel experiment jobs");
  run->add_flag("--no-timestamp", no_timestamp, "omit wall-clock from the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (auto s = env_seed()) seed = *s;

    if (c_dual->parsed() || c_cls->parsed()) {
      MonotonicityCone M = build_cone(cs);
      Jet J = parse_jet(jet_str, M.n());
      if (J.n() != M.n()) throw ManifestError("jet dimension does not match the cone");
      const Classification c = c_dual->parsed() ? M.dual_classify(J) : M.classify(J);
      std::cout << to_string(c) << "\n";
      return 0;
    }
    if (c_apx->parsed()) {
      MonotonicityCone M = build_cone(cs);
      const double h = 0.05;
      BoxDomain Om;
      ApproximatorMode mode =
          cs.parabolic ? ApproximatorMode::Parabolic : ApproximatorMode::Elliptic;
      if (M.n() > cs.n) {
        // space-time box with a parabolic reduced boundary
        Vec lo(M.n(), 0.0), hi(M.n(), 1.0);
        hi.back() = T;
        const int ns = M.n() - 1;
        Om = BoxDomain(lo, hi, h, [h, ns](const Vec& x) {
          if (x.back() < 0.5 * h) return true;
          for (int i = 0; i < ns; ++i)
            if (x[i] < 0.5 * h || x[i] > 1.0 - 0.5 * h) return true;
          return false;
        });
      } else {
        Om = BoxDomain(Vec(M.n(), 0.0), Vec(M.n(), 1.0), h);
      }
      print_json(strict_approximator(M, Om, mode).to_json());
      return 0;
    }
    if (g_eig->parsed() || g_cone->parsed()) {
      HyperbolicPolynomial g = load_poly(poly_spec);
      const Vec p = parse_vec(p_str);
      if (static_cast<int>(p.size()) != g.n())
        throw ManifestError("point dimension does not match the polynomial");
      if (g_eig->parsed()) {
        const GardingEigenvalues ev = garding_eigenvalues(g, p);
        for (size_t i = 0; i < ev.values.size(); ++i)
          std::cout << (i ? " " : "") << ev.values[i];
        std::cout << "\n";
      } else {
        std::cout << to_string(garding_cone_contains(g, p)) << "\n";
      }
      return 0;
    }
    if (fib->parsed()) {
      nlohmann::json params = {{"eta", f_eta},
                               {"h", f_h},
                               {"pair_count", f_pairs},
                               {"window_count", f_count},
                               {"window_radius", f_radius}};
      Manifest::Entry e{"fibereg", "fibereg", params, seed};
      Report rep = run_experiment(e, seed);
      print_json(rep.to_json());
      return rep.pass() ? 0 : 1;
    }
    if (cmp->parsed()) {
      nlohmann::json params = nlohmann::json::object();
      std::string kind;
      if (exp_kind == "ot") {
        kind = "ot_comparison";
        if (corrupt) params["corrupt"] = true;
        if (pairs > 0) params["pairs"] = pairs;
        if (cmp_h > 0) params["h"] = cmp_h;
      } else if (exp_kind == "krylov") {
        kind = "krylov_comparison";
        params["mode"] = cmp_mode;
        params["K"] = cmp_K;
        if (cmp_h > 0) params["h"] = cmp_h;
      } else if (exp_kind == "garding") {
        kind = "garding_comparison";
        if (pairs > 0) params["pairs"] = pairs;
        if (cmp_h > 0) params["h"] = cmp_h;
      } else {
        throw ManifestError("unknown experiment: " + exp_kind);
      }
      Manifest::Entry e{kind, exp_kind, params, seed};
      Report rep = run_experiment(e, seed);
      print_json(rep.to_json());
      return rep.pass() ? 0 : 1;
    }
    if (cex->parsed()) {
      CounterexampleRun C(beta, gamma_z, {0.0, 0.0}, parse_vec(d_str), control);
      Report rep = run_standard_condition_failure(C, n_max, csv_path);
      print_json(rep.to_json());
      return rep.pass() ? 0 : 1;
    }
    if (run->parsed()) return run_manifest_cmd(manifest_path, out_dir, jobs, no_timestamp);
  } catch (const ManifestError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
