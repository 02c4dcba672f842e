#include "jetcone/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jetcone {

namespace {

bool designated(const BoxDomain& Om, size_t flat, BoundaryMode mode) {
  if (!Om.on_boundary(flat)) return false;
  return mode == BoundaryMode::Full || Om.on_reduced_boundary(flat);
}

// Max of grid over a cell predicate; returns -inf when the set is empty.
double max_where(const GridFunction& f, const std::function<bool(size_t)>& pred,
                 size_t* argmax = nullptr) {
  double m = -kInf;
  for (size_t i = 0; i < f.domain.size(); ++i) {
    if (!pred(i)) continue;
    if (f.values[i] > m) {
      m = f.values[i];
      if (argmax) *argmax = i;
    }
  }
  return m;
}

// A cone member jet for the monotonicity precheck: rejection sampling with a
// fallback to scaled interior jets when the cone is thin.
Jet sample_cone_member(const MonotonicityCone& M, JetSampler& s, std::mt19937_64& rng) {
  for (int t = 0; t < 200; ++t) {
    Jet J = s.jet();
    if (M.classify(J) != Classification::Outside) return J;
  }
  std::uniform_real_distribution<double> u01(0.1, 2.0);
  return M.interior_jet() * u01(rng);
}

Report screen_grid_dual(const MonotonicityCone& M, const GridFunction& z) {
  Report rep;
  rep.law = "screening: refutation-jet search against the dual cone";
  SubequationOracle Fd = dual(oracle_of_cone(M, "M"));
  const BoxDomain& Om = z.domain;
  // Interior cells, subsampled to keep screening O(10^3) per grid.
  std::vector<size_t> cells;
  for (size_t i = 0; i < Om.size(); ++i)
    if (Om.tag(i) == CellTag::Interior && std::isfinite(z.values[i])) cells.push_back(i);
  const size_t stride = std::max<size_t>(1, cells.size() / 1500);
  for (size_t k = 0; k < cells.size(); k += stride) {
    ++rep.samples;
    if (auto bad = find_bad_test_jet(z, Fd, cells[k])) {
      rep.violations.push_back({Om.point(cells[k]), bad->J,
                                "rejected at screening: refutation jet with contact gap " +
                                    std::to_string(bad->eps)});
      if (rep.violations.size() >= 5) break;
    }
  }
  return rep;
}

Report zmp_conclusion(const BoxDomain& Om, const GridFunction& z, BoundaryMode mode) {
  Report rep;
  rep.law = "zero maximum principle: boundary max <= 0 forces interior max <= tol";
  size_t barg = 0, iarg = 0;
  const double bmax = max_where(
      z, [&](size_t i) { return designated(Om, i, mode); }, &barg);
  const double imax = max_where(
      z, [&](size_t i) { return !designated(Om, i, mode); }, &iarg);
  rep.samples = static_cast<long>(Om.size());
  rep.extra()["boundary_max"] = bmax;
  rep.extra()["interior_max"] = imax;
  rep.extra()["interior_argmax"] = Om.point(iarg);
  // Roundoff band for exactly-touching boundary data.
  const double btol = 1e-12 * std::max(1.0, z.max_abs());
  if (bmax > btol) {
    rep.inconclusive = true;
    rep.extra()["note"] = "boundary hypothesis z <= 0 not satisfied on the designated cells";
    return rep;
  }
  const double tol = tol_fd(Om.h(), z.max_abs());
  if (imax > tol)
    rep.violations.push_back({Om.point(iarg), Jet(),
                              "interior max " + std::to_string(imax) + " exceeds tol " +
                                  std::to_string(tol)});
  return rep;
}

}  // namespace

Report run_zmp(const MonotonicityCone& M, const BoxDomain& Omega, const GridFunction& z,
               BoundaryMode mode) {
  // Throws when the cone/domain pair admits no strict approximator.
  StrictApproximator psi = strict_approximator(
      M, Omega, mode == BoundaryMode::Reduced ? ApproximatorMode::Parabolic
                                              : ApproximatorMode::Elliptic);
  Report screen = screen_grid_dual(M, z);
  if (!screen.pass()) {
    screen.inconclusive = true;
    return screen;
  }
  Report rep = zmp_conclusion(Omega, z, mode);
  rep.extra()["approximator"] = psi.to_json();
  rep.extra()["screening_samples"] = screen.samples;
  return rep;
}

Report run_zmp(const MonotonicityCone& M, const BoxDomain& Omega,
               const ClassicalFunction& piece_M, const ClassicalFunction& piece_dual,
               BoundaryMode mode) {
  StrictApproximator psi = strict_approximator(
      M, Omega, mode == BoundaryMode::Reduced ? ApproximatorMode::Parabolic
                                              : ApproximatorMode::Elliptic);
  Report sM = classical_subharmonic_check(piece_M, oracle_of_cone(M, "M"), Omega, false);
  Report sD = classical_subharmonic_check(piece_dual, dual(oracle_of_cone(M, "M")), Omega,
                                          false);
  if (!sM.pass() || !sD.pass()) {
    Report rej;
    rej.law = "zero maximum principle: input rejected at classical screening";
    rej.inconclusive = true;
    rej.violations = !sM.pass() ? sM.violations : sD.violations;
    return rej;
  }
  GridFunction z = GridFunction::from_callable(
      Omega, [&](const Vec& x) { return piece_M.value(x) + piece_dual.value(x); });
  Report rep = zmp_conclusion(Omega, z, mode);
  rep.extra()["approximator"] = psi.to_json();
  return rep;
}

namespace {

// Structural precheck (i): adding a cone member to a member jet cannot leave
// the fiber of the correspondence subequation.
Report precheck_monotonicity(const OperatorPair& op, const SubequationOracle& corr,
                             long samples) {
  Report rep;
  rep.law = "(i) cone-monotonicity of the operator's fibers";
  rep.samples = samples;
  JetSampler js(op.n, 6.0, 101);
  JetSampler jm(op.n, 3.0, 102);
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  long tested = 0;
  for (long i = 0; i < samples * 40 && tested < samples; ++i) {
    Vec x(op.n);
    for (int d = 0; d < op.n; ++d) {
      const double lo = op.domain.lower()[d], hi = op.domain.upper()[d];
      x[d] = lo + u01(rng) * (hi - lo);
    }
    Jet J = js.jet();
    if (corr(x, J) == Classification::Outside) continue;
    ++tested;
    Jet Jp = sample_cone_member(op.M, jm, rng);
    if (corr(x, J + Jp) == Classification::Outside) {
      rep.violations.push_back({x, J, "member left the fiber after adding a cone member"});
      if (rep.violations.size() >= 5) break;
    }
  }
  if (tested < samples / 10) rep.inconclusive = true;
  rep.samples = tested;
  return rep;
}

// Structural precheck (iii): the admissible set with F >= 0 is nonempty at
// sampled lattice points (witnessed along t * J0).
Report precheck_nonempty(const OperatorPair& op) {
  Report rep;
  rep.law = "(iii) nonempty admissible equation set per fiber";
  const size_t stride = std::max<size_t>(1, op.domain.size() / 25);
  for (size_t i = 0; i < op.domain.size(); i += stride) {
    ++rep.samples;
    const Vec x = op.domain.point(i);
    bool found = false;
    for (double t = 1.0; t <= (1 << 24) && !found; t *= 2.0) {
      const Jet J = op.J0 * t;
      if (op.constraint_classify(x, J) != Classification::Outside &&
          op.evaluate(x, J) >= 0)
        found = true;
    }
    if (!found) {
      rep.violations.push_back({x, Jet(), "no admissible jet with F >= 0 along t*J0"});
      if (rep.violations.size() >= 3) break;
    }
  }
  return rep;
}

// Structural precheck (iv): the correspondence classification is compatible
// with the (constraint, sign of F) pair.
Report precheck_compatibility(const OperatorPair& op, const SubequationOracle& corr,
                              long samples) {
  Report rep;
  rep.law = "(iv) compatibility of fiber membership with constraint and operator sign";
  rep.samples = samples;
  JetSampler js(op.n, 8.0, 104);
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (long i = 0; i < samples; ++i) {
    Vec x(op.n);
    for (int d = 0; d < op.n; ++d) {
      const double lo = op.domain.lower()[d], hi = op.domain.upper()[d];
      x[d] = lo + u01(rng) * (hi - lo);
    }
    const Jet J = js.jet();
    const Classification c = corr(x, J);
    const Classification g = op.constraint_classify(x, J);
    const double v = op.evaluate(x, J);
    const double tau = tau_mem(jet_norm(J));
    const bool fail_in = c == Classification::Inside &&
                         !(g == Classification::Inside && v > tau);
    const bool fail_out = c == Classification::Outside &&
                          !(g == Classification::Outside || v < -tau);
    if (fail_in || fail_out) {
      rep.violations.push_back({x, J, fail_in ? "Inside without strict constraint and F > 0"
                                              : "Outside despite constraint and F >= 0"});
      if (rep.violations.size() >= 5) break;
    }
  }
  return rep;
}

}  // namespace

Report run_comparison(const ComparisonExperiment& E) {
  Report rep;
  rep.law = "comparison principle: u <= w on the designated boundary forces u <= w + tol";
  const BoxDomain& Om = E.domain;
  const CorrespondenceSubequation corr = build_correspondence(E.op);

  // Structural prechecks; a failure here is an error of the setup, not an
  // experimental outcome.
  Report pre_i = precheck_monotonicity(E.op, corr.oracle, 300);
  Report pre_ii = check_regularity_UCF(E.op, Om, 0.1, 800);
  Report pre_iii = precheck_nonempty(E.op);
  Report pre_iv = precheck_compatibility(E.op, corr.oracle, 300);
  rep.extra()["prechecks"] = nlohmann::json::array(
      {pre_i.to_json(), pre_ii.to_json(), pre_iii.to_json(), pre_iv.to_json()});
  const Report* pres[] = {&pre_i, &pre_ii, &pre_iii, &pre_iv};
  const char* names[] = {"(i) monotonicity", "(ii) fiber regularity", "(iii) nonempty",
                         "(iv) compatibility"};
  for (int k = 0; k < 4; ++k)
    if (!pres[k]->pass())
      throw std::runtime_error(std::string("run_comparison: structural precheck ") +
                               names[k] + " failed for operator " + E.op.name);

  // Classical admissibility of the pair.
  Report sub_ok = classical_subharmonic_check(E.sub, corr.oracle, Om, false);
  if (!sub_ok.pass()) {
    rep.violations.push_back(
        {sub_ok.violations.empty() ? Vec() : sub_ok.violations.front().x, Jet(),
         "u fails the admissible-subsolution check"});
  }
  long super_checked = 0;
  for (size_t i = 0; i < Om.size(); ++i) {
    if (Om.tag(i) != CellTag::Interior) continue;
    const Vec x = Om.point(i);
    const Jet J = E.super.jet(x);
    if (E.op.constraint_classify(x, J) == Classification::Outside) continue;
    ++super_checked;
    const double v = E.op.evaluate(x, J);
    if (v > tau_mem(jet_norm(J))) {
      rep.violations.push_back({x, J, "w fails the supersolution inequality F <= 0"});
      break;
    }
  }
  rep.extra()["supersolution_cells_checked"] = super_checked;
  if (!rep.violations.empty()) return rep;

  GridFunction diff = GridFunction::from_callable(
      Om, [&](const Vec& x) { return E.sub.value(x) - E.super.value(x); });
  double scale = 1.0;
  for (size_t i = 0; i < Om.size(); ++i)
    scale = std::max(scale,
                     std::max(std::abs(E.sub.value(Om.point(i))), std::abs(diff.values[i])));
  const double tol = tol_fd(Om.h(), scale);

  size_t barg = 0, iarg = 0;
  const double bmax = max_where(
      diff, [&](size_t i) { return designated(Om, i, E.mode); }, &barg);
  const double imax = max_where(
      diff, [&](size_t i) { return !designated(Om, i, E.mode); }, &iarg);
  rep.samples = static_cast<long>(Om.size());
  rep.extra()["boundary_max"] = bmax;
  rep.extra()["interior_max"] = imax;
  rep.extra()["tol"] = tol;

  const double btol = 1e-12 * scale;  // roundoff band for touching data
  if (bmax > btol) {
    const Vec xb = Om.point(barg);
    std::ostringstream os;
    os << "boundary hypothesis violated: u - w = " << bmax << " at the designated cell";
    rep.violations.push_back({xb, Jet(), os.str()});
    rep.extra()["boundary_witness"] = xb;
    long on_top = 0, total_violating = 0;
    for (size_t i = 0; i < Om.size(); ++i) {
      if (!designated(Om, i, E.mode) || diff.values[i] <= btol) continue;
      ++total_violating;
      if (std::abs(Om.point(i).back() - Om.upper().back()) < 0.5 * Om.h()) ++on_top;
    }
    rep.extra()["violating_cells"] = total_violating;
    rep.extra()["violating_cells_on_top_slice"] = on_top;
    return rep;
  }
  if (imax > tol) {
    rep.violations.push_back({Om.point(iarg), Jet(),
                              "interior max " + std::to_string(imax) + " exceeds tol " +
                                  std::to_string(tol)});
    return rep;
  }

  // Contrapositive probe: pushing u up by eps_probe must surface any interior
  // violation on the designated boundary as well.
  const double eps_probe = 10.0 * tol;
  const bool interior_violated = imax + eps_probe > tol;
  const bool boundary_touches = bmax + eps_probe > -tol;
  rep.extra()["probe_eps"] = eps_probe;
  rep.extra()["probe_interior_violated"] = interior_violated;
  rep.extra()["probe_boundary_touches"] = boundary_touches;
  if (interior_violated && !boundary_touches)
    rep.violations.push_back({Om.point(iarg), Jet(),
                              "probe: interior violation without a boundary touching point"});
  return rep;
}

Report definitional_comparison_probe(const ClassicalFunction& u, const SubequationOracle& F,
                                     const BoxDomain& Omega, int battery, uint64_t seed) {
  Report rep;
  rep.law = "definitional comparison: u + v <= 0 on the boundary forces u + v <= tol inside";
  const SubequationOracle Fd = dual(F);
  const int n = F.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  Vec center(n);
  for (int d = 0; d < n; ++d) center[d] = 0.5 * (Omega.lower()[d] + Omega.upper()[d]);

  int kept = 0;
  for (int attempt = 0; attempt < 40 * battery && kept < battery; ++attempt) {
    QuadraticFunction q;
    q.x0 = center;
    q.r0 = uc(rng) * 0.5;
    q.p0 = Vec(n);
    for (double& v : q.p0) v = uc(rng);
    q.A0 = SymMatrix(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) q.A0.set(i, j, uc(rng));
    ClassicalFunction v(q);
    if (!classical_subharmonic_check(v, Fd, Omega, true).pass()) continue;

    // Shift v so that u + v touches zero from below on the boundary, then
    // re-verify strictness (the shift moves only the jet's r-component).
    GridFunction s = GridFunction::from_callable(
        Omega, [&](const Vec& x) { return u.value(x) + v.value(x); });
    const double c = s.boundary_max(false);
    QuadraticFunction qs = q;
    qs.r0 -= c;
    ClassicalFunction vs(qs);
    if (!classical_subharmonic_check(vs, Fd, Omega, true).pass()) continue;
    ++kept;

    double scale = 1.0;
    for (double val : s.values) scale = std::max(scale, std::abs(val - c));
    const double tol = tol_fd(Omega.h(), scale);
    size_t iarg = 0;
    const double imax = max_where(
        s, [&](size_t i) { return !Omega.on_boundary(i); }, &iarg);
    if (imax - c > tol) {
      rep.violations.push_back({Omega.point(iarg), qs.jet(Omega.point(iarg)),
                                "u + v pokes above the boundary max by " +
                                    std::to_string(imax - c)});
      if (rep.violations.size() >= 5) break;
    }
  }
  rep.samples = kept;
  rep.extra()["battery_size"] = kept;
  if (kept == 0) rep.inconclusive = true;
  return rep;
}

CounterexampleRun::CounterexampleRun(double beta_, double gamma_z_, Vec x0_, Vec d_,
                                     bool control_)
    : beta(beta_), gamma_z(gamma_z_), x0(std::move(x0_)), d(std::move(d_)),
      control(control_) {
  if (x0.size() != 2 || d.size() != 2)
    throw std::invalid_argument("CounterexampleRun: the construction is two-dimensional");
  const double len = norm2(d);
  if (len < 1e-12) throw std::invalid_argument("CounterexampleRun: zero direction");
  d = scale(1.0 / len, d);
  if (!(beta > 0 && beta < 3))
    throw std::invalid_argument("CounterexampleRun: beta must lie in (0,3)");
  if (!control && !(gamma_z > 0.5 * (beta + 1) && gamma_z < 2))
    throw std::invalid_argument(
        "CounterexampleRun: gamma_z must lie in ((beta+1)/2, 2); pass control=true to probe "
        "out-of-range orders");
}

Report run_standard_condition_failure(const CounterexampleRun& C, int n_max,
                                      const std::string& csv_path) {
  Report rep;
  rep.law = "doubling-of-variables continuity condition fails: LHS_n -> 1 while the "
            "modulus argument m_n -> 0";
  rep.samples = n_max;

  // Coefficient fields of det(A + <b(x), p> P(x)), P = diag(h, 0), f = 0.
  const Vec x0 = C.x0;
  const double beta = C.beta, gamma = C.gamma_z;
  auto bfield = [x0, beta](const Vec& x) {
    const Vec r = sub(x0, x);
    const double t = norm2(r);
    return t < 1e-300 ? Vec(2, 0.0) : scale(std::pow(t, beta - 1.0), r);
  };
  auto hfield = [x0, beta, gamma, bfield](const Vec& x) {
    const double t = norm2(sub(x, x0));
    if (t < 1e-300) return 0.0;
    const double g2 = std::pow(t, 2.0 * gamma);
    return 6.0 * g2 / (std::abs(dot(bfield(x), sub(x0, x))) + g2);
  };
  auto F = [bfield, hfield](const Vec& x, const Vec& p, const SymMatrix& A) {
    SymMatrix M(2);
    M.set(0, 0, dot(bfield(x), p) * hfield(x));
    return det(A + M);
  };

  auto trace = nlohmann::json::array();
  std::vector<double> lhs(n_max + 1, 0.0), marg(n_max + 1, 0.0);
  bool blocks_ok = true;
  for (int n = 1; n <= n_max; ++n) {
    const double t = std::pow(2.0, -n);
    const Vec y = add(x0, scale(t, C.d));
    const double g = std::pow(t, gamma);
    SymMatrix A = SymMatrix::diag({0.0, 0.5 / g});
    SymMatrix B = SymMatrix::diag({0.0, 1.0 / g});
    const double alpha = 1.0 / (3.0 * g);
    const Vec p = scale(alpha, sub(x0, y));
    lhs[n] = F(y, p, A) - F(x0, p, B);
    marg[n] = alpha * t * t + t;
    trace.push_back({n, lhs[n], marg[n]});

    // Coupling blocks -3a I <= diag(A,-B) <= 3a [[I,-I],[-I,I]], certified on
    // the g-scaled matrices (positive scaling preserves semidefiniteness and
    // keeps the entries O(1) for the eigenvalue check).
    SymMatrix As = A * g, Bs = B * g;
    const double as = alpha * g;  // = 1/3 exactly
    SymMatrix C1(4), C2(4);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        C1.set(i, j, As(i, j));
        C1.set(i + 2, j + 2, -Bs(i, j));
        C2.set(i, j, 3.0 * as * (i == j) - As(i, j));
        C2.set(i + 2, j + 2, 3.0 * as * (i == j) + Bs(i, j));
        C2.set(i, j + 2, -3.0 * as * (i == j));
        if (i != j) C2.set(j, i + 2, -3.0 * as * 0.0);
      }
    for (int i = 0; i < 4; ++i) C1.set(i, i, C1(i, i) + 3.0 * as);
    if (lambda_min(C1) < -1e-10 || lambda_min(C2) < -1e-10) {
      blocks_ok = false;
      rep.violations.push_back({y, Jet(), "coupling block inequality fails at n = " +
                                              std::to_string(n)});
    }
  }

  // N* = first index from which the failure signal holds through n_max.
  int n_star = -1;
  for (int n = n_max; n >= 1; --n) {
    if (lhs[n] >= 0.9 && marg[n] <= 1e-3)
      n_star = n;
    else
      break;
  }
  const bool signal = n_star > 0;
  if (!signal)
    rep.violations.push_back(
        {C.x0, Jet(), "no tail index with LHS >= 0.9 and modulus argument <= 1e-3"});

  rep.extra()["beta"] = C.beta;
  rep.extra()["gamma_z"] = C.gamma_z;
  rep.extra()["control"] = C.control;
  rep.extra()["trace"] = trace;
  rep.extra()["N_star"] = n_star;
  rep.extra()["final_LHS"] = lhs[n_max];
  rep.extra()["final_m"] = marg[n_max];
  rep.extra()["blocks_ok"] = blocks_ok;
  rep.extra()["failure_signal"] = signal;

  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("run_standard_condition_failure: cannot write " +
                                      csv_path);
    os << "n,LHS_n,m_n\n";
    for (int n = 1; n <= n_max; ++n) os << n << "," << lhs[n] << "," << marg[n] << "\n";
  }
  return rep;
}

}  // namespace jetcone
