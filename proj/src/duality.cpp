#include "jetcone/duality.hpp"

#include <cmath>

#include <json.hpp>

namespace jetcone {

const double kEtaGrid[3] = {1e-2, 1e-4, 1e-6};

nlohmann::json jet_to_json(const Jet& J) {
  nlohmann::json j;
  j["r"] = J.r;
  j["p"] = J.p;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < J.A.n(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < J.A.n(); ++k) row.push_back(J.A(i, k));
    rows.push_back(row);
  }
  j["A"] = rows;
  return j;
}

Jet jet_from_json(const nlohmann::json& j) {
  const Vec p = j.at("p").get<Vec>();
  const int n = static_cast<int>(p.size());
  SymMatrix A(n);
  const auto& rows = j.at("A");
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) A.set(i, k, rows[i][k].get<double>());
  return Jet(j.at("r").get<double>(), p, A);
}

nlohmann::json& Report::extra() {
  if (!extra_) extra_ = std::make_shared<nlohmann::json>(nlohmann::json::object());
  return *extra_;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["law"] = law;
  j["samples"] = samples;
  j["pass"] = pass();
  if (inconclusive) j["inconclusive"] = true;
  auto viols = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json e;
    e["x"] = v.x;
    e["J"] = jet_to_json(v.J);
    e["detail"] = v.detail;
    viols.push_back(e);
  }
  j["violations"] = viols;
  if (extra_) j.update(*extra_);
  return j;
}

SubequationOracle oracle_of_cone(const MonotonicityCone& M, const std::string& name) {
  SubequationOracle F;
  F.n = M.n();
  F.M = M;
  F.J0 = M.interior_jet();
  F.classify = [M](const Vec&, const Jet& J) { return M.classify(J); };
  F.name = name.empty() ? "cone" : name;
  F.constant_fiber = true;
  return F;
}

SubequationOracle dual(const SubequationOracle& F) {
  SubequationOracle G = F;
  auto base = F.classify;
  G.classify = [base](const Vec& x, const Jet& J) { return flip(base(x, -J)); };
  G.name = F.name + "~";
  return G;
}

Jet JetSampler::jet() {
  std::uniform_real_distribution<double> u(-rho, rho);
  Jet J = Jet::zero(n);
  J.r = u(rng);
  for (int i = 0; i < n; ++i) J.p[i] = u(rng);
  const double pn = norm2(J.p);
  if (pn > rho) J.p = scale(rho / pn, J.p);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) J.A.set(i, k, u(rng));
  const double sr = spectral_radius(J.A);
  if (sr > rho) J.A = J.A * (rho / sr);
  return J;
}

Vec JetSampler::point(const SubequationOracle& F) {
  if (!F.domain) return Vec(F.n, 0.0);
  const auto& d = *F.domain;
  Vec x(d.dim());
  for (int i = 0; i < d.dim(); ++i) {
    std::uniform_real_distribution<double> u(d.lower()[i], d.upper()[i]);
    x[i] = u(rng);
  }
  return x;
}

Report check_sum_law(SubequationOracle F, long samples, double rho, uint64_t seed) {
  Report rep;
  rep.law = "mono_dual: F_x + dual(F)_x subset of dual(M)";
  const SubequationOracle Fd = dual(F);
  JetSampler s(F.n, rho, seed);
  long tested = 0;
  long attempts = 0;
  const long max_attempts = samples * 400;
  while (tested < samples && attempts < max_attempts) {
    ++attempts;
    const Vec x = s.point(F);
    const Jet J = s.jet();
    if (F.classify(x, J) == Classification::Outside) continue;
    const Jet Jp = s.jet();
    if (Fd.classify(x, Jp) == Classification::Outside) continue;
    ++tested;
    const Jet sum = J + Jp;
    if (F.M.dual_classify(sum) == Classification::Outside) {
      Violation v{x, sum, "J+J' escaped dual(M)"};
      rep.violations.push_back(v);
      if (rep.violations.size() >= 20) break;
    }
  }
  rep.samples = tested;
  if (tested < samples) rep.inconclusive = rep.violations.empty();
  return rep;
}

bool interior_characterization_holds(const SubequationOracle& F, const Vec& x, const Jet& J) {
  const Classification c = F.classify(x, J);
  bool shifted_member = false;
  for (double eta : kEtaGrid) {
    if (F.classify(x, J - F.J0 * eta) != Classification::Outside) {
      shifted_member = true;
      break;
    }
  }
  if (c == Classification::Inside) return shifted_member;
  if (c == Classification::Outside) return !shifted_member;
  return true;  // boundary band: no claim
}

}  // namespace jetcone
