#include "jetcone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace jetcone {

MonotonicityCone::MonotonicityCone(int n, std::optional<double> gamma,
                                   std::optional<DirectionalCone> D, ACon acon, double R,
                                   int a_block)
    : n_(n), gamma_(gamma), D_(std::move(D)), acon_(acon), R_(R), a_block_(a_block) {
  if (!gamma_ && !D_ && acon_ == ACon::None)
    throw std::invalid_argument("MonotonicityCone: at least one generator required");
  if (gamma_ && *gamma_ < 0) throw std::invalid_argument("MonotonicityCone: gamma < 0");
  if (acon_ == ACon::Radius && R_ <= 0)
    throw std::invalid_argument("MonotonicityCone: R must be positive");
  if (D_ && D_->n() != n) throw std::invalid_argument("MonotonicityCone: D dimension mismatch");
  if (a_block_ < 0 || a_block_ > n) throw std::invalid_argument("MonotonicityCone: bad a_block");
}

MonotonicityCone MonotonicityCone::P(int n) {
  return MonotonicityCone(n, std::nullopt, std::nullopt, ACon::PSD);
}
MonotonicityCone MonotonicityCone::N(int n) {
  return MonotonicityCone(n, 0.0, std::nullopt, ACon::None);
}
MonotonicityCone MonotonicityCone::Gamma(int n, double gamma) {
  return MonotonicityCone(n, gamma, std::nullopt, ACon::None);
}
MonotonicityCone MonotonicityCone::Dir(DirectionalCone D) {
  const int n = D.n();
  return MonotonicityCone(n, std::nullopt, std::move(D), ACon::None);
}
MonotonicityCone MonotonicityCone::Radius(int n, double R) {
  return MonotonicityCone(n, std::nullopt, std::nullopt, ACon::Radius, R);
}
MonotonicityCone MonotonicityCone::Q(int n) {
  return MonotonicityCone(n, 0.0, std::nullopt, ACon::PSD);
}
MonotonicityCone MonotonicityCone::DP(DirectionalCone D) {
  const int n = D.n();
  return MonotonicityCone(n, std::nullopt, std::move(D), ACon::PSD);
}
MonotonicityCone MonotonicityCone::NDP(DirectionalCone D) {
  const int n = D.n();
  return MonotonicityCone(n, 0.0, std::move(D), ACon::PSD);
}
MonotonicityCone MonotonicityCone::fundamental(double gamma, DirectionalCone D, double R) {
  const int n = D.n();
  return MonotonicityCone(n, gamma, std::move(D), ACon::Radius, R);
}
MonotonicityCone MonotonicityCone::fundamental_inf(double gamma, DirectionalCone D) {
  const int n = D.n();
  return MonotonicityCone(n, gamma, std::move(D), ACon::PSD);
}
MonotonicityCone MonotonicityCone::parabolic(int n_space) {
  const int n = n_space + 1;
  Vec nu(n, 0.0);
  nu[n - 1] = -1.0;  // p_{n+1} <= 0
  return MonotonicityCone(n, std::nullopt, DirectionalCone::halfspace(nu), ACon::PSD, 0.0,
                          n_space);
}

double MonotonicityCone::margin(const Jet& J) const {
  double m = kInf;
  const double pn = norm2(J.p);
  if (gamma_) m = std::min(m, -(*gamma_) * pn - J.r);
  if (D_) m = std::min(m, D_->margin(J.p));
  if (acon_ != ACon::None) {
    const SymMatrix blk = a_block_ ? J.A.block(a_block_) : J.A;
    double lm = lambda_min(blk);
    if (acon_ == ACon::Radius) lm -= pn / R_;
    m = std::min(m, lm);
  }
  return m;
}

double MonotonicityCone::dual_margin(const Jet& J) const {
  // Dual of an intersection is the union of the generator duals.
  double m = -kInf;
  const double pn = norm2(J.p);
  if (gamma_) m = std::max(m, (*gamma_) * pn - J.r);  // dual of r <= -gamma|p|
  if (D_) {
    // Dual of {p in D} is {p : -p not interior to D}.
    if (D_->is_full_space()) {
      m = std::max(m, -kInf);  // degenerate: dual fiber empty
    } else {
      m = std::max(m, -D_->margin(scale(-1.0, J.p)));
    }
  }
  if (acon_ != ACon::None) {
    SymMatrix blk = a_block_ ? J.A.block(a_block_) : J.A;
    if (acon_ == ACon::Radius) blk = blk + SymMatrix::identity(blk.n()) * (pn / R_);
    m = std::max(m, lambda_max(blk));
  }
  return m;
}

Classification MonotonicityCone::classify(const Jet& J) const {
  return classify_margin(margin(J), tau_mem(jet_norm(J)));
}

Classification MonotonicityCone::dual_classify(const Jet& J) const {
  return classify_margin(dual_margin(J), tau_mem(jet_norm(J)));
}

Jet MonotonicityCone::interior_jet() const {
  Vec p(n_, 0.0);
  if (D_ && !D_->is_full_space()) {
    p = D_->witness();
    const double l = norm2(p);
    p = scale(1.0 / l, p);
  }
  double r = 0.0;
  if (gamma_) r = -(*gamma_) * norm2(p) - 1.0;
  SymMatrix A = SymMatrix::identity(n_);
  if (acon_ == ACon::Radius) A = A * (1.0 + norm2(p) / R_);
  Jet J(r, p, A);
  if (classify(J) != Classification::Inside)
    throw std::runtime_error("MonotonicityCone: failed to construct an interior jet");
  return J;
}

bool MonotonicityCone::refines(const MonotonicityCone& other) const {
  if (other.gamma_ && (!gamma_ || *gamma_ < *other.gamma_)) return false;
  if (other.D_ && !other.D_->is_full_space()) {
    if (!D_) return false;
    // D ⊆ D_other required; verified on our generators when available.
    if (!D_->has_generators()) return false;
    for (const Vec& g : D_->generators())
      if (other.D_->classify(g) == Classification::Outside) return false;
  }
  if (other.acon_ == ACon::PSD && acon_ == ACon::None) return false;
  if (other.acon_ == ACon::Radius &&
      (acon_ != ACon::Radius || R_ > other.R_)) return false;
  return true;
}

nlohmann::json MonotonicityCone::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["gamma"] = gamma_ ? nlohmann::json(*gamma_) : nlohmann::json();
  if (acon_ == ACon::None)
    j["R"] = nlohmann::json();
  else if (acon_ == ACon::PSD)
    j["R"] = "inf";
  else
    j["R"] = R_;
  if (D_) {
    j["normals"] = nlohmann::json::array();
    for (const Vec& nu : D_->normals()) j["normals"].push_back(nu);
    if (D_->has_generators()) {
      j["generators"] = nlohmann::json::array();
      for (const Vec& g : D_->generators()) j["generators"].push_back(g);
    }
  } else {
    j["normals"] = nlohmann::json();
  }
  if (a_block_) j["a_block"] = a_block_;
  return j;
}

MonotonicityCone MonotonicityCone::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::optional<double> gamma;
  if (j.contains("gamma") && !j["gamma"].is_null()) gamma = j["gamma"].get<double>();
  ACon acon = ACon::None;
  double R = 0;
  if (j.contains("R") && !j["R"].is_null()) {
    if (j["R"].is_string()) {
      if (j["R"].get<std::string>() != "inf")
        throw std::invalid_argument("cone JSON: R must be a number or \"inf\"");
      acon = ACon::PSD;
    } else {
      acon = ACon::Radius;
      R = j["R"].get<double>();
    }
  }
  std::optional<DirectionalCone> D;
  if (j.contains("normals") && !j["normals"].is_null()) {
    std::vector<Vec> normals;
    for (const auto& row : j["normals"]) normals.push_back(row.get<Vec>());
    D = DirectionalCone(n, std::move(normals));
  }
  const int a_block = j.value("a_block", 0);
  return MonotonicityCone(n, gamma, std::move(D), acon, R, a_block);
}

double StrictApproximator::value(const Vec& x) const {
  switch (kind) {
    case ApproximatorKind::Quadratic:
      return dot(qbar, x) + alpha * dot(x, x) - shift;
    case ApproximatorKind::Radial: {
      const Vec d = sub(x, center);
      return alpha * dot(d, d) - shift;
    }
    case ApproximatorKind::Parabolic: {
      const double t = x.back();
      if (t >= T) return -kInf;
      double s = 0;
      for (size_t i = 0; i + 1 < x.size(); ++i) s += x[i] * x[i];
      return s - 1.0 / (T - t) - shift;
    }
    case ApproximatorKind::Directional: {
      if (x[0] <= a) return -kInf;
      return 1.0 / (a - x[0]) - shift;
    }
  }
  return -kInf;
}

bool StrictApproximator::blows_up_at(const Vec& x) const {
  if (kind == ApproximatorKind::Parabolic) return x.back() >= T;
  if (kind == ApproximatorKind::Directional) return x[0] <= a;
  return false;
}

Jet StrictApproximator::jet(const Vec& x) const {
  if (blows_up_at(x)) throw std::domain_error("StrictApproximator: jet on blowup set");
  const int n = static_cast<int>(x.size());
  switch (kind) {
    case ApproximatorKind::Quadratic: {
      Vec p = add(qbar, scale(2.0 * alpha, x));
      return Jet(value(x), p, SymMatrix::identity(n) * (2.0 * alpha));
    }
    case ApproximatorKind::Radial: {
      Vec p = scale(2.0 * alpha, sub(x, center));
      return Jet(value(x), p, SymMatrix::identity(n) * (2.0 * alpha));
    }
    case ApproximatorKind::Parabolic: {
      const double t = x.back();
      Vec p(n, 0.0);
      SymMatrix A(n);
      for (int i = 0; i + 1 < n; ++i) {
        p[i] = 2.0 * x[i];
        A.set(i, i, 2.0);
      }
      p[n - 1] = -1.0 / ((T - t) * (T - t));
      return Jet(value(x), p, A);
    }
    case ApproximatorKind::Directional: {
      const double s = x[0] - a;  // > 0 off the blowup set
      Vec p(n, 0.0);
      p[0] = 1.0 / (s * s);
      SymMatrix A(n);
      A.set(0, 0, -2.0 / (s * s * s));
      return Jet(value(x), p, A);
    }
  }
  throw std::logic_error("StrictApproximator: unknown kind");
}

nlohmann::json StrictApproximator::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case ApproximatorKind::Quadratic:
      j["kind"] = "quadratic";
      j["qbar"] = qbar;
      j["alpha"] = alpha;
      break;
    case ApproximatorKind::Radial:
      j["kind"] = "radial";
      j["center"] = center;
      j["alpha"] = alpha;
      break;
    case ApproximatorKind::Parabolic:
      j["kind"] = "parabolic";
      j["T"] = T;
      break;
    case ApproximatorKind::Directional:
      j["kind"] = "directional";
      j["a"] = a;
      break;
  }
  j["shift"] = shift;
  j["blowup_set"] = blowup_set;
  return j;
}

namespace {

// True if the jets of psi classify Inside at every lattice point off the
// blowup set.
bool validate(const StrictApproximator& psi, const MonotonicityCone& M,
              const BoxDomain& Om) {
  for (size_t i = 0; i < Om.size(); ++i) {
    const Vec x = Om.point(i);
    if (psi.blows_up_at(x)) continue;
    if (M.classify(psi.jet(x)) != Classification::Inside) return false;
  }
  return true;
}

void apply_r_shift(StrictApproximator& psi, const MonotonicityCone& M,
                   const BoxDomain& Om) {
  if (!M.has_r_constraint()) return;
  const double gamma = *M.gamma();
  double need = -kInf;
  for (size_t i = 0; i < Om.size(); ++i) {
    const Vec x = Om.point(i);
    if (psi.blows_up_at(x)) continue;
    const Jet J = psi.jet(x);
    need = std::max(need, J.r + gamma * norm2(J.p));
  }
  psi.shift += need + 1.0;
}

}  // namespace

StrictApproximator strict_approximator(const MonotonicityCone& M, const BoxDomain& Om,
                                       ApproximatorMode mode) {
  if (M.n() != Om.dim())
    throw std::invalid_argument("strict_approximator: dimension mismatch");

  StrictApproximator psi;

  if (mode == ApproximatorMode::Parabolic) {
    const bool spacetime = M.a_block() < M.n() && M.acon() != MonotonicityCone::ACon::None;
    if (spacetime) {
      psi.kind = ApproximatorKind::Parabolic;
      psi.T = Om.upper().back();
      psi.blowup_set = "top slice {t = T}";
    } else if (M.acon() == MonotonicityCone::ACon::None && M.D() && !M.has_r_constraint()) {
      psi.kind = ApproximatorKind::Directional;
      psi.a = Om.lower()[0];
      psi.blowup_set = "face {x_1 = a}";
    } else {
      throw std::invalid_argument(
          "strict_approximator: no blowup template for this cone (expected a "
          "space-time cone or a pure gradient cone)");
    }
    apply_r_shift(psi, M, Om);
    if (!validate(psi, M, Om))
      throw std::runtime_error("strict_approximator: parabolic template not strictly interior");
    return psi;
  }

  // Elliptic mode.
  if (M.acon() == MonotonicityCone::ACon::Radius) {
    // Domain must fit inside a translate of D ∩ B_R.
    psi.kind = ApproximatorKind::Radial;
    psi.alpha = 0.5;
    Vec c(Om.dim());
    for (int d = 0; d < Om.dim(); ++d) c[d] = 0.5 * (Om.lower()[d] + Om.upper()[d]);
    Vec dir(Om.dim(), 0.0);
    if (M.D() && !M.D()->is_full_space()) {
      dir = M.D()->witness();
      dir = scale(1.0 / norm2(dir), dir);
    }
    // Walk the center backwards along -dir until every x - y0 is interior to
    // D, then check the radius bound.
    double best = -1;
    for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const Vec y0 = sub(c, scale(s, dir));
      bool ok = true;
      double rad = 0;
      for (size_t i = 0; i < Om.size() && ok; ++i) {
        const Vec d = sub(Om.point(i), y0);
        rad = std::max(rad, norm2(d));
        if (M.D() && M.D()->classify(d) != Classification::Inside) ok = false;
      }
      if (ok && rad < M.R()) {
        psi.center = y0;
        best = rad;
        break;
      }
    }
    if (best < 0)
      throw std::runtime_error(
          "strict_approximator: R is finite and the domain does not fit in a "
          "translate of the truncated cone D ∩ B_R; no approximator exists");
  } else if (M.D() && !M.D()->is_full_space()) {
    psi.kind = ApproximatorKind::Quadratic;
    psi.qbar = M.D()->witness();
    double supx = 0;
    for (size_t i = 0; i < Om.size(); ++i) supx = std::max(supx, norm2(Om.point(i)));
    double mmin = kInf;
    for (const Vec& nu : M.D()->normals()) mmin = std::min(mmin, dot(nu, psi.qbar));
    psi.alpha = mmin / (4.0 * std::max(supx, 1e-9));
  } else {
    psi.kind = ApproximatorKind::Radial;
    psi.alpha = 1.0;
    psi.center.assign(Om.dim(), 0.0);
  }

  for (int tries = 0; tries < 60; ++tries) {
    StrictApproximator cand = psi;
    apply_r_shift(cand, M, Om);
    if (validate(cand, M, Om)) return cand;
    psi.alpha *= 0.5;
    if (psi.alpha < 1e-300) break;
  }
  throw std::runtime_error("strict_approximator: no valid template found for this cone");
}

}  // namespace jetcone
