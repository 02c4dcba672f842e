#include "jetcone/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace jetcone {

Jet OperatorPair::sample_admissible(const Vec& x, JetSampler& s, int max_tries) const {
  for (int i = 0; i < max_tries; ++i) {
    Jet J = s.jet();
    if (constraint_classify(x, J) != Classification::Outside) return J;
  }
  throw std::runtime_error("OperatorPair: failed to sample an admissible jet");
}

Report check_regularity_UCF(const OperatorPair& P, const BoxDomain& Om, double eta,
                            long samples, uint64_t seed) {
  Report rep;
  rep.law = "UCF regularity: F(y, J + eta*J0) >= F(x, J) for |x-y| < delta";
  rep.samples = samples;

  const Jet shift = P.J0 * eta;

  auto test = [&](double delta, std::vector<Violation>* out) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    JetSampler js(P.n, 10.0, seed + 1);
    bool ok = true;
    for (long i = 0; i < samples; ++i) {
      Vec x(Om.dim()), y(Om.dim());
      for (int d = 0; d < Om.dim(); ++d)
        x[d] = Om.lower()[d] + u01(rng) * (Om.upper()[d] - Om.lower()[d]);
      Vec dir(Om.dim());
      for (double& v : dir) v = gauss(rng);
      const double len = std::max(norm2(dir), 1e-12);
      const double step = u01(rng) * delta * 0.999;
      bool inside = true;
      for (int d = 0; d < Om.dim(); ++d) {
        y[d] = x[d] + step * dir[d] / len;
        if (y[d] < Om.lower()[d] || y[d] > Om.upper()[d]) inside = false;
      }
      if (!inside) continue;
      Jet J;
      try {
        J = P.sample_admissible(x, js);
      } catch (const std::runtime_error&) {
        continue;
      }
      const double lhs = P.evaluate(y, J + shift);
      const double rhs = P.evaluate(x, J);
      const double slack = 1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs));
      if (lhs < rhs - slack) {
        ok = false;
        if (out && out->size() < 10)
          out->push_back({x, J, "F(y, J+etaJ0) < F(x, J) at distance " + std::to_string(step)});
        if (!out) return false;
      }
    }
    return ok;
  };

  const double lo0 = Om.h();
  const double hi0 = Om.diameter();
  double measured = 0;
  if (P.constant_coefficient || test(hi0, nullptr)) {
    measured = hi0;
  } else if (!test(lo0, &rep.violations)) {
    measured = 0;
  } else {
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 20; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (test(mid, nullptr))
        lo = mid;
      else
        hi = mid;
    }
    measured = lo;
  }
  rep.extra()["eta"] = eta;
  rep.extra()["delta"] = measured;
  if (measured <= 0 && rep.violations.empty())
    rep.violations.push_back({{}, Jet(), "no delta >= lattice spacing works"});
  return rep;
}

CorrespondenceSubequation build_correspondence(const OperatorPair& P) {
  CorrespondenceSubequation C;
  C.base = P;
  SubequationOracle F;
  F.n = P.n;
  F.M = P.M;
  F.J0 = P.J0;
  F.name = P.name;
  F.constant_fiber = P.constant_coefficient;
  F.domain = P.domain;
  const OperatorPair base = P;
  F.classify = [base](const Vec& x, const Jet& J) {
    const Classification g = base.constraint_classify(x, J);
    if (g == Classification::Outside) return Classification::Outside;
    const double v = base.evaluate(x, J);
    const double tau = tau_mem(jet_norm(J));
    if (v < -tau) return Classification::Outside;
    if (g == Classification::Inside && v > tau) return Classification::Inside;
    return Classification::Boundary;
  };
  C.oracle = std::move(F);
  return C;
}

OperatorPair make_ot_operator(std::function<double(const Vec&)> g,
                              std::function<double(const Vec&)> f, DirectionalCone D,
                              Vec qbar, Modulus omega, BoxDomain domain) {
  OperatorPair P;
  P.name = "optimal-transport";
  P.n = D.n();
  P.domain = domain;
  P.M = MonotonicityCone::DP(D);
  P.J0 = Jet(0.0, qbar, SymMatrix::identity(P.n));
  if (P.M.classify(P.J0) != Classification::Inside)
    throw std::invalid_argument("make_ot_operator: (0, qbar, I) is not interior to M(D,P)");

  // Directionality checks: g >= 0 on D and g(p + eta*qbar) >= g(p) + omega(eta).
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int checked = 0;
    for (int i = 0; i < 20000 && checked < 2000; ++i) {
      Vec p(P.n);
      for (double& v : p) v = u(rng);
      if (D.classify(p) == Classification::Outside) continue;
      ++checked;
      if (g(p) < 0)
        throw std::invalid_argument("make_ot_operator: g < 0 on the cone (witness found)");
      for (double eta : {1.0, 0.1, 0.01}) {
        const double lhs = g(add(p, scale(eta, qbar)));
        const double rhs = g(p) + omega(eta);
        if (lhs < rhs - 1e-9 * (1.0 + std::abs(rhs)))
          throw std::invalid_argument(
              "make_ot_operator: strict directionality g(p+eta*qbar) >= g(p)+omega(eta) "
              "fails on a sample");
      }
    }
  }
  // f >= 0 on the lattice.
  for (size_t i = 0; i < domain.size(); ++i)
    if (f(domain.point(i)) < 0)
      throw std::invalid_argument("make_ot_operator: f must be nonnegative");

  const int nblk = P.n;
  P.evaluate = [g, f, nblk](const Vec& x, const Jet& J) {
    return g(J.p) * det(J.A) - f(x);
  };
  const MonotonicityCone G = P.M;  // fiber of G is the constant cone R x D x P
  P.constraint = [G](const Vec&, const Jet& J) { return G.classify(J); };
  return P;
}

OperatorPair make_krylov_operator(std::function<double(const Vec&)> f, int n_space,
                                  BoxDomain domain) {
  OperatorPair P;
  P.name = "krylov-parabolic";
  P.n = n_space + 1;
  P.domain = domain;
  P.M = MonotonicityCone::parabolic(n_space);
  P.J0 = P.M.interior_jet();
  for (size_t i = 0; i < domain.size(); ++i)
    if (f(domain.point(i)) < 0)
      throw std::invalid_argument("make_krylov_operator: f must be nonnegative");
  P.evaluate = [f, n_space](const Vec& x, const Jet& J) {
    return -J.p[n_space] * det(J.A.block(n_space)) - f(x);
  };
  const MonotonicityCone G = P.M;
  P.constraint = [G](const Vec&, const Jet& J) { return G.classify(J); };
  return P;
}

OperatorPair make_pma_operator(std::function<Vec(const Vec&)> b,
                               std::function<SymMatrix(const Vec&)> Pfield,
                               std::function<double(const Vec&)> f, Vec nu,
                               BoxDomain domain) {
  OperatorPair P;
  P.name = "perturbed-monge-ampere";
  P.n = domain.dim();
  P.domain = domain;

  // D = ∩_x { <b(x), p> >= 0 } over the lattice of b-samples, deduplicated.
  std::vector<Vec> normals;
  for (size_t i = 0; i < domain.size(); ++i) {
    Vec bx = b(domain.point(i));
    const double len = norm2(bx);
    if (len < 1e-12) continue;  // zero of b constrains nothing
    bx = scale(1.0 / len, bx);
    if (dot(bx, nu) <= 0)
      throw std::invalid_argument(
          "make_pma_operator: <b(x), nu> > 0 fails on the lattice; empty-interior cone");
    bool dup = false;
    for (const Vec& m : normals)
      if (norm2(sub(m, bx)) < 1e-9) dup = true;
    if (!dup) normals.push_back(bx);
  }
  // Keep the cone simplicial when possible: a crude reduction to at most n
  // extreme normals would lose faces, so only the generator-based operations
  // are restricted for many-faced cones.
  DirectionalCone D = normals.empty()
                          ? DirectionalCone::full_space(P.n)
                          : DirectionalCone(P.n, normals, nu);
  P.M = MonotonicityCone::DP(std::move(D));
  P.J0 = Jet(0.0, nu, SymMatrix::identity(P.n));
  if (P.M.classify(P.J0) != Classification::Inside)
    throw std::invalid_argument("make_pma_operator: (0, nu, I) is not interior to M(D,P)");

  for (size_t i = 0; i < domain.size(); ++i) {
    const Vec x = domain.point(i);
    if (lambda_min(Pfield(x)) < -1e-12)
      throw std::invalid_argument("make_pma_operator: P(x) must be PSD");
    if (f(x) < 0) throw std::invalid_argument("make_pma_operator: f must be nonnegative");
  }

  auto perturbed = [b, Pfield](const Vec& x, const Jet& J) {
    return J.A + Pfield(x) * dot(b(x), J.p);
  };
  P.evaluate = [perturbed, f](const Vec& x, const Jet& J) {
    return det(perturbed(x, J)) - f(x);
  };
  P.constraint = [perturbed](const Vec& x, const Jet& J) {
    return classify_margin(lambda_min(perturbed(x, J)), tau_mem(jet_norm(J)));
  };
  return P;
}

OperatorPair make_garding_operator(const HyperbolicPolynomial& g, BoxDomain domain) {
  OperatorPair P;
  P.name = "garding-" + std::to_string(g.degree());
  P.n = g.n();
  P.domain = domain;
  P.M = garding_monotonicity_cone(g);
  P.J0 = P.M.interior_jet();
  P.constant_coefficient = true;
  const HyperbolicPolynomial gg = g;
  P.evaluate = [gg](const Vec&, const Jet& J) { return gg.evaluate(J.p); };
  const MonotonicityCone G = P.M;
  P.constraint = [G](const Vec&, const Jet& J) { return G.classify(J); };
  return P;
}

}  // namespace jetcone
