#include "jetcone/garding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace jetcone {

HyperbolicPolynomial::HyperbolicPolynomial(std::vector<Monomial> monomials, Vec direction,
                                           bool normalize)
    : monomials_(std::move(monomials)), a_(std::move(direction)) {
  if (monomials_.empty()) throw std::invalid_argument("HyperbolicPolynomial: no monomials");
  n_ = static_cast<int>(a_.size());
  m_ = 0;
  for (const Monomial& mo : monomials_) {
    if (static_cast<int>(mo.exponents.size()) != n_)
      throw std::invalid_argument("HyperbolicPolynomial: exponent arity mismatch");
    int deg = 0;
    for (int e : mo.exponents) deg += e;
    if (m_ == 0) m_ = deg;
    if (deg != m_)
      throw std::invalid_argument("HyperbolicPolynomial: monomials must share one degree");
  }
  if (m_ < 1 || m_ > 4)
    throw std::invalid_argument("HyperbolicPolynomial: degree must be in [1,4]");
  const double ga = evaluate(a_);
  if (ga <= 0) throw std::invalid_argument("HyperbolicPolynomial: g(a) must be positive");
  if (normalize && std::abs(ga - 1.0) > 0) {
    for (Monomial& mo : monomials_) mo.coeff /= ga;
  }
  normalized_ = std::abs(evaluate(a_) - 1.0) < 1e-12;
}

HyperbolicPolynomial HyperbolicPolynomial::wave2() {
  return HyperbolicPolynomial({{1.0, {2, 0}}, {-1.0, {0, 2}}}, {1.0, 0.0});
}

HyperbolicPolynomial HyperbolicPolynomial::det2() {
  // det [[x0, x1], [x1, x2]] = x0*x2 - x1^2, direction = identity (1, 0, 1).
  return HyperbolicPolynomial({{1.0, {1, 0, 1}}, {-1.0, {0, 2, 0}}}, {1.0, 0.0, 1.0});
}

double HyperbolicPolynomial::evaluate(const Vec& p) const {
  double s = 0;
  for (const Monomial& mo : monomials_) {
    double t = mo.coeff;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < mo.exponents[i]; ++e) t *= p[i];
    s += t;
  }
  return s;
}

nlohmann::json HyperbolicPolynomial::to_json() const {
  nlohmann::json j;
  auto arr = nlohmann::json::array();
  for (const Monomial& mo : monomials_)
    arr.push_back({{"coeff", mo.coeff}, {"exponents", mo.exponents}});
  j["monomials"] = arr;
  j["direction"] = a_;
  return j;
}

HyperbolicPolynomial HyperbolicPolynomial::from_json(const nlohmann::json& j) {
  std::vector<Monomial> ms;
  for (const auto& e : j.at("monomials"))
    ms.push_back({e.at("coeff").get<double>(), e.at("exponents").get<std::vector<int>>()});
  return HyperbolicPolynomial(std::move(ms), j.at("direction").get<Vec>());
}

namespace {

using cplx = std::complex<double>;

// Coefficients of the univariate restriction q(t) = g(ta + p), ascending
// powers, via evaluation at t = 0..m and a small Vandermonde solve.
Vec restriction_coefficients(const HyperbolicPolynomial& g, const Vec& p) {
  const int m = g.degree();
  std::vector<Vec> V(m + 1, Vec(m + 1, 0.0));
  Vec rhs(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i);
    double tp = 1.0;
    for (int k = 0; k <= m; ++k) {
      V[i][k] = tp;
      tp *= t;
    }
    rhs[i] = g.evaluate(axpy(t, g.direction(), p));
  }
  // Gaussian elimination (tiny system).
  for (int col = 0; col <= m; ++col) {
    int piv = col;
    for (int r = col + 1; r <= m; ++r)
      if (std::abs(V[r][col]) > std::abs(V[piv][col])) piv = r;
    std::swap(V[piv], V[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r <= m; ++r) {
      const double f = V[r][col] / V[col][col];
      for (int c = col; c <= m; ++c) V[r][c] -= f * V[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  Vec c(m + 1);
  for (int r = m; r >= 0; --r) {
    double s = rhs[r];
    for (int k = r + 1; k <= m; ++k) s -= V[r][k] * c[k];
    c[r] = s / V[r][r];
  }
  return c;
}

cplx poly_eval(const Vec& c, cplx z) {
  cplx s = 0;
  for (size_t k = c.size(); k-- > 0;) s = s * z + c[k];
  return s;
}

cplx poly_deriv_eval(const Vec& c, cplx z) {
  cplx s = 0;
  for (size_t k = c.size(); k-- > 1;) s = s * z + c[k] * static_cast<double>(k);
  return s;
}

// Aberth–Ehrlich simultaneous root iteration for degree 3–4 restrictions.
std::vector<cplx> aberth_roots(const Vec& c) {
  const int m = static_cast<int>(c.size()) - 1;
  double scale = 0;
  for (int k = 0; k < m; ++k) scale = std::max(scale, std::abs(c[k] / c[m]));
  const double radius = 1.0 + scale;
  std::vector<cplx> z(m);
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * M_PI * (i + 0.5) / m + 0.4;
    z[i] = radius * cplx(std::cos(th), std::sin(th));
  }
  const double res_tol = 1e-12 * (1.0 + std::abs(c[m]) * std::pow(radius, m));
  for (int it = 0; it < 200; ++it) {
    bool done = true;
    for (int i = 0; i < m; ++i) {
      const cplx pv = poly_eval(c, z[i]);
      if (std::abs(pv) > res_tol) done = false;
      const cplx dv = poly_deriv_eval(c, z[i]);
      if (std::abs(dv) == 0.0) continue;
      const cplx ratio = pv / dv;
      cplx sum = 0;
      for (int j = 0; j < m; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      z[i] -= ratio / (1.0 - ratio * sum);
    }
    if (done) break;
  }
  return z;
}

}  // namespace

GardingEigenvalues garding_eigenvalues(const HyperbolicPolynomial& g, const Vec& p) {
  const Vec c = restriction_coefficients(g, p);
  const int m = g.degree();
  Vec roots;
  if (m == 1) {
    roots = {-c[0] / c[1]};
  } else if (m == 2) {
    // Write g(x) = x^T G x. The naive discriminant c1^2 - 4 c2 c0 cancels
    // catastrophically near double roots; the quadratic form
    //   disc/4 = <a,Gp>^2 - g(a) g(p) = p^T (Ga (Ga)^T - g(a) G) p
    // expands the cancellation symbolically and keeps double roots exact.
    const int nn = g.n();
    SymMatrix G(nn);
    for (const Monomial& mo : g.monomials()) {
      int i = -1, j = -1;
      for (int k = 0; k < nn; ++k) {
        if (mo.exponents[k] == 2) i = j = k;
        if (mo.exponents[k] == 1) (i < 0 ? i : j) = k;
      }
      if (i == j)
        G.set(i, i, G(i, i) + mo.coeff);
      else
        G.set(i, j, G(i, j) + 0.5 * mo.coeff);
    }
    const Vec& a = g.direction();
    Vec Ga(nn, 0.0);
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) Ga[i] += G(i, j) * a[j];
    const double ga = dot(a, Ga);  // = c2
    const double b = dot(Ga, p);   // = c1 / 2
    double disc4 = 0.0;
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) disc4 += (Ga[i] * Ga[j] - ga * G(i, j)) * p[i] * p[j];
    const double tol = 1e-10 * (1.0 + b * b + std::abs(ga) * (1.0 + std::abs(c[0])));
    if (disc4 < -tol) {
      std::ostringstream os;
      os << "garding_eigenvalues: complex roots (disc/4=" << disc4 << ") at p = (";
      for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
      os << "): hyperbolicity violated";
      throw std::runtime_error(os.str());
    }
    const double sq = std::sqrt(std::max(disc4, 0.0));
    roots = {(-b - sq) / ga, (-b + sq) / ga};
  } else {
    double rmax = 0;
    for (const auto& z : aberth_roots(c)) {
      rmax = std::max(rmax, std::abs(z.real()));
      roots.push_back(z.real());
      if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real()))) {
        std::ostringstream os;
        os << "garding_eigenvalues: root " << z.real() << "+" << z.imag()
           << "i beyond the reality tolerance: hyperbolicity violated";
        throw std::runtime_error(os.str());
      }
    }
    (void)rmax;
  }
  GardingEigenvalues ev;
  for (double t : roots) ev.values.push_back(-t);
  std::sort(ev.values.begin(), ev.values.end());
  return ev;
}

Classification garding_cone_contains(const HyperbolicPolynomial& g, const Vec& p) {
  const double l1 = garding_eigenvalues(g, p).values.front();
  return classify_margin(l1, tau_mem(norm2(p)));
}

MonotonicityCone garding_monotonicity_cone(
    const HyperbolicPolynomial& g, const std::optional<std::vector<Vec>>& halfspaces) {
  std::vector<Vec> normals;
  if (halfspaces) {
    normals = *halfspaces;
  } else if (g.degree() == 2 && g.n() == 2) {
    // Diagonal form c1 p1^2 + c2 p2^2 with c1 > 0 > c2 (direction e1):
    // lambda_1(p) = sqrt(c1) p1 - sqrt(-c2) |p2|, a wedge with two faces.
    const double c1 = g.evaluate({1.0, 0.0});
    const double c2 = g.evaluate({0.0, 1.0});
    const double cross = g.evaluate({1.0, 1.0}) - c1 - c2;
    if (c1 <= 0 || c2 >= 0 || std::abs(cross) > 1e-12)
      throw std::invalid_argument(
          "garding_monotonicity_cone: only diagonal c1 p1^2 + c2 p2^2 forms are derivable; "
          "supply halfspaces");
    const double k = std::sqrt(-c2 / c1);
    normals = {{1.0, k}, {1.0, -k}};
  } else {
    throw std::invalid_argument(
        "garding_monotonicity_cone: cone is not polyhedral-derivable; supply halfspaces");
  }
  DirectionalCone D(g.n(), normals);
  // Cross-check the polyhedral membership against the eigenvalue sign.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    Vec p(g.n());
    for (double& v : p) v = u(rng);
    const Classification spec = garding_cone_contains(g, p);
    const Classification poly = D.classify(p);
    if (spec != poly && spec != Classification::Boundary &&
        poly != Classification::Boundary) {
      throw std::runtime_error(
          "garding_monotonicity_cone: halfspace description disagrees with the "
          "eigenvalue sign");
    }
  }
  return MonotonicityCone::Dir(std::move(D));
}

}  // namespace jetcone
