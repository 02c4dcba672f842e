#include "jetcone/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "jetcone/reference.hpp"

namespace jetcone {

Report classical_subharmonic_check(const ClassicalFunction& phi, const SubequationOracle& F,
                                   const BoxDomain& Om, bool strict) {
  Report rep;
  rep.law = strict ? "classical strict subharmonicity" : "classical subharmonicity";
  long tested = 0;
  for (size_t i = 0; i < Om.size(); ++i) {
    if (Om.tag(i) != CellTag::Interior) continue;
    ++tested;
    const Vec x = Om.point(i);
    const Jet J = phi.jet(x);
    const Classification c = F.classify(x, J);
    const bool ok = strict ? (c == Classification::Inside) : (c != Classification::Outside);
    if (!ok) {
      rep.violations.push_back({x, J, "jet escaped the fiber"});
      break;  // first witness is enough
    }
  }
  rep.samples = tested;
  return rep;
}

namespace serial {

GridFunction sup_convolution(const GridFunction& u, double eps) {
  if (eps <= 0) throw std::invalid_argument("sup_convolution: eps must be positive");
  GridFunction out(u.domain);
  const size_t N = u.domain.size();
  for (size_t i = 0; i < N; ++i) {
    const Vec x = u.domain.point(i);
    double best = -kInf;
    for (size_t j = 0; j < N; ++j) {
      if (u.values[j] == -kInf) continue;
      const Vec y = u.domain.point(j);
      const Vec d = sub(y, x);
      best = std::max(best, u.values[j] - dot(d, d) / (2.0 * eps));
    }
    out.values[i] = best;
  }
  return out;
}

}  // namespace serial

GridFunction sup_convolution(const GridFunction& u, double eps) {
  if (eps <= 0) throw std::invalid_argument("sup_convolution: eps must be positive");
  const BoxDomain& Om = u.domain;
  const double M = u.max_abs();
  const double radius = 2.0 * std::sqrt(eps * M) + Om.h();
  const int reach = static_cast<int>(std::ceil(radius / Om.h()));
  const int dim = Om.dim();
  const auto& shape = Om.shape();

  GridFunction out(Om);
  const long N = static_cast<long>(Om.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < N; ++i) {
    const auto mi = Om.multi_index(static_cast<size_t>(i));
    const Vec x = Om.point(static_cast<size_t>(i));
    double best = -kInf;
    // scan the lattice box |y - x|_inf <= radius; the Euclidean ball test
    // below restores the exact ball restriction
    std::vector<int> lo(dim), cnt(dim), mj(dim);
    size_t total = 1;
    for (int d = 0; d < dim; ++d) {
      lo[d] = std::max(0, mi[d] - reach);
      const int hi = std::min(shape[d] - 1, mi[d] + reach);
      cnt[d] = hi - lo[d] + 1;
      total *= static_cast<size_t>(cnt[d]);
    }
    for (size_t k = 0; k < total; ++k) {
      size_t rem = k;
      for (int d = dim - 1; d >= 0; --d) {
        mj[d] = lo[d] + static_cast<int>(rem % cnt[d]);
        rem /= cnt[d];
      }
      const size_t j = Om.flat_index(mj);
      if (u.values[j] == -kInf) continue;
      double dist2 = 0;
      for (int d = 0; d < dim; ++d) {
        const double dd = (mj[d] - mi[d]) * Om.h();
        dist2 += dd * dd;
      }
      if (dist2 > radius * radius) continue;
      best = std::max(best, u.values[j] - dist2 / (2.0 * eps));
    }
    out.values[i] = best;
  }
  return out;
}

Report quasi_convexity_check(const GridFunction& u, double lambda) {
  Report rep;
  rep.law = "quasi-convexity: u + (lambda/2)|x|^2 has nonnegative second differences";
  if (lambda < 0) throw std::invalid_argument("quasi_convexity_check: lambda < 0");
  const BoxDomain& Om = u.domain;
  const int dim = Om.dim();
  auto w = [&](size_t i) {
    const Vec x = Om.point(i);
    return u.values[i] + 0.5 * lambda * dot(x, x);
  };
  // axis directions and all +/-1 diagonals
  std::vector<std::vector<int>> dirs;
  for (int d = 0; d < dim; ++d) {
    std::vector<int> v(dim, 0);
    v[d] = 1;
    dirs.push_back(v);
  }
  if (dim >= 2) {
    std::vector<int> v(dim, 0);
    std::function<void(int)> rec = [&](int d) {
      if (d == dim) {
        bool nonzero_pair = std::count_if(v.begin(), v.end(), [](int a) { return a != 0; }) >= 2;
        if (nonzero_pair) dirs.push_back(v);
        return;
      }
      for (int s : {-1, 0, 1}) {
        v[d] = s;
        rec(d + 1);
      }
    };
    rec(0);
  }
  const double scale = u.max_abs() + 0.5 * lambda * Om.diameter() * Om.diameter();
  long tested = 0;
  for (size_t i = 0; i < Om.size(); ++i) {
    const auto mi = Om.multi_index(i);
    for (const auto& v : dirs) {
      auto plus = mi, minus = mi;
      bool in = true;
      double v2 = 0;
      for (int d = 0; d < dim; ++d) {
        plus[d] += v[d];
        minus[d] -= v[d];
        v2 += v[d] * v[d];
        if (plus[d] < 0 || plus[d] >= Om.shape()[d] || minus[d] < 0 ||
            minus[d] >= Om.shape()[d])
          in = false;
      }
      if (!in) continue;
      ++tested;
      const double second =
          w(Om.flat_index(plus)) - 2.0 * w(i) + w(Om.flat_index(minus));
      if (second < -tol_fd(Om.h(), scale) * v2) {
        rep.violations.push_back(
            {Om.point(i), Jet(), "negative second difference " + std::to_string(second)});
        if (rep.violations.size() >= 5) {
          rep.samples = tested;
          return rep;
        }
      }
    }
  }
  rep.samples = tested;
  return rep;
}

GridFunction translate_perturb(const GridFunction& u, const Vec& y, double theta,
                               const StrictApproximator& psi, double delta) {
  const BoxDomain& Om = u.domain;
  if (norm2(y) >= delta)
    throw std::invalid_argument("translate_perturb: |y| must be smaller than delta");
  // Round the shift to the lattice.
  std::vector<int> step(Om.dim());
  for (int d = 0; d < Om.dim(); ++d) step[d] = static_cast<int>(std::lround(y[d] / Om.h()));
  const int margin_cells = static_cast<int>(std::ceil(delta / Om.h()));
  Vec lo = Om.lower(), hi = Om.upper();
  for (int d = 0; d < Om.dim(); ++d) {
    lo[d] += margin_cells * Om.h();
    hi[d] -= margin_cells * Om.h();
    if (hi[d] - lo[d] < Om.h())
      throw std::invalid_argument("translate_perturb: delta-shrunk domain is empty");
  }
  BoxDomain shrunk(lo, hi, Om.h());
  GridFunction out(shrunk);
  for (size_t i = 0; i < shrunk.size(); ++i) {
    const Vec x = shrunk.point(i);
    std::vector<int> src(Om.dim());
    for (int d = 0; d < Om.dim(); ++d) {
      const int idx = static_cast<int>(std::lround((x[d] - Om.lower()[d]) / Om.h()));
      src[d] = idx - step[d];
    }
    const double uval = u.values[Om.flat_index(src)];
    const double pval = psi.value(x);
    out.values[i] = (uval == -kInf || pval == -kInf) ? -kInf : uval + theta * pval;
  }
  return out;
}

Report directionality_check(const GridFunction& u, const DirectionalCone& D) {
  Report rep;
  rep.law = "directionality: u nondecreasing along polar-cone lattice steps";
  const BoxDomain& Om = u.domain;
  const int dim = Om.dim();
  // Lattice-representable polar generators: integer vectors (entries <= 4)
  // parallel to the cone's normals.
  std::vector<std::vector<int>> steps;
  int skipped = 0;
  for (const Vec& w : D.polar_generators()) {
    bool found = false;
    for (int scale_i = 1; scale_i <= 4 && !found; ++scale_i) {
      std::vector<int> m(dim);
      double maxc = 0;
      for (double c : w) maxc = std::max(maxc, std::abs(c));
      bool exact = true;
      for (int d = 0; d < dim; ++d) {
        const double t = w[d] / maxc * scale_i;
        m[d] = static_cast<int>(std::lround(t));
        if (std::abs(t - m[d]) > 1e-9) exact = false;
      }
      if (exact) {
        steps.push_back(m);
        found = true;
      }
    }
    if (!found) ++skipped;
  }
  rep.extra()["skipped_generators"] = skipped;
  if (steps.empty()) {
    rep.inconclusive = true;
    return rep;
  }
  const double tol = tol_fd(Om.h(), u.max_abs());
  long tested = 0;
  for (size_t i = 0; i < Om.size(); ++i) {
    const auto mi = Om.multi_index(i);
    for (const auto& m : steps) {
      auto mj = mi;
      bool in = true;
      for (int d = 0; d < dim; ++d) {
        mj[d] += m[d];
        if (mj[d] < 0 || mj[d] >= Om.shape()[d]) in = false;
      }
      if (!in) continue;
      ++tested;
      if (u.values[Om.flat_index(mj)] < u.values[i] - tol) {
        rep.violations.push_back({Om.point(i), Jet(), "u decreases along a polar direction"});
        if (rep.violations.size() >= 5) {
          rep.samples = tested;
          return rep;
        }
      }
    }
  }
  rep.samples = tested;
  return rep;
}

namespace {

struct SampledQuadratic {
  QuadraticFunction a;
  bool valid = false;
};

// Draws one class member around the domain center; constraints that depend on
// the additive constant are re-checked after the boundary-touching shift.
SampledQuadratic sample_class_member(const QuadraticClass& cls, const BoxDomain& Om,
                                     std::mt19937_64& rng) {
  const int n = Om.dim();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampledQuadratic s;
  s.a.x0.assign(n, 0.0);
  for (int d = 0; d < n; ++d) s.a.x0[d] = 0.5 * (Om.lower()[d] + Om.upper()[d]);
  s.a.p0.assign(n, 0.0);
  for (double& v : s.a.p0) v = 5.0 * u(rng);  // gradient ball radius 5
  s.a.A0 = SymMatrix(n);
  s.a.r0 = 5.0 * u(rng);

  switch (cls.kind) {
    case QuadraticClassKind::Aff:
    case QuadraticClassKind::AffPlus:
    case QuadraticClassKind::Plus:
      break;
    case QuadraticClassKind::AffPlusD: {
      // Da in -int D: draw from the interior witness with a small jitter.
      Vec w = cls.D->witness();
      w = scale(1.0 / norm2(w), w);
      Vec p = scale(-(1.5 + u(rng)), w);
      for (int tries = 0; tries < 50; ++tries) {
        Vec cand = p;
        for (double& v : cand) v += 0.2 * u(rng);
        if (cls.D->classify(scale(-1.0, cand)) == Classification::Inside) {
          s.a.p0 = cand;
          break;
        }
      }
      if (cls.D->classify(scale(-1.0, s.a.p0)) != Classification::Inside) return s;
      break;
    }
    case QuadraticClassKind::A_D: {
      Vec w = cls.D->witness();
      w = scale(1.0 / norm2(w), w);
      s.a.p0 = scale(-(0.5 + 2.0 * std::abs(u(rng))), w);
      if (cls.D->classify(scale(-1.0, s.a.p0)) == Classification::Outside) return s;
      break;
    }
    case QuadraticClassKind::A_gamma:
      break;  // value constraint a >= gamma|Da| is checked after shifting
    case QuadraticClassKind::A_R: {
      // D^2 a <= -(|Da|/R) I on Omega. With A0 = -kappa I the gradient is
      // p0 - kappa (x - x0), so kappa >= (|p0| + kappa*diam)/R suffices.
      const double diam = Om.diameter();
      const double denom = cls.R - diam;
      if (denom <= 0.05) return s;  // domain too large for this R sampler
      const double kappa = (norm2(s.a.p0) / denom) * (1.0 + std::abs(u(rng)));
      s.a.A0 = SymMatrix::identity(n) * (-kappa);
      break;
    }
    case QuadraticClassKind::A_Rmin: {
      // D^2 a = -(max |Da| / R) I, solved by fixed-point iteration.
      double m = norm2(s.a.p0);
      for (int it = 0; it < 100; ++it) {
        double mm = 0;
        for (size_t i = 0; i < Om.size(); ++i) {
          if (Om.tag(i) == CellTag::Interior) continue;  // extremes are on the boundary
          const Vec d = sub(Om.point(i), s.a.x0);
          mm = std::max(mm, norm2(axpy(-m / cls.R, d, s.a.p0)));
        }
        if (std::abs(mm - m) < 1e-12 * (1.0 + m)) {
          m = mm;
          break;
        }
        m = mm;
      }
      s.a.A0 = SymMatrix::identity(n) * (-m / cls.R);
      break;
    }
  }
  s.valid = true;
  return s;
}

// Class constraints that involve the values of a (re-checked post shift).
bool value_constraints_hold(const QuadraticClass& cls, const QuadraticFunction& a,
                            const BoxDomain& Om) {
  switch (cls.kind) {
    case QuadraticClassKind::AffPlus:
    case QuadraticClassKind::Plus:
    case QuadraticClassKind::AffPlusD:
      for (size_t i = 0; i < Om.size(); ++i)
        if (a.value(Om.point(i)) < 0) return false;
      return true;
    case QuadraticClassKind::A_gamma:
      for (size_t i = 0; i < Om.size(); ++i) {
        const Jet J = a.jet(Om.point(i));
        if (J.r < cls.gamma * norm2(J.p)) return false;
      }
      return true;
    default:
      return true;
  }
}

}  // namespace

Report sub_A_check(const GridFunction& u, const QuadraticClass& cls, const BoxDomain& Om,
                   int N_a, uint64_t seed) {
  Report rep;
  rep.law = "sub-A comparison: u <= a on the boundary forces u <= a inside";
  std::mt19937_64 rng(seed);
  const double tol = tol_fd(Om.h(), u.max_abs());
  long tested = 0, skipped = 0;
  for (int k = 0; k < N_a; ++k) {
    SampledQuadratic s = sample_class_member(cls, Om, rng);
    if (!s.valid) {
      ++skipped;
      continue;
    }
    // Raise a so that max over boundary cells of (u - a) is exactly 0. When
    // the boundary condition already holds (bmax <= 0) the member is kept as
    // is: lowering it could break the class's value constraints and is not
    // needed for a valid (just less sharp) comparison instance.
    double bmax = -kInf;
    for (size_t i = 0; i < Om.size(); ++i)
      if (Om.tag(i) != CellTag::Interior)
        bmax = std::max(bmax, u.values[i] - s.a.value(Om.point(i)));
    if (bmax > 0) s.a.r0 += bmax;
    if (!value_constraints_hold(cls, s.a, Om)) {
      ++skipped;
      continue;
    }
    ++tested;
    for (size_t i = 0; i < Om.size(); ++i) {
      if (Om.tag(i) != CellTag::Interior) continue;
      const double gap = u.values[i] - s.a.value(Om.point(i));
      if (gap > tol) {
        rep.violations.push_back(
            {Om.point(i), s.a.jet(Om.point(i)), "u pokes above the class member by " +
                                                    std::to_string(gap)});
        rep.samples = tested;
        rep.extra()["skipped"] = skipped;
        return rep;
      }
    }
  }
  rep.samples = tested;
  rep.extra()["skipped"] = skipped;
  if (tested == 0) rep.inconclusive = true;
  return rep;
}

std::optional<BadTestJet> find_bad_test_jet(const GridFunction& u, const SubequationOracle& F,
                                            size_t x_flat) {
  const BoxDomain& Om = u.domain;
  if (Om.tag(x_flat) != CellTag::Interior) return std::nullopt;
  const int n = Om.dim();
  const double h = Om.h();
  const auto mi = Om.multi_index(x_flat);
  const Vec x = Om.point(x_flat);
  const double ux = u.values[x_flat];
  if (ux == -kInf) return std::nullopt;

  auto at = [&](std::vector<int> m) { return u.values[Om.flat_index(m)]; };
  // Central differences for the candidate gradient and Hessian.
  Vec grad(n, 0.0);
  SymMatrix H(n);
  for (int d = 0; d < n; ++d) {
    auto p = mi, q = mi;
    p[d] += 1;
    q[d] -= 1;
    grad[d] = (at(p) - at(q)) / (2.0 * h);
    H.set(d, d, (at(p) - 2.0 * ux + at(q)) / (h * h));
  }
  for (int d = 0; d < n; ++d)
    for (int e = d + 1; e < n; ++e) {
      auto pp = mi, pm = mi, mp = mi, mm = mi;
      pp[d] += 1; pp[e] += 1;
      pm[d] += 1; pm[e] -= 1;
      mp[d] -= 1; mp[e] += 1;
      mm[d] -= 1; mm[e] -= 1;
      if (pp[d] >= Om.shape()[d] || pp[e] >= Om.shape()[e] || mm[d] < 0 || mm[e] < 0)
        continue;
      H.set(d, e, (at(pp) - at(pm) - at(mp) + at(mm)) / (4.0 * h * h));
    }

  // Contact-slack grid: phi = u(x) + <grad, y-x> + (y-x)^T (H + s I) (y-x)/2.
  const int reach = 4;
  for (double slack : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0}) {
    const Jet J(ux, grad, H + SymMatrix::identity(n) * slack);
    if (F.classify(x, J) != Classification::Outside) continue;
    QuadraticFunction phi{ux, grad, J.A, x};
    double eps = kInf;
    bool contact = true;
    std::vector<int> lo(n), cnt(n), mj(n);
    size_t total = 1;
    for (int d = 0; d < n; ++d) {
      lo[d] = std::max(0, mi[d] - reach);
      const int hi = std::min(Om.shape()[d] - 1, mi[d] + reach);
      cnt[d] = hi - lo[d] + 1;
      total *= static_cast<size_t>(cnt[d]);
    }
    for (size_t k = 0; k < total && contact; ++k) {
      size_t rem = k;
      bool self = true;
      for (int d = n - 1; d >= 0; --d) {
        mj[d] = lo[d] + static_cast<int>(rem % cnt[d]);
        rem /= cnt[d];
        if (mj[d] != mi[d]) self = false;
      }
      if (self) continue;
      const Vec y = Om.point(Om.flat_index(mj));
      const double uy = u.values[Om.flat_index(mj)];
      if (uy == -kInf) continue;
      const Vec d = sub(y, x);
      const double gap = phi.value(y) - uy;  // must be >= eps |y-x|^2
      eps = std::min(eps, gap / dot(d, d));
      if (eps <= 1e-9) contact = false;
    }
    if (contact && eps > 1e-9) return BadTestJet{J, std::min(eps, 1.0)};
  }
  return std::nullopt;
}

}  // namespace jetcone
