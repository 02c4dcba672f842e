#include "jetcone/fibermap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "jetcone/reference.hpp"

namespace jetcone {

JetWindow JetWindow::make(int n, double radius, int sample_count, uint64_t seed) {
  JetWindow w;
  w.radius = radius;
  w.sample_count = sample_count;
  w.seed = seed;
  const int dims = 1 + n + n * (n + 1) / 2;
  w.points.reserve(sample_count);
  for (int i = 0; i < sample_count; ++i) {
    const uint64_t idx = seed + 1 + static_cast<uint64_t>(i);
    int dim = 0;
    auto next = [&]() {
      const double u = halton(idx, nth_prime(dim++));
      return radius * (2.0 * u - 1.0);
    };
    Jet J = Jet::zero(n);
    J.r = next();
    for (int k = 0; k < n; ++k) J.p[k] = next();
    const double pn = norm2(J.p);
    if (pn > radius) J.p = scale(radius / pn, J.p);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) J.A.set(a, b, next());
    const double sr = spectral_radius(J.A);
    if (sr > radius) J.A = J.A * (radius / sr);
    w.points.push_back(std::move(J));
  }
  return w;
}

namespace serial {

double excess(const std::vector<Jet>& A, const std::vector<Jet>& B) {
  if (A.empty()) return 0.0;
  if (B.empty()) return kInf;
  double sup = 0;
  for (const Jet& a : A) {
    double inf = kInf;
    for (const Jet& b : B) inf = std::min(inf, jet_norm(a - b));
    sup = std::max(sup, inf);
  }
  return sup;
}

double hausdorff(const std::vector<Jet>& A, const std::vector<Jet>& B) {
  return std::max(serial::excess(A, B), serial::excess(B, A));
}

}  // namespace serial

double excess(const std::vector<Jet>& A, const std::vector<Jet>& B) {
  if (A.empty()) return 0.0;
  if (B.empty()) return kInf;
  double sup = 0;
#pragma omp parallel for reduction(max : sup) schedule(static)
  for (long i = 0; i < static_cast<long>(A.size()); ++i) {
    double inf = kInf;
    for (const Jet& b : B) inf = std::min(inf, jet_norm(A[i] - b));
    sup = std::max(sup, inf);
  }
  return sup;
}

double hausdorff(const std::vector<Jet>& A, const std::vector<Jet>& B) {
  return std::max(excess(A, B), excess(B, A));
}

nlohmann::json FiberegCertificate::to_json() const {
  nlohmann::json j;
  j["eta"] = eta;
  j["delta"] = delta;
  j["J0"] = jet_to_json(J0);
  j["domain"] = {{"lower", domain.lower()}, {"upper", domain.upper()}, {"h", domain.h()}};
  j["pair_count"] = pair_count;
  j["pass"] = pass;
  auto viols = nlohmann::json::array();
  for (const auto& v : violations) {
    viols.push_back({{"x", v.x}, {"J", jet_to_json(v.J)}, {"detail", v.detail}});
  }
  j["violations"] = viols;
  return j;
}

std::vector<Jet> windowed_fiber(const SubequationOracle& F, const Vec& x,
                                const JetWindow& window) {
  std::vector<Jet> out;
  for (const Jet& J : window.points)
    if (F.classify(x, J) != Classification::Outside) out.push_back(J);
  return out;
}

namespace {

struct PairSample {
  Vec x, y;
};

// Pairs with |x - y| < delta, both inside the closed box. Deterministic in
// (seed, count, delta).
std::vector<PairSample> sample_pairs(const BoxDomain& Om, double delta, long count,
                                     uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<PairSample> out;
  out.reserve(count);
  const int d = Om.dim();
  while (static_cast<long>(out.size()) < count) {
    Vec x(d), y(d);
    for (int i = 0; i < d; ++i)
      x[i] = Om.lower()[i] + u01(rng) * (Om.upper()[i] - Om.lower()[i]);
    // random direction, length uniform in (0, delta)
    std::normal_distribution<double> g(0.0, 1.0);
    Vec dir(d);
    for (int i = 0; i < d; ++i) dir[i] = g(rng);
    const double len = norm2(dir);
    if (len < 1e-12) continue;
    const double step = u01(rng) * delta * 0.999;
    bool ok = true;
    for (int i = 0; i < d; ++i) {
      y[i] = x[i] + step * dir[i] / len;
      if (y[i] < Om.lower()[i] || y[i] > Om.upper()[i]) ok = false;
    }
    if (!ok) continue;
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

// Tests the certificate invariant at a given delta; fills at most 10
// violations (sorted by pair index for determinism).
bool test_delta(const SubequationOracle& F, const BoxDomain& Om, double eta,
                const JetWindow& window, double delta, long pair_count, uint64_t seed,
                std::vector<Violation>* violations) {
  const auto pairs = sample_pairs(Om, delta, pair_count, seed);
  const Jet shift = F.J0 * eta;
  std::vector<int> bad(pairs.size(), -1);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < static_cast<long>(pairs.size()); ++i) {
    for (size_t k = 0; k < window.points.size(); ++k) {
      const Jet& J = window.points[k];
      if (F.classify(pairs[i].x, J) == Classification::Outside) continue;
      if (F.classify(pairs[i].y, J + shift) == Classification::Outside) {
        bad[i] = static_cast<int>(k);
        break;
      }
    }
  }
  bool ok = true;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (bad[i] < 0) continue;
    ok = false;
    if (violations && violations->size() < 10) {
      Violation v;
      v.x = pairs[i].y;
      v.J = window.points[bad[i]] + shift;
      v.detail = "member at x escaped at y after the eta-shift";
      violations->push_back(v);
    }
  }
  return ok;
}

}  // namespace

FiberegCertificate certify_fiberegularity(const SubequationOracle& F, const BoxDomain& Om,
                                          double eta, const JetWindow& window,
                                          long pair_count, uint64_t seed) {
  if (window.points.size() < 100)
    throw std::invalid_argument("certify_fiberegularity: window too small (< 100 jets)");
  if (eta <= 0) throw std::invalid_argument("certify_fiberegularity: eta must be positive");

  FiberegCertificate cert;
  cert.eta = eta;
  cert.J0 = F.J0;
  cert.domain = Om;
  cert.pair_count = pair_count;

  const double lo0 = Om.h();
  const double hi0 = Om.diameter();
  // Whole domain first: constant-coefficient fibers end here immediately.
  if (test_delta(F, Om, eta, window, hi0, pair_count, seed, nullptr)) {
    cert.delta = hi0;
    cert.pass = true;
    return cert;
  }
  if (!test_delta(F, Om, eta, window, lo0, pair_count, seed, &cert.violations)) {
    cert.delta = 0.0;
    cert.pass = false;
    return cert;
  }
  double lo = lo0, hi = hi0;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (test_delta(F, Om, eta, window, mid, pair_count, seed, nullptr))
      lo = mid;
    else
      hi = mid;
  }
  cert.delta = lo;
  cert.pass = true;
  return cert;
}

Report check_no_finite_enlargement(const SubequationOracle& E, const Vec& x, double t_max) {
  Report rep;
  rep.law = "no finite enlargement: -t*J0 stays outside the fiber";
  long tested = 0;
  for (double t = 1.0; t <= t_max; t *= 2.0) {
    ++tested;
    const Jet J = E.J0 * (-t);
    if (E.classify(x, J) != Classification::Outside) {
      rep.violations.push_back({x, J, "deep jet along -J0 is still a member"});
    }
  }
  rep.samples = tested;
  rep.extra()["t_max"] = t_max;
  return rep;
}

}  // namespace jetcone
