#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetcone/fibermap.hpp"
#include "jetcone/manifest.hpp"
#include "jetcone/reference.hpp"

using namespace jetcone;

namespace {

Jet vertex_jet(int n, double r) { return Jet(r, Vec(n, 0.0), SymMatrix(n)); }

}  // namespace

TEST_CASE("jet window regeneration is bit-identical and respects the radius") {
  JetWindow a = JetWindow::make(3, 2.5, 150, 42);
  JetWindow b = JetWindow::make(3, 2.5, 150, 42);
  REQUIRE(a.points.size() == 150);
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].r == b.points[i].r);
    CHECK(a.points[i].p == b.points[i].p);
    CHECK(a.points[i].A.data() == b.points[i].A.data());
    CHECK(jet_norm(a.points[i]) <= 2.5 + 1e-12);
  }
  JetWindow c = JetWindow::make(3, 2.5, 150, 43);
  bool differs = false;
  for (size_t i = 0; i < c.points.size(); ++i)
    if (c.points[i].r != a.points[i].r) differs = true;
  CHECK(differs);
}

TEST_CASE("excess and hausdorff on enumerable examples") {
  const Jet z = vertex_jet(2, 0.0);
  const Jet one = vertex_jet(2, 1.0);
  const Jet two = vertex_jet(2, 2.0);
  CHECK(hausdorff({z}, {z}) == 0.0);
  CHECK(hausdorff({one}, {z}) == doctest::Approx(1.0));
  CHECK(excess({z, two}, {z}) == doctest::Approx(2.0));
  CHECK(excess({z}, {z, two}) == 0.0);
  // A subset of B: the one-sided excess vanishes, the distance is the gap.
  CHECK(hausdorff({z, two}, {z}) == doctest::Approx(2.0));
  // Empty sets.
  CHECK(excess({}, {z}) == 0.0);
  CHECK(excess({z}, {}) == kInf);
  CHECK(hausdorff({z}, {}) == kInf);
}

TEST_CASE("hausdorff metric properties on random windows") {
  JetWindow A = JetWindow::make(2, 3.0, 40, 1);
  JetWindow B = JetWindow::make(2, 3.0, 40, 2);
  JetWindow C = JetWindow::make(2, 3.0, 40, 3);
  const double ab = hausdorff(A.points, B.points);
  const double ba = hausdorff(B.points, A.points);
  CHECK(ab == ba);  // symmetry, exact
  const double ac = hausdorff(A.points, C.points);
  const double cb = hausdorff(C.points, B.points);
  CHECK(ab <= ac + cb + 1e-12);  // triangle inequality
  CHECK(hausdorff(A.points, A.points) == 0.0);
}

TEST_CASE("parallel kernels agree exactly with the serial references") {
  JetWindow A = JetWindow::make(3, 2.0, 120, 5);
  JetWindow B = JetWindow::make(3, 2.0, 130, 6);
  CHECK(excess(A.points, B.points) == serial::excess(A.points, B.points));
  CHECK(hausdorff(A.points, B.points) == serial::hausdorff(A.points, B.points));
}

TEST_CASE("constant-coefficient fibers certify with delta = domain diameter") {
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.05);
  SubequationOracle F = oracle_of_cone(MonotonicityCone::Q(2));
  F.domain = Om;
  JetWindow W = JetWindow::make(2, 3.0, 120, 1);
  FiberegCertificate cert = certify_fiberegularity(F, Om, 0.1, W, 100, 1);
  CHECK(cert.pass);
  CHECK(cert.delta == doctest::Approx(Om.diameter()));
  CHECK(cert.violations.empty());
}

TEST_CASE("a jump discontinuity in the fiber map is reported with witnesses") {
  // Fiber r <= 0 on the left half, r <= -5 on the right half: no eta-shift of
  // size 0.1 survives crossing the jump.
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.05);
  SubequationOracle F;
  F.n = 2;
  F.M = MonotonicityCone::N(2);
  F.J0 = F.M.interior_jet();
  F.domain = Om;
  F.classify = [](const Vec& x, const Jet& J) {
    const double cap = x[0] < 0.5 ? 0.0 : -5.0;
    return classify_margin(cap - J.r, tau_mem(jet_norm(J)));
  };
  JetWindow W = JetWindow::make(2, 3.0, 120, 1);
  FiberegCertificate cert = certify_fiberegularity(F, Om, 0.1, W, 400, 1);
  CHECK_FALSE(cert.pass);
  CHECK(cert.delta == 0.0);
  CHECK(cert.violations.size() >= 1);
}

TEST_CASE("certification rejects undersized windows and nonpositive eta") {
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.1);
  SubequationOracle F = oracle_of_cone(MonotonicityCone::P(2));
  JetWindow tiny = JetWindow::make(2, 3.0, 50, 1);
  CHECK_THROWS(certify_fiberegularity(F, Om, 0.1, tiny, 100, 1));
  JetWindow W = JetWindow::make(2, 3.0, 120, 1);
  CHECK_THROWS(certify_fiberegularity(F, Om, 0.0, W, 100, 1));
}

TEST_CASE("windowed fiber keeps exactly the non-outside jets") {
  SubequationOracle F = oracle_of_cone(MonotonicityCone::P(2));
  JetWindow W = JetWindow::make(2, 3.0, 120, 9);
  const Vec x(2, 0.0);
  const auto fib = windowed_fiber(F, x, W);
  long members = 0;
  for (const Jet& J : W.points)
    if (F.classify(x, J) != Classification::Outside) ++members;
  CHECK(static_cast<long>(fib.size()) == members);
  CHECK(members > 0);
  CHECK(members < static_cast<long>(W.points.size()));
}

TEST_CASE("no finite enlargement along -J0 for cone fibers") {
  const Vec x(2, 0.0);
  for (const MonotonicityCone& M :
       {MonotonicityCone::P(2), MonotonicityCone::Gamma(2, 1.0),
        MonotonicityCone::Q(2)}) {
    const Report rep = check_no_finite_enlargement(oracle_of_cone(M), x, 1 << 20);
    CHECK(rep.pass());
  }
}

TEST_CASE("no finite enlargement fails on the degenerate full-space oracle") {
  SubequationOracle everything;
  everything.n = 2;
  everything.M = MonotonicityCone::P(2);
  everything.J0 = everything.M.interior_jet();
  everything.classify = [](const Vec&, const Jet&) { return Classification::Inside; };
  const Report rep = check_no_finite_enlargement(everything, Vec(2, 0.0), 1 << 10);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("fibers along a sequence approaching the boundary are Cauchy in window distance") {
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.05);
  CorrespondenceSubequation C = build_correspondence(ot_operator(1.0, Om));
  JetWindow W = JetWindow::make(2, 3.0, 200, 11);
  // x_k -> (0, 0.5) on the left edge.
  std::vector<std::vector<Jet>> fibs;
  for (int k = 1; k <= 8; ++k)
    fibs.push_back(windowed_fiber(C.oracle, {std::pow(2.0, -k), 0.5}, W));
  double prev = kInf;
  for (size_t k = 1; k < fibs.size(); ++k) {
    const double d = hausdorff(fibs[k - 1], fibs[k]);
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
  CHECK(prev <= 1e-9);  // consecutive window fibers stabilize
}
