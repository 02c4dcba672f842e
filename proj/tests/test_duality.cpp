#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetcone/duality.hpp"

using namespace jetcone;

namespace {

const Vec kOrigin2(2, 0.0);

std::vector<MonotonicityCone> test_cones() {
  const DirectionalCone orth = DirectionalCone::orthant(2);
  return {MonotonicityCone::P(2),           MonotonicityCone::N(2),
          MonotonicityCone::Gamma(2, 0.7),  MonotonicityCone::Dir(orth),
          MonotonicityCone::Radius(2, 2.0), MonotonicityCone::Q(2),
          MonotonicityCone::DP(orth),       MonotonicityCone::NDP(orth)};
}

}  // namespace

TEST_CASE("jet JSON round trip") {
  Jet J(1.5, {2.0, -3.0}, SymMatrix::diag({4.0, -5.0}));
  const Jet K = jet_from_json(jet_to_json(J));
  CHECK(K.r == J.r);
  CHECK(K.p == J.p);
  CHECK(K.A(0, 0) == J.A(0, 0));
  CHECK(K.A(1, 1) == J.A(1, 1));
}

TEST_CASE("report JSON carries law, samples, pass and violations") {
  Report rep;
  rep.law = "demo";
  rep.samples = 3;
  rep.violations.push_back({{0.0, 0.0}, Jet::zero(2), "boom"});
  const auto j = rep.to_json();
  CHECK(j["law"] == "demo");
  CHECK(j["samples"] == 3);
  CHECK(j["pass"] == false);
  CHECK(j["violations"].size() == 1);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("dual of the convexity-type oracle accepts one nonnegative eigenvalue") {
  SubequationOracle F = oracle_of_cone(MonotonicityCone::P(2));
  SubequationOracle Fd = dual(F);
  CHECK(Fd.classify(kOrigin2, Jet(9.0, {0.0, 0.0}, SymMatrix::diag({-1.0, 3.0}))) ==
        Classification::Inside);
  CHECK(Fd.classify(kOrigin2, Jet(0.0, {0.0, 0.0}, SymMatrix::diag({-1.0, -1.0}))) ==
        Classification::Outside);
}

TEST_CASE("the halfspace r-cone is self-dual on samples") {
  MonotonicityCone M = MonotonicityCone::N(2);
  SubequationOracle F = oracle_of_cone(M);
  SubequationOracle Fd = dual(F);
  JetSampler s(2, 10.0, 31);
  for (int i = 0; i < 1000; ++i) {
    const Jet J = s.jet();
    const Classification a = F.classify(kOrigin2, J);
    const Classification b = Fd.classify(kOrigin2, J);
    if (a == Classification::Boundary || b == Classification::Boundary) continue;
    CHECK(a == b);
  }
}

TEST_CASE("double dual restores the classification off the boundary band") {
  for (const MonotonicityCone& M : test_cones()) {
    SubequationOracle F = oracle_of_cone(M);
    SubequationOracle FF = dual(dual(F));
    JetSampler s(2, 10.0, 37);
    long compared = 0;
    for (int i = 0; i < 1000; ++i) {
      const Jet J = s.jet();
      const Classification a = F.classify(kOrigin2, J);
      const Classification b = FF.classify(kOrigin2, J);
      if (a == Classification::Boundary || b == Classification::Boundary) continue;
      ++compared;
      CHECK(a == b);
    }
    CHECK(compared > 500);
  }
}

TEST_CASE("inclusion reversal of duals on refined cone pairs") {
  const DirectionalCone orth = DirectionalCone::orthant(2);
  const std::vector<std::pair<MonotonicityCone, MonotonicityCone>> pairs = {
      {MonotonicityCone::Q(2), MonotonicityCone::N(2)},
      {MonotonicityCone::Q(2), MonotonicityCone::P(2)},
      {MonotonicityCone::NDP(orth), MonotonicityCone::DP(orth)},
      {MonotonicityCone::DP(orth), MonotonicityCone::P(2)}};
  JetSampler s(2, 10.0, 41);
  for (const auto& [M1, M2] : pairs) {
    REQUIRE(M1.refines(M2));
    for (int i = 0; i < 1000; ++i) {
      const Jet J = s.jet();
      if (M2.dual_classify(J) == Classification::Inside)
        CHECK(M1.dual_classify(J) != Classification::Outside);
    }
  }
}

TEST_CASE("dual of an intersection is the union of the duals (sampled)") {
  SubequationOracle F1 = oracle_of_cone(MonotonicityCone::P(2));
  SubequationOracle F2 = oracle_of_cone(MonotonicityCone::N(2));
  SubequationOracle H;
  H.n = 2;
  H.J0 = F1.J0 + F2.J0;
  H.M = MonotonicityCone::Q(2);
  H.constant_fiber = true;
  H.classify = [F1, F2](const Vec& x, const Jet& J) {
    const Classification a = F1.classify(x, J), b = F2.classify(x, J);
    if (a == Classification::Outside || b == Classification::Outside)
      return Classification::Outside;
    if (a == Classification::Boundary || b == Classification::Boundary)
      return Classification::Boundary;
    return Classification::Inside;
  };
  SubequationOracle Hd = dual(H);
  SubequationOracle F1d = dual(F1), F2d = dual(F2);
  JetSampler s(2, 10.0, 43);
  for (int i = 0; i < 2000; ++i) {
    const Jet J = s.jet();
    const Classification h = Hd.classify(kOrigin2, J);
    const Classification a = F1d.classify(kOrigin2, J);
    const Classification b = F2d.classify(kOrigin2, J);
    if (h == Classification::Boundary || a == Classification::Boundary ||
        b == Classification::Boundary)
      continue;
    CHECK((h == Classification::Inside) ==
          (a == Classification::Inside || b == Classification::Inside));
  }
}

TEST_CASE("jet translation invariance transfers to the dual") {
  for (const MonotonicityCone& M : test_cones()) {
    SubequationOracle F = oracle_of_cone(M);
    SubequationOracle Fd = dual(F);
    const Jet Jt = M.interior_jet();
    JetSampler s(2, 10.0, 47);
    for (int i = 0; i < 1000; ++i) {
      const Jet J = s.jet();
      if (F.classify(kOrigin2, J) != Classification::Outside)
        CHECK(F.classify(kOrigin2, J + Jt) != Classification::Outside);
      if (Fd.classify(kOrigin2, J) != Classification::Outside)
        CHECK(Fd.classify(kOrigin2, J + Jt) != Classification::Outside);
    }
  }
}

TEST_CASE("sum law holds for cone oracles") {
  for (const MonotonicityCone& M : test_cones()) {
    const Report rep = check_sum_law(oracle_of_cone(M), 1000);
    CHECK(rep.pass());
    CHECK(rep.samples == 1000);
  }
}

TEST_CASE("sum law detects a deliberately mis-declared cone") {
  // Fibers obey r <= -2|p| but the declared cone claims only r <= -0.1|p|;
  // the dual is then too large and sums escape the declared dual.
  MonotonicityCone tight = MonotonicityCone::Gamma(2, 2.0);
  SubequationOracle F = oracle_of_cone(tight);
  F.M = MonotonicityCone::Gamma(2, 0.1);  // wrong declaration
  const Report rep = check_sum_law(F, 2000);
  CHECK_FALSE(rep.pass());
  CHECK(rep.violations.size() >= 1);
}

TEST_CASE("interior characterization via the shift grid") {
  MonotonicityCone M = MonotonicityCone::P(2);
  SubequationOracle F = oracle_of_cone(M);
  JetSampler s(2, 10.0, 53);
  for (int i = 0; i < 500; ++i) {
    const Jet J = s.jet();
    if (F.classify(kOrigin2, J) == Classification::Boundary) continue;
    CHECK(interior_characterization_holds(F, kOrigin2, J));
  }
}
