#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jetcone/garding.hpp"

using namespace jetcone;

TEST_CASE("eigenvalues of the degree-2 wave form at (3,-1) are (2,4)") {
  const auto ev = garding_eigenvalues(HyperbolicPolynomial::wave2(), {3.0, -1.0});
  REQUIRE(ev.values.size() == 2);
  CHECK(ev.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev.values[1] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("evaluating at the hyperbolicity direction gives all-ones eigenvalues") {
  HyperbolicPolynomial g = HyperbolicPolynomial::wave2();
  const auto ev = garding_eigenvalues(g, g.direction());
  for (double l : ev.values) CHECK(l == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("determinant form on symmetric 2x2 matrices recovers matrix eigenvalues") {
  HyperbolicPolynomial g = HyperbolicPolynomial::det2();
  // (a11, a12, a22) = diag(2, 5).
  auto ev = garding_eigenvalues(g, {2.0, 0.0, 5.0});
  CHECK(ev.values[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ev.values[1] == doctest::Approx(5.0).epsilon(1e-10));
  // Cross-check against the dense eigensolver on random symmetric matrices.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int rep = 0; rep < 200; ++rep) {
    SymMatrix A(2);
    A.set(0, 0, u(rng));
    A.set(0, 1, u(rng));
    A.set(1, 1, u(rng));
    ev = garding_eigenvalues(g, {A(0, 0), A(0, 1), A(1, 1)});
    const auto ref = eigen_decompose(A).eigenvalues;
    CHECK(ev.values[0] == doctest::Approx(ref[0]).epsilon(1e-8));
    CHECK(ev.values[1] == doctest::Approx(ref[1]).epsilon(1e-8));
  }
}

TEST_CASE("degree-4 product of two wave forms yields the four shifted roots") {
  // g = (p1^2 - p2^2)(p1^2 - 4 p2^2), hyperbolic in (1, 0); eigenvalues are
  // p1 - 2|p2| <= p1 - |p2| <= p1 + |p2| <= p1 + 2|p2| (exercise the
  // simultaneous root iteration on distinct quartic roots).
  HyperbolicPolynomial g({{1.0, {4, 0}}, {-5.0, {2, 2}}, {4.0, {0, 4}}}, {1.0, 0.0});
  const Vec p = {3.0, 1.0};
  const auto ev = garding_eigenvalues(g, p);
  REQUIRE(ev.values.size() == 4);
  CHECK(ev.values[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ev.values[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(ev.values[2] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(ev.values[3] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("degree-3 factorable form matches hand roots") {
  // g = p1 (p1 - p2)(p1 + p2) = p1^3 - p1 p2^2; eigenvalues {p1 - p2, p1, p1 + p2}.
  HyperbolicPolynomial g({{1.0, {3, 0}}, {-1.0, {1, 2}}}, {1.0, 0.0});
  const auto ev = garding_eigenvalues(g, {2.0, 0.5});
  REQUIRE(ev.values.size() == 3);
  CHECK(ev.values[0] == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(ev.values[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(ev.values[2] == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("product identity and 1-homogeneity on random samples") {
  HyperbolicPolynomial g = HyperbolicPolynomial::wave2();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> tpos(0.1, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec p = {u(rng), u(rng)};
    const auto ev = garding_eigenvalues(g, p);
    const double prod = ev.values[0] * ev.values[1];
    const double gv = g.evaluate(p);
    CHECK(std::abs(prod - gv) <= 1e-8 * (1.0 + std::abs(gv)));
    const double t = tpos(rng);
    const auto evt = garding_eigenvalues(g, scale(t, p));
    for (size_t k = 0; k < ev.values.size(); ++k)
      CHECK(std::abs(evt.values[k] - t * ev.values[k]) <=
            1e-9 * (1.0 + std::abs(t * ev.values[k])));
  }
}

TEST_CASE("cone membership classification for the wave form") {
  HyperbolicPolynomial g = HyperbolicPolynomial::wave2();
  CHECK(garding_cone_contains(g, {2.0, 1.0}) == Classification::Inside);
  CHECK(garding_cone_contains(g, {1.0, 1.0}) == Classification::Boundary);
  CHECK(garding_cone_contains(g, {0.0, 1.0}) == Classification::Outside);
}

TEST_CASE("hyperbolicity violations are reported with the offending point") {
  // p1^2 + p2^2 is positive definite: g(a) > 0 but the restriction at (0,1)
  // has complex roots.
  HyperbolicPolynomial g({{1.0, {2, 0}}, {1.0, {0, 2}}}, {1.0, 0.0});
  CHECK_THROWS_WITH_AS(garding_eigenvalues(g, {0.0, 1.0}),
                       doctest::Contains("hyperbolicity violated"), std::runtime_error);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(HyperbolicPolynomial({}, {1.0, 0.0}), std::invalid_argument);
  // mixed degrees
  CHECK_THROWS_AS(HyperbolicPolynomial({{1.0, {2, 0}}, {1.0, {1, 0}}}, {1.0, 0.0}),
                  std::invalid_argument);
  // g(a) <= 0
  CHECK_THROWS_AS(HyperbolicPolynomial({{-1.0, {2, 0}}, {1.0, {0, 2}}}, {1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("JSON round trip preserves evaluation") {
  HyperbolicPolynomial g = HyperbolicPolynomial::det2();
  HyperbolicPolynomial g2 = HyperbolicPolynomial::from_json(g.to_json());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec p = {u(rng), u(rng), u(rng)};
    CHECK(g2.evaluate(p) == doctest::Approx(g.evaluate(p)).epsilon(1e-12));
  }
}

TEST_CASE("derived gradient cone matches the eigenvalue sign and known members") {
  HyperbolicPolynomial g = HyperbolicPolynomial::wave2();
  MonotonicityCone M = garding_monotonicity_cone(g);
  REQUIRE(M.D().has_value());
  CHECK(M.D()->normals().size() == 2);
  // Jets: any r and A, gradient decides membership.
  CHECK(M.classify(Jet(7.0, {5.0, 2.0}, SymMatrix::diag({-9.0, 4.0}))) ==
        Classification::Inside);
  CHECK(M.classify(Jet(0.0, {0.0, 1.0}, SymMatrix(2))) == Classification::Outside);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const Vec p = {u(rng), u(rng)};
    const Classification a = garding_cone_contains(g, p);
    const Classification b = M.D()->classify(p);
    if (a == Classification::Boundary || b == Classification::Boundary) continue;
    CHECK(a == b);
  }
}

TEST_CASE("non-derivable cones require explicit halfspaces") {
  HyperbolicPolynomial g = HyperbolicPolynomial::det2();
  CHECK_THROWS_AS(garding_monotonicity_cone(g), std::invalid_argument);
}

TEST_CASE("operator monotonicity along the derived product cone") {
  HyperbolicPolynomial g = HyperbolicPolynomial::wave2();
  MonotonicityCone M = garding_monotonicity_cone(g);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int found = 0;
  for (int rep = 0; rep < 40000 && found < 1000; ++rep) {
    const Vec p = {u(rng), u(rng)}, q = {u(rng), u(rng)};
    if (M.D()->classify(p) == Classification::Outside) continue;
    if (M.D()->classify(q) == Classification::Outside) continue;
    ++found;
    CHECK(g.evaluate(add(p, q)) >= g.evaluate(p) - 1e-9 * (1.0 + std::abs(g.evaluate(p))));
  }
  CHECK(found == 1000);
}
