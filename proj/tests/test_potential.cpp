#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetcone/potential.hpp"
#include "jetcone/reference.hpp"

using namespace jetcone;

namespace {

BoxDomain seg(double h = 1.0 / 200.0) { return BoxDomain({-1.0}, {1.0}, h); }

SubequationOracle P_oracle() { return oracle_of_cone(MonotonicityCone::P(2)); }

}  // namespace

TEST_CASE("sup-convolution fixes constants and dominates the input") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.05);
  GridFunction c = GridFunction::from_callable(Om, [](const Vec&) { return 3.0; });
  GridFunction ce = sup_convolution(c, 0.2);
  for (size_t i = 0; i < Om.size(); ++i) CHECK(ce.values[i] == doctest::Approx(3.0));

  GridFunction u = GridFunction::from_callable(Om, [](const Vec& x) {
    return std::abs(x[0]) - 0.5 * x[1];
  });
  GridFunction ue = sup_convolution(u, 0.2);
  for (size_t i = 0; i < Om.size(); ++i) CHECK(ue.values[i] >= u.values[i] - 1e-12);
  CHECK_THROWS_AS(sup_convolution(u, 0.0), std::invalid_argument);
}

TEST_CASE("ball-restricted sup-convolution equals the unrestricted serial reference") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.05);
  GridFunction u = GridFunction::from_callable(Om, [](const Vec& x) {
    return std::abs(x[0]) + 0.3 * std::sin(5.0 * x[1]);
  });
  for (double eps : {0.4, 0.1}) {
    GridFunction a = sup_convolution(u, eps);
    GridFunction b = serial::sup_convolution(u, eps);
    for (size_t i = 0; i < Om.size(); ++i)
      CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-12 * (1.0 + std::abs(b.values[i])));
  }
}

TEST_CASE("closed forms: parabola and kink") {
  const double h = 1.0 / 200.0;
  BoxDomain Om = seg(h);
  // Convex parabola c|x|^2/2 -> c|x|^2/(2(1-eps c)) while eps*c < 1.
  {
    const double c = 1.0, eps = 0.25;
    GridFunction q = GridFunction::from_callable(Om, [c](const Vec& x) {
      return 0.5 * c * x[0] * x[0];
    });
    GridFunction qe = sup_convolution(q, eps);
    for (size_t i = 0; i < Om.size(); ++i) {
      const double x = Om.point(i)[0];
      if (std::abs(x) > 0.7) continue;
      CHECK(std::abs(qe.values[i] - 0.5 * c * x * x / (1.0 - eps * c)) <= 10.0 * h + eps * h);
    }
  }
  // Concave parabola -c|x|^2/2 -> -c|x|^2/(2(1+eps c)) (optimum y = x/(1+eps c)).
  {
    const double c = 1.0, eps = 0.25;
    GridFunction q = GridFunction::from_callable(Om, [c](const Vec& x) {
      return -0.5 * c * x[0] * x[0];
    });
    GridFunction qe = sup_convolution(q, eps);
    for (size_t i = 0; i < Om.size(); ++i) {
      const double x = Om.point(i)[0];
      CHECK(std::abs(qe.values[i] + 0.5 * c * x * x / (1.0 + eps * c)) <= 10.0 * h + eps * h);
    }
  }
  // Kink |x| -> |x| + eps/2 away from the kink and the domain edge.
  {
    const double eps = 0.1;
    GridFunction k = GridFunction::from_callable(Om, [](const Vec& x) {
      return std::abs(x[0]);
    });
    GridFunction ke = sup_convolution(k, eps);
    for (size_t i = 0; i < Om.size(); ++i) {
      const double x = Om.point(i)[0];
      if (std::abs(x) < eps || std::abs(x) > 1.0 - eps - h) continue;
      CHECK(std::abs(ke.values[i] - (std::abs(x) + 0.5 * eps)) <= 10.0 * h + eps * h);
    }
  }
}

TEST_CASE("monotone in eps and quasi-convex at the matching parameter") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.05);
  GridFunction u = GridFunction::from_callable(Om, [](const Vec& x) {
    return std::abs(x[0]) + 0.3 * std::sin(5.0 * x[1]);
  });
  GridFunction prev;
  bool first = true;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    GridFunction ue = sup_convolution(u, eps);
    if (!first)
      for (size_t i = 0; i < Om.size(); ++i)
        CHECK(prev.values[i] >= ue.values[i] - 1e-12);
    CHECK(quasi_convexity_check(ue, 1.0 / eps).pass());
    prev = ue;
    first = false;
  }
  // A downward kink is not quasi-convex: its -2h second difference beats the
  // 10 h^2 acceptance band once h is small against 1/lambda.
  BoxDomain fine({-1.0}, {1.0}, 0.005);
  GridFunction kink = GridFunction::from_callable(fine, [](const Vec& x) {
    return -std::abs(x[0]);
  });
  CHECK_FALSE(quasi_convexity_check(kink, 1.0).pass());
  // Affine functions are convex already.
  GridFunction aff = GridFunction::from_callable(Om, [](const Vec& x) {
    return 2.0 * x[0] - x[1];
  });
  CHECK(quasi_convexity_check(aff, 0.0).pass());
}

TEST_CASE("classical subharmonicity screening of quadratics") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.1);
  SubequationOracle F = P_oracle();
  QuadraticFunction bowl;
  bowl.p0 = {0.0, 0.0};
  bowl.A0 = SymMatrix::identity(2);
  bowl.x0 = {0.0, 0.0};
  CHECK(classical_subharmonic_check(ClassicalFunction(bowl), F, Om, true).pass());
  QuadraticFunction cap = bowl;
  cap.A0 = SymMatrix::identity(2) * -2.0;
  const Report bad = classical_subharmonic_check(ClassicalFunction(cap), F, Om, false);
  CHECK_FALSE(bad.pass());
  CHECK(bad.violations.size() >= 1);
}

TEST_CASE("translate-perturb restricts, shifts and rejects oversized shifts") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.1);
  GridFunction u = GridFunction::from_callable(Om, [](const Vec& x) {
    return x[0] + 2.0 * x[1];
  });
  MonotonicityCone M = MonotonicityCone::DP(DirectionalCone::orthant(2));
  StrictApproximator psi = strict_approximator(M, Om, ApproximatorMode::Elliptic);
  const double delta = 0.25;
  GridFunction out = translate_perturb(u, {0.1, 0.0}, 0.5, psi, delta);
  CHECK(out.domain.size() < Om.size());
  for (size_t i = 0; i < out.domain.size(); ++i) {
    const Vec x = out.domain.point(i);
    const double want = (x[0] - 0.1) + 2.0 * x[1] + 0.5 * psi.value(x);
    CHECK(out.values[i] == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(translate_perturb(u, {delta, 0.0}, 0.5, psi, delta),
                  std::invalid_argument);
}

TEST_CASE("directionality along polar generators") {
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.1);
  DirectionalCone orth = DirectionalCone::orthant(2);
  GridFunction inc = GridFunction::from_callable(Om, [](const Vec& x) {
    return x[0] + x[1];
  });
  CHECK(directionality_check(inc, orth).pass());
  GridFunction dec = GridFunction::from_callable(Om, [](const Vec& x) { return -x[0]; });
  const Report bad = directionality_check(dec, orth);
  CHECK_FALSE(bad.pass());
  CHECK(bad.violations.size() >= 1);
  // Halfspace {p_t >= 0}: the polar is the ray along e_t; nonincreasing-in-t
  // data fails while nondecreasing data passes.
  BoxDomain Om3({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 0.05);
  DirectionalCone half = DirectionalCone::halfspace({0.0, 0.0, 1.0});
  GridFunction up = GridFunction::from_callable(Om3, [](const Vec& x) { return x[2]; });
  CHECK(directionality_check(up, half).pass());
  GridFunction down = GridFunction::from_callable(Om3, [](const Vec& x) {
    return -3.0 * x[2];
  });
  CHECK_FALSE(directionality_check(down, half).pass());
}

TEST_CASE("comparison with quadratic classes: necessity screening") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.1);
  GridFunction convex = GridFunction::from_callable(Om, [](const Vec& x) {
    return x[0] * x[0] + 0.5 * x[1] * x[1] - 1.0;
  });
  QuadraticClass aff{QuadraticClassKind::Aff, std::nullopt, 0.0, 0.0};
  CHECK(sub_A_check(convex, aff, Om).pass());

  // An interior bump above the boundary affine hull is caught.
  GridFunction bump = GridFunction::from_callable(Om, [](const Vec& x) {
    return 2.0 * std::exp(-8.0 * dot(x, x));
  });
  const Report bad = sub_A_check(bump, aff, Om);
  CHECK_FALSE(bad.pass());
  CHECK(bad.violations.size() >= 1);

  // u <= 0 passes trivially against nonnegative affine members.
  GridFunction neg = GridFunction::from_callable(Om, [](const Vec& x) {
    return -1.0 - x[0] * x[0];
  });
  QuadraticClass affp{QuadraticClassKind::AffPlus, std::nullopt, 0.0, 0.0};
  CHECK(sub_A_check(neg, affp, Om).pass());
}

TEST_CASE("bad-test-jet search refutes and clears correctly") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.1);
  SubequationOracle F = P_oracle();
  const size_t center = Om.flat_index({10, 10});

  GridFunction cap = GridFunction::from_callable(Om, [](const Vec& x) {
    return -dot(x, x);
  });
  const auto bad = find_bad_test_jet(cap, F, center);
  REQUIRE(bad.has_value());
  CHECK(bad->eps > 0.0);
  CHECK(F.classify(Om.point(center), bad->J) == Classification::Outside);
  CHECK(lambda_max(bad->J.A) < 0.0);  // concave contact quadratic

  GridFunction convex = GridFunction::from_callable(Om, [](const Vec& x) {
    return dot(x, x);
  });
  for (size_t i = 0; i < Om.size(); ++i) {
    if (Om.on_boundary(i)) continue;
    CHECK_FALSE(find_bad_test_jet(convex, F, i).has_value());
  }

  // Constant positive data violates the r-constraint of a dual r-cone fiber.
  MonotonicityCone Mg = MonotonicityCone::Gamma(2, 1.0);
  SubequationOracle Fd = dual(oracle_of_cone(Mg));
  GridFunction big = GridFunction::from_callable(Om, [](const Vec&) { return 5.0; });
  const auto rbad = find_bad_test_jet(big, Fd, center);
  REQUIRE(rbad.has_value());
  CHECK(rbad->J.r == doctest::Approx(5.0));
}

TEST_CASE("subharmonic addition: cone plus dual members stay in the dual cone fiber") {
  BoxDomain Om({0.0, 0.0}, {1.0, 1.0}, 0.1);
  MonotonicityCone M = MonotonicityCone::DP(DirectionalCone::orthant(2));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    QuadraticFunction phi;  // cone-classical piece
    phi.x0 = {0.0, 0.0};
    const double a = 0.5 + u01(rng);
    phi.A0 = SymMatrix::identity(2) * a;
    phi.p0 = {a + u01(rng), a + u01(rng)};
    QuadraticFunction chi;  // dual-classical piece
    chi.x0 = {0.5, 0.5};
    chi.A0 = SymMatrix::diag({0.5 + u01(rng), -(0.5 + u01(rng))});
    chi.p0 = {u01(rng) - 0.5, u01(rng) - 0.5};
    for (size_t i = 0; i < Om.size(); ++i) {
      const Vec x = Om.point(i);
      REQUIRE(M.classify(phi.jet(x)) != Classification::Outside);
      REQUIRE(M.dual_classify(chi.jet(x)) != Classification::Outside);
      CHECK(M.dual_classify(phi.jet(x) + chi.jet(x)) != Classification::Outside);
    }
  }
}

TEST_CASE("pointwise max of screened members passes the bad-jet screening") {
  BoxDomain Om({-1.0, -1.0}, {1.0, 1.0}, 0.1);
  SubequationOracle F = P_oracle();
  GridFunction m = GridFunction::from_callable(Om, [](const Vec& x) {
    return std::max(x[0], x[1]);  // max of two affine members, kink on the diagonal
  });
  for (size_t i = 0; i < Om.size(); ++i) {
    if (Om.on_boundary(i)) continue;
    CHECK_FALSE(find_bad_test_jet(m, F, i).has_value());
  }
}
