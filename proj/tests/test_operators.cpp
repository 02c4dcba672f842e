#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetcone/manifest.hpp"
#include "jetcone/operators.hpp"

using namespace jetcone;

namespace {

BoxDomain unit_square(double h = 0.1) { return BoxDomain({0.0, 0.0}, {1.0, 1.0}, h); }

OperatorPair pma_example(double h = 0.1) {
  return make_pma_operator(
      [](const Vec& x) { return Vec{2.0 - x[0], 2.0 - x[1]}; },
      [](const Vec&) { return SymMatrix::identity(2); }, [](const Vec&) { return 1.0; },
      {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, unit_square(h));
}

}  // namespace

TEST_CASE("determinant-transport factory validates its fields") {
  BoxDomain Om = unit_square();
  const Vec qbar = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  // Valid instance builds.
  CHECK_NOTHROW(ot_operator(1.0, Om));
  // g negative somewhere on the cone.
  CHECK_THROWS_AS(make_ot_operator([](const Vec& p) { return p[0] - 10.0; },
                                   [](const Vec&) { return 1.0; },
                                   DirectionalCone::orthant(2), qbar, Modulus{1.0, 1.0}, Om),
                  std::invalid_argument);
  // f negative somewhere on the lattice.
  CHECK_THROWS_AS(make_ot_operator([](const Vec& p) { return 1.0 + p[0] + p[1]; },
                                   [](const Vec& x) { return x[0] - 0.5; },
                                   DirectionalCone::orthant(2), qbar, Modulus{1.4, 1.0}, Om),
                  std::invalid_argument);
  // Strict directionality fails when g does not grow along qbar.
  CHECK_THROWS_AS(make_ot_operator([](const Vec&) { return 1.0; },
                                   [](const Vec&) { return 1.0; },
                                   DirectionalCone::orthant(2), qbar, Modulus{1.4, 1.0}, Om),
                  std::invalid_argument);
}

TEST_CASE("space-time factory rejects negative forcing") {
  BoxDomain Om({0.0, 0.0, 0.0}, {1.0, 1.0, 0.5}, 0.1);
  CHECK_THROWS_AS(make_krylov_operator([](const Vec& x) { return x[2] - 0.25; }, 2, Om),
                  std::invalid_argument);
  OperatorPair P = make_krylov_operator([](const Vec&) { return 1.0; }, 2, Om);
  CHECK(P.n == 3);
  // u = |x|^2/2 - 2t has -u_t det(D_x^2 u) = 2 >= f = 1: a subsolution jet.
  SymMatrix A(3);
  A.set(0, 0, 1.0);
  A.set(1, 1, 1.0);
  const Jet J(0.0, {0.5, 0.5, -2.0}, A);
  CHECK(P.constraint_classify({0.5, 0.5, 0.25}, J) != Classification::Outside);
  CHECK(P.evaluate({0.5, 0.5, 0.25}, J) == doctest::Approx(1.0));
}

TEST_CASE("perturbed determinant factory: derived cone and constraint") {
  OperatorPair P = pma_example();
  // nu is interior to the derived gradient cone.
  CHECK(P.M.classify(P.J0) == Classification::Inside);
  // A PSD perturbed Hessian is admissible; a negative one is not.
  const Vec x = {0.5, 0.5};
  CHECK(P.constraint_classify(x, Jet(0.0, {1.0, 1.0}, SymMatrix::identity(2))) ==
        Classification::Inside);
  CHECK(P.constraint_classify(x, Jet(0.0, {0.0, 0.0}, SymMatrix::diag({-1.0, 1.0}))) ==
        Classification::Outside);
  // Refinement stability: halving the lattice spacing does not change
  // membership of probe gradients.
  OperatorPair P2 = pma_example(0.05);
  for (const Vec& p : {Vec{1.0, 1.0}, Vec{1.0, -0.4}, Vec{-0.4, 1.0}, Vec{-1.0, -1.0}}) {
    const Jet J(0.0, p, SymMatrix::identity(2) * 3.0);
    CHECK(P.M.classify(J) == P2.M.classify(J));
  }
  // Pfield must be PSD and the witness must stay on the positive side of b.
  CHECK_THROWS_AS(make_pma_operator(
                      [](const Vec& x) { return Vec{2.0 - x[0], 2.0 - x[1]}; },
                      [](const Vec&) { return SymMatrix::diag({-1.0, 0.0}); },
                      [](const Vec&) { return 1.0; },
                      {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, unit_square()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_pma_operator(
                      [](const Vec& x) { return Vec{2.0 - x[0], 2.0 - x[1]}; },
                      [](const Vec&) { return SymMatrix::identity(2); },
                      [](const Vec&) { return 1.0; },
                      {-1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}, unit_square()),
                  std::invalid_argument);
}

TEST_CASE("first-order operator from a hyperbolic polynomial is constant-coefficient") {
  OperatorPair P = make_garding_operator(HyperbolicPolynomial::wave2(), unit_square());
  CHECK(P.constant_coefficient);
  CHECK(P.evaluate({0.3, 0.7}, Jet(0.0, {3.0, -1.0}, SymMatrix(2))) == doctest::Approx(8.0));
  CHECK(P.constraint_classify({0.3, 0.7}, Jet(0.0, {0.0, 1.0}, SymMatrix(2))) ==
        Classification::Outside);
}

TEST_CASE("operator invariants on random admissible samples") {
  // F(x, J + J') >= F(x, J) for cone increments J', and the constraint fiber
  // absorbs cone increments, for each built-in pair.
  std::vector<OperatorPair> pairs;
  pairs.push_back(ot_operator(1.0, unit_square()));
  pairs.push_back(make_krylov_operator([](const Vec&) { return 1.0; }, 2,
                                       BoxDomain({0.0, 0.0, 0.0}, {1.0, 1.0, 0.5}, 0.1)));
  pairs.push_back(pma_example());
  pairs.push_back(make_garding_operator(HyperbolicPolynomial::wave2(), unit_square()));
  for (const OperatorPair& P : pairs) {
    JetSampler s(P.n, 5.0, 77);
    std::mt19937_64 rng(78);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    // Rejection-sample the admissible jet and the cone increment separately;
    // their joint acceptance rate is too small for paired rejection.
    auto cone_member = [&]() -> std::optional<Jet> {
      for (int tries = 0; tries < 4000; ++tries) {
        const Jet K = s.jet();
        if (P.M.classify(K) != Classification::Outside) return K;
      }
      return std::nullopt;
    };
    int checked = 0;
    for (int rep = 0; rep < 20000 && checked < 1000; ++rep) {
      Vec x(P.domain.dim());
      for (int i = 0; i < P.domain.dim(); ++i)
        x[i] = P.domain.lower()[i] +
               u01(rng) * (P.domain.upper()[i] - P.domain.lower()[i]);
      Jet J;
      try {
        J = P.sample_admissible(x, s);
      } catch (const std::runtime_error&) {
        continue;
      }
      const auto Kopt = cone_member();
      if (!Kopt) continue;
      const Jet K = *Kopt;
      ++checked;
      CHECK(P.constraint_classify(x, J + K) != Classification::Outside);
      const double before = P.evaluate(x, J);
      const double after = P.evaluate(x, J + K);
      CHECK(after >= before - 1e-9 * (1.0 + std::abs(before)));
    }
    CHECK(checked == 1000);
  }
}

TEST_CASE("uniform continuity structure check measures a positive delta") {
  BoxDomain Om = unit_square(0.05);
  OperatorPair P = ot_operator(1.0, Om);
  Report rep = check_regularity_UCF(P, Om, 0.1, 800, 7);
  CHECK(rep.pass());
  CHECK(rep.extra()["delta"].get<double>() > 0.0);
  // Constant-coefficient pairs short-circuit to the whole diameter.
  OperatorPair G = make_garding_operator(HyperbolicPolynomial::wave2(), Om);
  Report grep = check_regularity_UCF(G, Om, 0.1, 200, 7);
  CHECK(grep.pass());
  CHECK(grep.extra()["delta"].get<double>() == doctest::Approx(Om.diameter()));
}

TEST_CASE("correspondence oracle classification matches the direct admissibility test") {
  BoxDomain Om = unit_square(0.05);
  OperatorPair P = ot_operator(1.0, Om);
  CorrespondenceSubequation C = build_correspondence(P);
  JetSampler s(2, 6.0, 79);
  std::mt19937_64 rng(80);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = {u01(rng), u01(rng)};
    const Jet J = s.jet();
    const Classification c = C.oracle.classify(x, J);
    const bool admissible = P.constraint_classify(x, J) != Classification::Outside;
    const bool nonneg = P.evaluate(x, J) >= -tau_mem(jet_norm(J));
    CHECK((c != Classification::Outside) == (admissible && nonneg));
  }
  // A quadratic whose jet is a strict member is a classical subsolution.
  const Jet strict(0.0, {1.0, 1.0}, SymMatrix::identity(2) * 2.0);
  CHECK(C.oracle.classify({0.5, 0.5}, strict) == Classification::Inside);
}

TEST_CASE("correspondence oracle is fiber-continuous for each built-in pair") {
  JetWindow W2 = JetWindow::make(2, 3.0, 120, 1);
  for (OperatorPair P :
       {ot_operator(1.0, unit_square(0.05)), pma_example(0.1),
        make_garding_operator(HyperbolicPolynomial::wave2(), unit_square(0.05))}) {
    CorrespondenceSubequation C = build_correspondence(P);
    FiberegCertificate cert =
        certify_fiberegularity(C.oracle, P.domain, 0.1, W2, 100, 1);
    CHECK(cert.pass);
    CHECK(cert.delta > 0.0);
  }
  JetWindow W3 = JetWindow::make(3, 3.0, 120, 1);
  OperatorPair K = make_krylov_operator([](const Vec&) { return 1.0; }, 2,
                                        BoxDomain({0.0, 0.0, 0.0}, {1.0, 1.0, 0.5}, 0.1));
  CorrespondenceSubequation C = build_correspondence(K);
  FiberegCertificate cert = certify_fiberegularity(C.oracle, K.domain, 0.1, W3, 100, 1);
  CHECK(cert.pass);
  CHECK(cert.delta > 0.0);
}

TEST_CASE("admissible sampling throws when the constraint is empty") {
  OperatorPair P = ot_operator(1.0, unit_square());
  P.constraint = [](const Vec&, const Jet&) { return Classification::Outside; };
  JetSampler s(2, 5.0, 81);
  CHECK_THROWS_AS(P.sample_admissible({0.5, 0.5}, s, 100), std::runtime_error);
}
