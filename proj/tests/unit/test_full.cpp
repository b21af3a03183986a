#include <cmath>
#include <random>

#include "doctest.h"
#include "veselova/body.hpp"
#include "veselova/errors.hpp"
#include "veselova/full_dynamics.hpp"

using namespace veselova;

TEST_CASE("constraint residuals") {
  const SkewMatrix w = wedge(Vector::Unit(3, 1), Vector::Unit(3, 2));
  const FullState bad{OrthogonalMatrix::identity(3), w};
  CHECK(std::abs(constraint_residuals(bad)[0]) == doctest::Approx(1.0));
  std::mt19937_64 rng(21);
  for (int n = 3; n <= 6; ++n) CHECK(max_constraint_residual(random_admissible_state(MassTensor(Vector::LinSpaced(n, 1.0, 2.0)), rng)) < 1e-14);
}

TEST_CASE("multipliers") {
  const MassTensor J{1, 2, 3, 4};
  const FullState s = steady_rotation_state(J, PrincipalPlane::axes(J, 1, 3), 1.3, 0.2);
  CHECK(solve_multipliers(J, s).values.cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(22);
  const MassTensor iso{2, 2, 2, 2, 2};
  const FullState r = random_admissible_state(iso, rng);
  CHECK(solve_multipliers(iso, r).values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(vector_field_full(iso, r).omega_dot.norm() < 1e-12);

  // n = 3: one multiplier, fixed by d/dt <E_2 ^ E_3, Omega> = 0.
  const MassTensor J3{1, 2, 3};
  const FullState t = random_admissible_state(J3, rng);
  const MultiplierSet m = solve_multipliers(J3, t);
  REQUIRE(m.values.size() == 1);
  const Matrix& g = t.g.matrix();
  const SkewMatrix e = wedge(g.row(1).transpose(), g.row(2).transpose());
  const SkewMatrix c = commutator(inertia_apply(J3, t.omega), t.omega);
  const double direct = -pairing(inertia_inverse_apply(J3, c), e) / pairing(inertia_inverse_apply(J3, e), e);
  CHECK(m.values[0] == doctest::Approx(direct).epsilon(1e-12));
  CHECK(m.residual < 1e-12);
}

TEST_CASE("full vector field") {
  const MassTensor J{1, 2, 3, 5};
  const FullState s = steady_rotation_state(J, PrincipalPlane::axes(J, 0, 2), 2.0);
  CHECK(vector_field_full(J, s).omega_dot.norm() < 1e-12);

  std::mt19937_64 rng(23);
  for (int k = 0; k < 5; ++k) {
    const FullState r = random_admissible_state(J, rng);
    const FullTangent t = vector_field_full(J, r);
    CHECK(std::abs(pairing(inertia_apply(J, r.omega), t.omega_dot)) < 1e-12);
  }
}

TEST_CASE("steady rotation state") {
  const MassTensor J{1, 2, 3};
  const FullState s = steady_rotation_state(J, PrincipalPlane::axes(J, 0, 1), 2.0);
  CHECK(energy(J, s.omega) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(momentum_norm_sq(J, s.omega) == doctest::Approx(36.0).epsilon(1e-14));
  CHECK(commutator(inertia_apply(J, s.omega), s.omega).norm() < 1e-14);
  const MassTensor iso{1, 1, 1, 1};
  const FullState t = steady_rotation_state(iso, PrincipalPlane::axes(iso, 1, 3), 1.5);
  CHECK(energy(iso, t.omega) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("steady rotation integrates to the exponential") {
  const MassTensor J{1, 2, 3};
  const FullState s = steady_rotation_state(J, PrincipalPlane::axes(J, 0, 1), 2.0, 0.3);
  FullOptions o;
  o.dt = M_PI / 20000;
  o.steps = 20000;
  const FullState end = integrate_full(J, s, o);
  const Matrix closed = s.g.matrix() * mat_exp_rank2(s.omega, M_PI).matrix();
  CHECK((end.g.matrix() - closed).norm() < 1e-8);
  CHECK((end.g.matrix() - s.g.matrix()).norm() < 1e-8);
}

TEST_CASE("full integration conserves energy") {
  std::mt19937_64 rng(24);
  for (int n = 3; n <= 5; ++n) {
    const MassTensor J(Vector::LinSpaced(n, 1.0, 1.0 + n));
    const FullState s0 = random_admissible_state(J, rng);
    const double H0 = energy(J, s0.omega);
    FullOptions o;
    o.steps = 20000;
    double worst = 0.0, res = 0.0;
    o.stride = 100;
    integrate_full(J, s0, o, [&](double, const FullState& s) {
      worst = std::max(worst, std::abs(energy(J, s.omega) - H0) / H0);
      res = std::max(res, max_constraint_residual(s));
    });
    CHECK(worst < 1e-10);
    CHECK(res < 1e-12);
  }
  const MassTensor J{1, 2, 3};
  const FullState rest{OrthogonalMatrix::identity(3), SkewMatrix(3)};
  FullOptions o;
  o.steps = 100;
  CHECK((integrate_full(J, rest, o).g.matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("drift guard") {
  const MassTensor J{1, 2, 3};
  std::mt19937_64 rng(25);
  const FullState s0 = random_admissible_state(J, rng, 30.0);
  FullOptions o;
  o.dt = 0.5;
  o.steps = 100;
  CHECK_THROWS_AS(integrate_full(J, s0, o), DriftError);
}

TEST_CASE("projection to the first reduction") {
  const MassTensor J{1, 2, 3};
  const FullState s{OrthogonalMatrix::identity(3), wedge(Vector::Unit(3, 0), Vector::Unit(3, 1))};
  const ReducedState r = project_to_reduced(J, s);
  CHECK((r.q - Vector::Unit(3, 0)).norm() == 0.0);
  CHECK((r.p - 3.0 * Vector::Unit(3, 1)).norm() < 1e-15);

  std::mt19937_64 rng(26);
  const MassTensor J5{1, 1.5, 2.5, 3, 4};
  for (int k = 0; k < 5; ++k) {
    const FullState f = random_admissible_state(J5, rng);
    CHECK(energy(J5, f.omega) == doctest::Approx(hamiltonian_reduced(J5, project_to_reduced(J5, f))).epsilon(1e-12));
  }
}

TEST_CASE("lift and reduction commute with the flows") {
  const MassTensor J{1, 2, 3, 4};
  std::mt19937_64 rng(27);
  const ReducedState r0 = random_reduced_state(4, rng);
  const FullState f0 = lift_reduced(J, r0);
  const ReducedState back = project_to_reduced(J, f0);
  CHECK((back.q - r0.q).norm() < 1e-13);
  CHECK((back.p - r0.p).norm() < 1e-13);

  FullOptions fo;
  fo.steps = 5000;
  IntegrationOptions ro;
  ro.steps = 5000;
  const ReducedState a = project_to_reduced(J, integrate_full(J, f0, fo));
  const ReducedState b = integrate_reduced(J, r0, ro);
  CHECK((a.q - b.q).norm() < 1e-7);
  CHECK((a.p - b.p).norm() < 1e-7);
}

TEST_CASE("group action") {
  const MassTensor J{1, 2, 2, 2};
  std::mt19937_64 rng(28);
  const FullState s = random_admissible_state(J, rng);
  Matrix A = Matrix::Identity(4, 4);
  A.bottomRightCorner(3, 3) = random_orthogonal(3, rng).matrix();
  Matrix B = Matrix::Identity(4, 4);
  B.bottomRightCorner(3, 3) = random_orthogonal(3, rng).matrix();
  const FullState t = group_act(A, B, s);
  CHECK(max_constraint_residual(t) < 1e-13);
  CHECK(energy(J, t.omega) == doctest::Approx(energy(J, s.omega)).epsilon(1e-13));
}
