#include <cmath>
#include <random>

#include "doctest.h"
#include "veselova/body.hpp"
#include "veselova/errors.hpp"
#include "veselova/reduced_dynamics.hpp"

using namespace veselova;

namespace {

ReducedState unit_state(int n, int i, int j) { return {Vector::Unit(n, i), Vector::Unit(n, j)}; }

}  // namespace

TEST_CASE("reduced state validation") {
  const MassTensor J{1, 2, 3};
  CHECK_NOTHROW(validate_reduced(J, unit_state(3, 0, 1)));
  CHECK_THROWS_AS(validate_reduced(J, {Vector::Ones(3), Vector::Zero(3)}), OutsideSpace);
  CHECK_THROWS_AS(validate_reduced(J, {Vector::Unit(3, 0), Vector::Unit(3, 0)}), OutsideSpace);
  CHECK_THROWS_AS(validate_reduced(J, {Vector::Unit(4, 0), Vector::Unit(4, 1)}), DimensionError);
}

TEST_CASE("C diagonal and hamiltonian") {
  const MassTensor J{1, 2, 3};
  const Vector c = c_diagonal(J, Vector::Unit(3, 0));
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(1.0 / 3.0));
  CHECK(c[2] == doctest::Approx(0.25));
  Vector q(3);
  q << 0.6, 0.0, 0.8;
  CHECK((c_diagonal(MassTensor{1.5, 1.5, 1.5}, q).array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);

  CHECK(hamiltonian_reduced(J, unit_state(3, 0, 1)) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(hamiltonian_reduced(J, {Vector::Unit(3, 0), Vector::Zero(3)}) == 0.0);
}

TEST_CASE("reduced vector field") {
  const MassTensor J{1, 2, 3};
  const ReducedTangent t = vector_field_reduced(J, unit_state(3, 0, 1));
  CHECK((t.q_dot - Vector::Unit(3, 1) / 3.0).norm() < 1e-15);
  CHECK((t.p_dot + Vector::Unit(3, 0) / 3.0).norm() < 1e-15);
  const ReducedTangent z = vector_field_reduced(J, {Vector::Unit(3, 0), Vector::Zero(3)});
  CHECK(z.q_dot.norm() == 0.0);
  CHECK(z.p_dot.norm() == 0.0);

  // Axisymmetric body: qdot_1 = p_1 / (J1 + J2).
  std::mt19937_64 rng(11);
  const MassTensor Ja{1, 2, 2, 2};
  for (int k = 0; k < 10; ++k) {
    const ReducedState s = random_reduced_state(4, rng);
    CHECK(vector_field_reduced(Ja, s).q_dot[0] == doctest::Approx(s.p[0] / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("gradients match finite differences") {
  const MassTensor J{1, 2.5, 3, 4.5};
  std::mt19937_64 rng(12);
  const ReducedState s = random_reduced_state(4, rng);
  const auto [gq, gp] = hamiltonian_gradient(J, s);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    ReducedState a = s, b = s;
    a.q[i] += h;
    b.q[i] -= h;
    auto H = [&](const ReducedState& x) {
      const Vector c = c_diagonal(J, x.q);
      const Vector cp = c.cwiseProduct(x.p), cq = c.cwiseProduct(x.q);
      const double pcq = x.p.dot(cq);
      return 0.5 * (x.p.dot(cp) - pcq * pcq / x.q.dot(cq));
    };
    CHECK((H(a) - H(b)) / (2 * h) == doctest::Approx(gq[i]).epsilon(1e-7));
    a = s;
    b = s;
    a.p[i] += h;
    b.p[i] -= h;
    CHECK((H(a) - H(b)) / (2 * h) == doctest::Approx(gp[i]).epsilon(1e-7));
  }
}

TEST_CASE("measure density and multiplier candidate") {
  const MassTensor J{1, 2, 3};
  CHECK(measure_density(J, Vector::Unit(3, 0)) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-14));
  CHECK(chaplygin_multiplier_candidate(J, Vector::Unit(3, 0)) == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
  // C = diag(1/2, 1/3, 1/3, 1/3), det C / (q.Cq) = 1/27.
  CHECK(chaplygin_multiplier_candidate(MassTensor{1, 2, 2, 2}, Vector::Unit(4, 0)) ==
        doctest::Approx(std::pow(27.0, 0.25)).epsilon(1e-14));
  CHECK(chaplygin_multiplier_candidate(MassTensor{1, 2, 3, 4}, Vector::Unit(4, 0)) ==
        doctest::Approx(std::pow(60.0, 0.25)).epsilon(1e-14));

  const MassTensor iso{1.5, 1.5, 1.5, 1.5};
  Vector q(4);
  q << 0.5, 0.5, -0.5, 0.5;
  const double expected = std::pow(3.0, -2.0) * std::sqrt(3.0);
  CHECK(measure_density(iso, q) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(measure_density(iso, Vector::Unit(4, 2)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("invariant measure divergence") {
  std::mt19937_64 rng(13);
  const MassTensor J{1, 2, 3};
  for (int k = 0; k < 10; ++k) CHECK(measure_divergence_residual(J, random_reduced_state(3, rng)) < 1e-6);
  const MassTensor iso{2, 2, 2, 2};
  for (int k = 0; k < 5; ++k) CHECK(measure_divergence_residual(iso, random_reduced_state(4, rng)) < 1e-8);
  int large = 0;
  for (int k = 0; k < 10; ++k)
    if (divergence_residual(J, random_reduced_state(3, rng), [](const Vector&) { return 1.0; }) > 1e-3) ++large;
  CHECK(large >= 9);
}

TEST_CASE("energy-momentum map") {
  const MassTensor J{1, 2, 3};
  const auto slopes = critical_ray_slopes(J);
  REQUIRE(slopes.size() == 3);
  CHECK(slopes[0] == 6.0);
  CHECK(slopes[1] == 8.0);
  CHECK(slopes[2] == 10.0);
  CHECK(critical_ray_slopes(MassTensor{1, 2, 2}).size() == 2);

  const EMValue zero = em_map(J, {Vector::Unit(3, 0), Vector::Zero(3)});
  CHECK(zero.P == 0.0);
  CHECK(zero.H == 0.0);

  for (const auto& plane : principal_planes(J)) {
    const ReducedState s = steady_rotation_reduced(J, plane, 2.0, 0.4);
    const EMValue v = em_map(J, s);
    CHECK(v.P == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(v.P - 2.0 * plane.moment * v.H) < 1e-12);
    CHECK(em_jacobian_singular_values(J, s)[1] < 1e-10);
    CHECK(steady_rotation_lagrange_residual(J, s) < 1e-12);
  }
  std::mt19937_64 rng(14);
  CHECK(em_jacobian_singular_values(J, random_reduced_state(3, rng))[1] > 1e-4);
}

TEST_CASE("steady rotation reduced state") {
  const MassTensor J{1, 2, 3};
  const ReducedState s = steady_rotation_reduced(J, PrincipalPlane::axes(J, 0, 1), 1.0, 0.0);
  CHECK((s.q - Vector::Unit(3, 0)).norm() < 1e-15);
  CHECK((s.p - Vector::Unit(3, 1)).norm() < 1e-15);
  CHECK(hamiltonian_reduced(J, s) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("stability hessian closed form") {
  const MassTensor J{1, 2, 3};
  const StabilityAnalysis a = stability_hessian(J, 0, 1, 2.0);
  CHECK(a.hessian(0, 0) == doctest::Approx(-4.0 * 4.0 * 9.0).epsilon(1e-14));
  CHECK(a.hessian(1, 1) == doctest::Approx(-2.0));
  CHECK(a.hessian(2, 2) == doctest::Approx(-1.0));
  CHECK(a.verdict == Verdict::Stable);
  CHECK(a.convention == Convention::Minimal);

  const StabilityAnalysis mid = stability_hessian(J, 0, 2, 2.0);
  CHECK(mid.hessian(1, 1) == doctest::Approx(-1.0));
  CHECK(mid.hessian(2, 2) == doctest::Approx(1.0));
  CHECK(mid.verdict == Verdict::NotDeterminedByThisCriterion);

  const StabilityAnalysis top = stability_hessian(J, 1, 2, 2.0);
  CHECK(top.convention == Convention::Maximal);
  CHECK(top.verdict == Verdict::Stable);
  CHECK(top.hessian(0, 0) > 0.0);
}

TEST_CASE("stability hessian finite differences") {
  for (const MassTensor& J : {MassTensor{1, 2, 3}, MassTensor{1, 2, 2}, MassTensor{1, 2, 3, 5}}) {
    for (const auto& plane : principal_planes(J)) {
      const StabilityAnalysis a = stability_hessian(J, plane.i, plane.j, 1.3);
      const Matrix fd = stability_hessian_fd(J, plane.i, plane.j, 1.3, a.convention);
      CHECK((fd - a.hessian).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  const StabilityAnalysis axial = stability_hessian(MassTensor{1, 2, 2}, 0, 1, 1.0);
  CHECK(axial.verdict == Verdict::Stable);
  CHECK(std::count(axial.retained.begin(), axial.retained.end(), false) == 1);
}

TEST_CASE("reduced integration") {
  const MassTensor J{1, 2, 3};
  IntegrationOptions o;
  o.dt = 1e-3;
  o.steps = 20000;
  std::mt19937_64 rng(15);
  const ReducedState s0 = random_reduced_state(3, rng);
  const double H0 = hamiltonian_reduced(J, s0), P0 = s0.p.squaredNorm();
  const ReducedState s1 = integrate_reduced(J, s0, o);
  CHECK(std::abs(hamiltonian_reduced(J, s1) - H0) / H0 < 1e-10);
  CHECK(std::abs(s1.p.squaredNorm() - P0) / P0 < 1e-10);
  CHECK(std::abs(s1.q.norm() - 1.0) < 1e-14);
  CHECK(std::abs(s1.q.dot(s1.p)) < 1e-13);

  const ReducedState rest{Vector::Unit(3, 1), Vector::Zero(3)};
  CHECK((integrate_reduced(J, rest, o).q - rest.q).norm() == 0.0);

  // Uniform rotation in the principal plane: period 2 pi sqrt(in / 2H).
  const ReducedState s = steady_rotation_reduced(J, PrincipalPlane::axes(J, 0, 2), 3.0, 0.0);
  const double period = 2.0 * M_PI * std::sqrt(4.0 / (2.0 * hamiltonian_reduced(J, s)));
  o.dt = period / 10000;
  o.steps = 10000;
  const ReducedState back = integrate_reduced(J, s, o);
  CHECK((back.q - s.q).norm() < 1e-10);
  CHECK((back.p - s.p).norm() < 1e-10);
}
