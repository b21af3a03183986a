#include <cmath>
#include <random>

#include "doctest.h"
#include "veselova/body.hpp"
#include "veselova/errors.hpp"
#include "veselova/reconstruction.hpp"

using namespace veselova;

TEST_CASE("three-dimensional reconstruction") {
  const ReducedState s{Vector::Unit(3, 0), 2.0 * Vector::Unit(3, 1)};
  CHECK((reconstruct_3d_at(s).matrix() - Matrix::Identity(3, 3)).norm() < 1e-15);

  const MassTensor J{1, 2, 3};
  std::mt19937_64 rng(41);
  const ReducedState r0 = random_reduced_state(3, rng);
  std::vector<ReducedState> traj;
  IntegrationOptions o;
  o.steps = 2000;
  o.stride = 50;
  integrate_reduced(J, r0, o, [&](double, const ReducedState& x) { traj.push_back(x); });
  const auto frames = reconstruct_3d(traj);
  REQUIRE(frames.size() == traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const FullState f{frames[k], reconstructed_omega(J, traj[k])};
    CHECK(max_constraint_residual(f) < 1e-10);
    const ReducedState back = project_to_reduced(J, f);
    CHECK((back.q - traj[k].q).norm() < 1e-12);
    CHECK((back.p - traj[k].p).norm() < 1e-12);
  }
}

TEST_CASE("relative equilibrium frequencies") {
  const RelEqFrequencies f = cyl_releq_frequencies(1.0, 2.0, 1.0, 6.0);
  CHECK(f.omega1 == doctest::Approx(0.8944271910).epsilon(1e-9));
  CHECK(f.omega2 == doctest::Approx(0.7559289460).epsilon(1e-9));
  CHECK(f.omega3 == doctest::Approx(-0.8280786712).epsilon(1e-9));
  CHECK_THROWS_AS(cyl_releq_reconstruction(1.0, 2.0, 1.0, 12.0, 0.0), OutsideImage);
  CHECK_THROWS_AS(cyl_releq_reconstruction(2.0, 2.0, 1.0, 6.0, 0.0), DegenerateBody);
}

TEST_CASE("relative equilibrium solves the full equations") {
  const MassTensor J{1, 1, 2, 2};
  for (double t : {0.0, 0.7, 3.1, 12.5}) {
    const RelEqSample s = cyl_releq_reconstruction(1.0, 2.0, 1.0, 6.0, t);
    CHECK(max_constraint_residual({s.g, s.omega}) < 1e-12);
    CHECK(full_equation_residual(J, s.g.matrix(), s.omega, s.omega_dot) < 1e-10);
    const CylPoint c = cyl_invariants(s.reduced, 2);
    CHECK(c.A == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.B == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(c.D) < 1e-12);
  }
}

TEST_CASE("axisymmetric embedding") {
  const MassTensor J{1, 2, 2, 2};
  std::mt19937_64 rng(42);
  const FullState s0 = random_admissible_state(J, rng);
  const Embedding e = embed_axisymmetric(J, s0);
  CHECK(e.block == 3);
  CHECK(off_block_mass(e.state, 3) < 1e-12);
  CHECK((e.block_mass.diagonal() - Eigen::Vector3d(1, 2, 2)).norm() < 1e-12);
  CHECK(energy(e.mass, e.state.omega) == doctest::Approx(energy(J, s0.omega)).epsilon(1e-12));

  FullOptions o;
  o.steps = 2000;
  const FullState end = integrate_full(e.mass, e.state, o);
  const FullState small = integrate_full(e.block_mass, e.block_state, o);
  CHECK(off_block_mass(end, 3) < 1e-10);
  CHECK((end.g.matrix().topLeftCorner(3, 3) - small.g.matrix()).norm() < 1e-10);

  CHECK_THROWS_AS(embed_axisymmetric(MassTensor{1, 2, 3, 4}, s0), DegenerateBody);
}

TEST_CASE("cylindrical embedding") {
  const MassTensor J{1, 1, 1, 2, 2};
  std::mt19937_64 rng(43);
  const FullState s0 = random_admissible_state(J, rng);
  const Embedding e = embed_cylindrical(J, s0);
  CHECK(e.block == 4);
  CHECK(off_block_mass(e.state, 4) < 1e-12);
  FullOptions o;
  o.steps = 2000;
  CHECK(off_block_mass(integrate_full(e.mass, e.state, o), 4) < 1e-10);
}

TEST_CASE("axis trace lies on its cylinder") {
  const MassTensor J{1, 2, 2};
  const ReducedState s0 = axi_lift({0.3, 0.5, 6.0}, 3);
  const double H = hamiltonian_reduced(J, s0);
  std::vector<double> t;
  std::vector<ReducedState> traj;
  IntegrationOptions o;
  o.steps = 20000;
  o.stride = 20;
  integrate_reduced(J, s0, o, [&](double time, const ReducedState& s) {
    t.push_back(time);
    traj.push_back(s);
  });
  const AxisTrace trace = axis_trace(t, traj);
  REQUIRE(trace.samples.size() == traj.size());
  double worst = 0.0, jump = 0.0;
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    worst = std::max(worst, std::abs(axis_cylinder_residual(1.0, 2.0, H, 6.0, trace.samples[k])));
    CHECK(std::abs(trace.samples[k].norm() - 1.0) < 1e-10);
    if (k > 0) jump = std::max(jump, (trace.samples[k] - trace.samples[k - 1]).norm());
  }
  CHECK(worst < 1e-8);
  CHECK(jump < 0.1);

  const AxisTrace frames = axis_trace_from_frames(t, reconstruct_3d(traj));
  for (std::size_t k = 0; k < frames.samples.size(); k += 50)
    CHECK(std::abs(axis_cylinder_residual(1.0, 2.0, H, 6.0, frames.samples[k])) < 1e-8);
}
