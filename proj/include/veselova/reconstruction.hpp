#pragma once

#include <cstdint>
#include <vector>

#include "veselova/full_dynamics.hpp"
#include "veselova/second_reduction.hpp"

namespace veselova {

// g = g0 [q^T; p^T/|p|; (q x p)^T/|p|] for n = 3. g0 must fix e_1.
OrthogonalMatrix reconstruct_3d_at(const ReducedState& s, const Matrix& g0 = Matrix());
std::vector<OrthogonalMatrix> reconstruct_3d(const std::vector<ReducedState>& traj, const Matrix& g0 = Matrix());

// Omega = q ^ qdot along the reduced flow.
SkewMatrix reconstructed_omega(const MassTensor& J, const ReducedState& s);

// || d/dt I(Omega) - [I(Omega), Omega] - sum lambda_rs E_r ^ E_s || with least-squares multipliers.
double full_equation_residual(const MassTensor& J, const Matrix& g, const SkewMatrix& omega,
                              const SkewMatrix& omega_dot);

struct Embedding {
  Matrix body_basis;   // P_b
  Matrix space_basis;  // P_s
  int block = 0;       // 3 or 4
  MassTensor mass;     // P_b J P_b^T
  FullState state;     // (P_s g P_b^T, P_b Omega P_b^T)
  MassTensor block_mass;
  FullState block_state;  // leading block x block part
};

Embedding embed_axisymmetric(const MassTensor& J, const FullState& s0, std::uint64_t seed = 7);
Embedding embed_cylindrical(const MassTensor& J, const FullState& s0, std::uint64_t seed = 7);

// Largest entry of g and Omega outside the leading block x block pattern.
double off_block_mass(const FullState& s, int block);

struct RelEqFrequencies {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
};

RelEqFrequencies cyl_releq_frequencies(double j1, double j2, double h, double P);

struct RelEqSample {
  ReducedState reduced;
  OrthogonalMatrix g;
  SkewMatrix omega;
  SkewMatrix omega_dot;
};

// Explicit n = 4 relative equilibrium over (A0, B0, P, 0) at time t.
RelEqSample cyl_releq_reconstruction(double j1, double j2, double h, double P, double t);

struct AxisTrace {
  std::vector<double> t;
  std::vector<Eigen::Vector3d> samples;
};

// (q1, p1/sqrt P, +-sqrt L) with the branch following the previous samples.
AxisTrace axis_trace(const std::vector<double>& t, const std::vector<ReducedState>& traj);
// g f_1 read from the reconstructed frames.
AxisTrace axis_trace_from_frames(const std::vector<double>& t, const std::vector<OrthogonalMatrix>& frames);

// x1^2 + P x2^2 / (2H(J1+J2)) - (4 H J2 - P) / (2H(J2 - J1)).
double axis_cylinder_residual(double j1, double j2, double H, double P, const Eigen::Vector3d& x);

}  // namespace veselova
