#pragma once

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "veselova/reduced_dynamics.hpp"

namespace veselova {

// Configuration g in O(n) and body angular velocity Omega in so(n).
struct FullState {
  OrthogonalMatrix g;
  SkewMatrix omega;
};

struct MultiplierSet {
  std::vector<std::pair<int, int>> pairs;  // (r, s), 1 <= r < s <= n-1 (0-based rows of g)
  Vector values;
  double residual = 0.0;  // constraint violation of the resulting acceleration
};

struct FullTangent {
  Matrix g_dot;
  SkewMatrix m_dot;
  SkewMatrix omega_dot;
};

struct FullOptions {
  double dt = 1e-3;
  long steps = 100000;
  long stride = 1;
  double energy_guard = 1e-6;
  double orth_tol = 1e-10;
};

// <E_r ^ E_s, Omega> for 2 <= r < s <= n, E_r = g^T e_r.
Vector constraint_residuals(const FullState& s);
double max_constraint_residual(const FullState& s);

MultiplierSet solve_multipliers(const MassTensor& J, const FullState& s);
FullTangent vector_field_full(const MassTensor& J, const FullState& s);

double energy(const MassTensor& J, const SkewMatrix& omega);
// ||M||^2 = <I Omega, I Omega>.
double momentum_norm_sq(const MassTensor& J, const SkewMatrix& omega);

// Removes the components of Omega along E_r ^ E_s, leaving Omega = q ^ v.
SkewMatrix project_admissible(const Matrix& g, const SkewMatrix& omega);

using FullObserver = std::function<void(double t, const FullState& s)>;

FullState integrate_full(const MassTensor& J, const FullState& s0, const FullOptions& opts,
                         const FullObserver& observer = {});

FullState steady_rotation_state(const MassTensor& J, const PrincipalPlane& plane, double speed, double phase = 0.0);

// q = g^T e_1, p = -I(Omega) q.
ReducedState project_to_reduced(const MassTensor& J, const FullState& s);

// Admissible state over (q, p): g has first row q and Omega = q ^ qdot.
FullState lift_reduced(const MassTensor& J, const ReducedState& s, const Matrix& completion = Matrix());

// (A, B) . (g, Omega) = (A g B^T, B Omega B^T).
FullState group_act(const Matrix& A, const Matrix& B, const FullState& s);

Matrix random_orthogonal(int n, std::mt19937_64& rng);
FullState random_admissible_state(const MassTensor& J, std::mt19937_64& rng, double speed_scale = 1.0);

}  // namespace veselova
