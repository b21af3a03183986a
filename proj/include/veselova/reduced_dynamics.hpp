#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "veselova/body.hpp"

namespace veselova {

// Point of T*S^{n-1}: |q| = 1 and q . p = 0.
struct ReducedState {
  Vector q;
  Vector p;
};

struct ReducedTangent {
  Vector q_dot;
  Vector p_dot;
};

// Throws DimensionError or OutsideSpace when s is not on T*S^{n-1} within tol.
void validate_reduced(const MassTensor& J, const ReducedState& s, double tol = 1e-9);

// Diagonal of C(q) = (J + (q . J q) Id)^{-1}.
Vector c_diagonal(const MassTensor& J, const Vector& q);

double hamiltonian_reduced(const MassTensor& J, const ReducedState& s);
ReducedTangent vector_field_reduced(const MassTensor& J, const ReducedState& s);

// Ambient gradients (dH/dq, dH/dp) of the closed-form Hamiltonian.
std::pair<Vector, Vector> hamiltonian_gradient(const MassTensor& J, const ReducedState& s);

double measure_density(const MassTensor& J, const Vector& q);
double chaplygin_multiplier_candidate(const MassTensor& J, const Vector& q);

using DensityFunction = std::function<double(const Vector& q)>;

// |div(mu X)| on T*S^{n-1} by central differences in an orthonormal tangent frame.
double measure_divergence_residual(const MassTensor& J, const ReducedState& s, double fd_step = 1e-5);
double divergence_residual(const MassTensor& J, const ReducedState& s, const DensityFunction& density,
                           double fd_step = 1e-5);

struct EMValue {
  double P = 0.0;
  double H = 0.0;
};

EMValue em_map(const MassTensor& J, const ReducedState& s);

// Slopes 2(J_i + J_j) of the critical rays H = P / (2(J_i + J_j)), ascending and de-duplicated.
std::vector<double> critical_ray_slopes(const MassTensor& J, double rel_tol = default_eigen_tolerance);

// Singular values of the tangential Jacobian of (P, H), descending.
Eigen::Vector2d em_jacobian_singular_values(const MassTensor& J, const ReducedState& s);

ReducedState steady_rotation_reduced(const MassTensor& J, const PrincipalPlane& plane, double P0, double phase = 0.0);

// Norm of grad H - l1 grad P - l2 grad(q.p) - l3 grad|q|^2 with the steady-rotation multipliers.
double steady_rotation_lagrange_residual(const MassTensor& J, const ReducedState& s);

enum class Convention { Minimal, Maximal };
enum class Verdict { Stable, NotDeterminedByThisCriterion };

struct StabilityAnalysis {
  Matrix hessian;              // in the slice basis (0,f_j), (f_k/w, 0), (0, b_k f_k)
  std::vector<bool> retained;  // false for directions along the symmetry group
  Convention convention = Convention::Minimal;
  Verdict verdict = Verdict::NotDeterminedByThisCriterion;
  std::vector<int> others;     // the indices k, in slice order
};

// Closed-form Hessian at the steady rotation in plane (i, j) with angular speed omega.
StabilityAnalysis stability_hessian(const MassTensor& J, int i, int j, double omega,
                                    double rel_tol = default_eigen_tolerance);

// Same Hessian by finite differences of H - lP -+ 1/2 (P - c)^2 on a retraction chart.
Matrix stability_hessian_fd(const MassTensor& J, int i, int j, double omega, Convention convention,
                            double fd_step = 1e-3);

struct IntegrationOptions {
  double dt = 1e-3;
  long steps = 100000;
  long stride = 1;
  // Relative energy change allowed per step before DriftError.
  double energy_guard = 1e-6;
};

using ReducedObserver = std::function<void(double t, const ReducedState& s)>;

// RK4 with projection back to T*S^{n-1} after each step.
ReducedState integrate_reduced(const MassTensor& J, const ReducedState& s0, const IntegrationOptions& opts,
                               const ReducedObserver& observer = {});

void project_reduced(ReducedState& s);

ReducedState random_reduced_state(int n, std::mt19937_64& rng, double momentum_scale = 1.0);

}  // namespace veselova
