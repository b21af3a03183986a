#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veselova/reduced_dynamics.hpp"

namespace veselova {

enum class StratumTag { S0, S0p, S1, S1p, S2, S3, S3p, S4 };

std::string stratum_name(StratumTag tag);

// Orbit type of a point of the orbit space. For the axisymmetric space only
// isotropy_first is used: the isotropy group is O(isotropy_first).
// For the cylindrical space the isotropy group is O(isotropy_first) x O(isotropy_second).
struct Stratum {
  StratumTag tag = StratumTag::S4;
  int isotropy_first = 0;
  int isotropy_second = 0;
};

// ---- axisymmetric body, invariants (q1, p1, P) ----

struct AxiPoint {
  double q1 = 0.0;
  double p1 = 0.0;
  double P = 0.0;
};

struct AxiTangent {
  double q1_dot = 0.0;
  double p1_dot = 0.0;
  double P_dot = 0.0;
};

AxiPoint axi_invariants(const ReducedState& s, int axis = 0);
// Vertices (-1,0,0) -> S0 and (1,0,0) -> S0', canoe surface -> S2, interior -> S3.
Stratum axi_stratum(const AxiPoint& a, int n, double tol = 1e-9);
bool axi_in_space(const AxiPoint& a, double tol = 1e-9);

// j1 belongs to the symmetry axis, j2 is the repeated eigenvalue.
double axi_hamiltonian(double j1, double j2, const AxiPoint& a);
AxiTangent axi_vector_field(double j1, double j2, const AxiPoint& a);

struct AxiClosedForm {
  double omega = 0.0;  // sqrt(2h / (j1 + j2))
  double A = 0.0;
  double B = 0.0;
  double q1(double t) const;
  double p1(double t, double j1, double j2) const;
};

// Solution q1 = A cos(w t) + B sin(w t) through the initial point.
AxiClosedForm axi_closed_form(double j1, double j2, const AxiPoint& a0);

// Representative (q, p) over a, with q_2, p_2 in the first two transverse axes.
ReducedState axi_lift(const AxiPoint& a, int n, int axis = 0);

// ---- cylindrical body, invariants (A, B, P, D) ----

struct CylPoint {
  double A = 0.0;
  double B = 0.0;
  double P = 0.0;
  double D = 0.0;
};

struct CylTangent {
  double A_dot = 0.0;
  double B_dot = 0.0;
  double P_dot = 0.0;
  double D_dot = 0.0;
};

// Invariants for the split R^n = R^r x R^{n-r} along the first r coordinates.
CylPoint cyl_invariants(const ReducedState& s, int r);
// Same, for an arbitrary index set of the first block.
CylPoint cyl_invariants(const ReducedState& s, const std::vector<int>& first_block);

Stratum cyl_stratum(const CylPoint& c, int r, int r_prime, double tol = 1e-9);
bool cyl_in_space(const CylPoint& c, double tol = 1e-9);

struct CylBetas {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

CylBetas cyl_betas(double j1, double j2, double A);
double cyl_hamiltonian(double j1, double j2, const CylPoint& c);
CylTangent cyl_vector_field(double j1, double j2, const CylPoint& c);
double cyl_measure_density(double j1, double j2, double A);
double integral_F(double j1, double j2, const CylPoint& c, double H);

// Equilibrium (A0, B0, P, 0) on the level H = h; nullopt when A0 is outside [0, 1].
std::optional<CylPoint> cyl_equilibrium(double j1, double j2, double h, double P);

struct CylClosedForm {
  double j1 = 0.0;
  double j2 = 0.0;
  double h = 0.0;
  double P = 0.0;
  double omega = 0.0;  // sqrt(8h / (j1 + j2))
  double C1 = 0.0;
  double C2 = 0.0;
  double A_star = 0.0;
  double B_star = 0.0;
  CylPoint at(double t) const;
  double period() const;
};

CylClosedForm cyl_closed_form(double j1, double j2, const CylPoint& c0);

// Representative (q, p) over c with q_1, p_1 in axes 0, 1 and q_2, p_2 in axes r, r + 1.
ReducedState cyl_lift(const CylPoint& c, int r, int r_prime);

// Isotropy of (q, p) under O(r) x O(n-r), computed from the ranks of [q_i p_i].
Stratum cyl_isotropy(const ReducedState& s, int r, double tol = 1e-9);

// Isotropy of (q, p) under the O(n-1) fixing the symmetry axis.
Stratum axi_isotropy(const ReducedState& s, int axis = 0, double tol = 1e-9);

struct StratumSample {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  StratumTag tag = StratumTag::S4;
};

// Grid samples of the canoe (q1, p1, P) at fixed P, or of the cone section (A, B, D) at fixed P.
std::vector<StratumSample> canoe_samples(double P, int grid, int n);
std::vector<StratumSample> cone_section_samples(double P, int grid, int r, int r_prime);

}  // namespace veselova
