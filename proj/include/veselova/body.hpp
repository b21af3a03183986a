#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "veselova/son.hpp"

namespace veselova {

constexpr double default_eigen_tolerance = 1e-9;

struct EigenGroup {
  double value = 0.0;
  std::vector<int> indices;
};

// Groups of equal diagonal entries (relative tolerance), sorted by value.
std::vector<EigenGroup> eigenvalue_groups(const MassTensor& J, double rel_tol = default_eigen_tolerance);

struct Generic {};

struct Axisymmetric {
  int axis = 0;        // index of the simple eigenvalue J_1
  double j1 = 0.0;
  double j2 = 0.0;     // eigenvalue of multiplicity n-1
};

// Two eigenvalues J_1 (multiplicity r) and J_2 (multiplicity r'), 2 <= r <= r'.
struct Cylindrical {
  double j1 = 0.0;
  double j2 = 0.0;
  std::vector<int> first;
  std::vector<int> second;
  int r() const { return static_cast<int>(first.size()); }
  int r_prime() const { return static_cast<int>(second.size()); }
};

struct OtherMultiplicity {
  std::vector<EigenGroup> groups;
};

using SymmetryClass = std::variant<Generic, Axisymmetric, Cylindrical, OtherMultiplicity>;

SymmetryClass classify_symmetry(const MassTensor& J, double rel_tol = default_eigen_tolerance);
std::string symmetry_name(const SymmetryClass& c);
bool is_isotropic(const MassTensor& J, double rel_tol = default_eigen_tolerance);

// Invariant 2-plane span{a, b} with a, b orthonormal. For planes spanned by principal
// axes, i and j hold the axis indices (i < j); otherwise both are -1.
struct PrincipalPlane {
  int i = -1;
  int j = -1;
  Vector a;
  Vector b;
  double moment = 0.0;

  static PrincipalPlane axes(const MassTensor& J, int i, int j);
  // a, b must lie in eigenspaces of J; throws DegenerateBody otherwise.
  static PrincipalPlane from_basis(const MassTensor& J, const Vector& a, const Vector& b);
};

// Planes spanned by principal axes, one per index pair; planes inside a degenerate
// eigenspace are represented by their index-pair representatives.
std::vector<PrincipalPlane> principal_planes(const MassTensor& J);

struct ExtremalPlanes {
  std::vector<PrincipalPlane> minimal;
  std::vector<PrincipalPlane> maximal;
};

ExtremalPlanes extremal_planes(const MassTensor& J, double rel_tol = default_eigen_tolerance);

// Diagonal A with I(a ^ b) = (A a) ^ (A b) for all a, b, when one exists.
std::optional<Vector> fj_matrix(const MassTensor& J, double rel_tol = default_eigen_tolerance);

// Least-squares fit of A_i A_j ~ J_i + J_j over all pairs.
Vector fj_least_squares(const MassTensor& J);

// max over random unit pairs a, b of ||I(a ^ b) - (A a) ^ (A b)||.
double fj_condition_residual(const MassTensor& J, const Vector& A, int samples = 100, std::uint64_t seed = 1);

// det of the leading 4x4 block of I((f_1 + f_3) ^ (f_2 + f_4)) = (J_1 - J_3)^2 (J_2 - J_4)^2.
double rank2_preservation_witness(const MassTensor& J);

// Largest witness over all ordered choices of four distinct axes.
double rank2_preservation_witness_max(const MassTensor& J);

}  // namespace veselova
