#include "veselova/body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::vector<EigenGroup> eigenvalue_groups(const MassTensor& J, double rel_tol) {
  std::vector<int> order(J.dim());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return J[a] < J[b]; });
  std::vector<EigenGroup> groups;
  for (int idx : order) {
    if (!groups.empty() && close(groups.back().value, J[idx], rel_tol)) {
      groups.back().indices.push_back(idx);
    } else {
      groups.push_back({J[idx], {idx}});
    }
  }
  for (auto& g : groups) std::sort(g.indices.begin(), g.indices.end());
  return groups;
}

bool is_isotropic(const MassTensor& J, double rel_tol) { return eigenvalue_groups(J, rel_tol).size() == 1; }

SymmetryClass classify_symmetry(const MassTensor& J, double rel_tol) {
  auto groups = eigenvalue_groups(J, rel_tol);
  const int n = J.dim();
  if (static_cast<int>(groups.size()) == n) return Generic{};
  if (groups.size() == 2) {
    const EigenGroup& a = groups[0];
    const EigenGroup& b = groups[1];
    if (a.indices.size() == 1 || b.indices.size() == 1) {
      const EigenGroup& single = a.indices.size() == 1 ? a : b;
      const EigenGroup& multi = a.indices.size() == 1 ? b : a;
      if (static_cast<int>(multi.indices.size()) == n - 1) return Axisymmetric{single.indices[0], single.value, multi.value};
    } else {
      // The block of smaller multiplicity comes first; ties go to the block holding axis 0.
      bool a_first = a.indices.size() < b.indices.size() ||
                     (a.indices.size() == b.indices.size() && a.indices.front() < b.indices.front());
      const EigenGroup& f = a_first ? a : b;
      const EigenGroup& s = a_first ? b : a;
      return Cylindrical{f.value, s.value, f.indices, s.indices};
    }
  }
  return OtherMultiplicity{std::move(groups)};
}

std::string symmetry_name(const SymmetryClass& c) {
  struct Visitor {
    std::string operator()(const Generic&) const { return "generic"; }
    std::string operator()(const Axisymmetric&) const { return "axisymmetric"; }
    std::string operator()(const Cylindrical&) const { return "cylindrical"; }
    std::string operator()(const OtherMultiplicity&) const { return "other"; }
  };
  return std::visit(Visitor{}, c);
}

PrincipalPlane PrincipalPlane::axes(const MassTensor& J, int i, int j) {
  const int n = J.dim();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw DimensionError("invalid principal plane indices");
  if (i > j) std::swap(i, j);
  return PrincipalPlane{i, j, Vector::Unit(n, i), Vector::Unit(n, j), J.plane_moment(i, j)};
}

PrincipalPlane PrincipalPlane::from_basis(const MassTensor& J, const Vector& a, const Vector& b) {
  const int n = J.dim();
  if (a.size() != n || b.size() != n) throw DimensionError("plane basis has wrong length");
  if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10 || std::abs(a.dot(b)) > 1e-10)
    throw DegenerateBody("plane basis must be orthonormal");
  const Vector& d = J.diagonal();
  const double la = J.quadratic(a);
  const double lb = J.quadratic(b);
  if ((d.cwiseProduct(a) - la * a).norm() > 1e-9 || (d.cwiseProduct(b) - lb * b).norm() > 1e-9)
    throw DegenerateBody("plane is not spanned by eigenvectors of the mass tensor");
  return PrincipalPlane{-1, -1, a, b, la + lb};
}

std::vector<PrincipalPlane> principal_planes(const MassTensor& J) {
  std::vector<PrincipalPlane> out;
  for (int i = 0; i < J.dim(); ++i)
    for (int j = i + 1; j < J.dim(); ++j) out.push_back(PrincipalPlane::axes(J, i, j));
  return out;
}

ExtremalPlanes extremal_planes(const MassTensor& J, double rel_tol) {
  auto planes = principal_planes(J);
  double lo = planes.front().moment;
  double hi = lo;
  for (const auto& p : planes) {
    lo = std::min(lo, p.moment);
    hi = std::max(hi, p.moment);
  }
  ExtremalPlanes out;
  for (const auto& p : planes) {
    if (close(p.moment, lo, rel_tol)) out.minimal.push_back(p);
    if (close(p.moment, hi, rel_tol)) out.maximal.push_back(p);
  }
  return out;
}

std::optional<Vector> fj_matrix(const MassTensor& J, double rel_tol) {
  const int n = J.dim();
  if (n == 3) {
    Vector A(3);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      A[i] = std::sqrt((J[i] + J[j]) * (J[i] + J[k]) / (J[j] + J[k]));
    }
    return A;
  }
  if (is_isotropic(J, rel_tol)) return Vector::Constant(n, std::sqrt(2.0 * J[0]));
  const auto cls = classify_symmetry(J, rel_tol);
  if (const auto* ax = std::get_if<Axisymmetric>(&cls)) {
    Vector A = Vector::Constant(n, std::sqrt(2.0 * ax->j2));
    A[ax->axis] = (ax->j1 + ax->j2) / std::sqrt(2.0 * ax->j2);
    return A;
  }
  return std::nullopt;
}

Vector fj_least_squares(const MassTensor& J) {
  const int n = J.dim();
  const int m = n * (n - 1) / 2;
  Vector A = (2.0 * J.diagonal()).cwiseSqrt();
  auto residual = [&](const Vector& x) {
    Vector r(m);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) r[k++] = x[i] * x[j] - J.plane_moment(i, j);
    return r;
  };
  double mu = 1e-3;
  Vector r = residual(A);
  for (int it = 0; it < 200; ++it) {
    Matrix jac = Matrix::Zero(m, n);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++k) {
        jac(k, i) = A[j];
        jac(k, j) = A[i];
      }
    const Matrix jtj = jac.transpose() * jac;
    const Vector g = jac.transpose() * r;
    if (g.norm() < 1e-14) break;
    const Vector step = (jtj + mu * Matrix(jtj.diagonal().asDiagonal())).ldlt().solve(-g);
    const Vector trial = A + step;
    const Vector rt = residual(trial);
    if (rt.squaredNorm() < r.squaredNorm()) {
      A = trial;
      r = rt;
      mu = std::max(mu * 0.3, 1e-12);
    } else {
      mu *= 10.0;
    }
  }
  return A;
}

double fj_condition_residual(const MassTensor& J, const Vector& A, int samples, std::uint64_t seed) {
  const int n = J.dim();
  if (A.size() != n) throw DimensionError("A has wrong length");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) a[i] = normal(rng);
    for (int i = 0; i < n; ++i) b[i] = normal(rng);
    a.normalize();
    b -= b.dot(a) * a;
    b.normalize();
    const SkewMatrix lhs = inertia_apply(J, wedge(a, b));
    const SkewMatrix rhs = wedge(A.cwiseProduct(a), A.cwiseProduct(b));
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

namespace {

double witness_for(const MassTensor& J, const std::array<int, 4>& idx) {
  const int n = J.dim();
  const Vector u = Vector::Unit(n, idx[0]) + Vector::Unit(n, idx[2]);
  const Vector v = Vector::Unit(n, idx[1]) + Vector::Unit(n, idx[3]);
  const Matrix m = inertia_apply(J, wedge(u, v)).dense();
  Eigen::Matrix4d block;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) block(r, c) = m(idx[r], idx[c]);
  return block.determinant();
}

}  // namespace

double rank2_preservation_witness(const MassTensor& J) {
  if (J.dim() < 4) throw DimensionError("rank-2 witness needs n >= 4");
  return witness_for(J, {0, 1, 2, 3});
}

double rank2_preservation_witness_max(const MassTensor& J) {
  const int n = J.dim();
  if (n < 4) throw DimensionError("rank-2 witness needs n >= 4");
  double best = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          best = std::max(best, witness_for(J, {a, b, c, d}));
        }
  return best;
}

}  // namespace veselova
