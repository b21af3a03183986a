#include "veselova/reconstruction.hpp"

#include <cmath>
#include <random>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

Eigen::Vector3d cross3(const Vector& a, const Vector& b) {
  return Eigen::Vector3d(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// Appends Gram-Schmidt images of candidates to basis, keeping only independent directions.
void extend_basis(std::vector<Vector>& basis, const std::vector<Vector>& candidates, std::size_t limit,
                  double tol = 1e-9) {
  for (const Vector& c : candidates) {
    if (basis.size() >= limit) return;
    Vector v = c;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) v -= v.dot(b) * b;
    const double nv = v.norm();
    if (nv > tol * std::max(1.0, c.norm())) basis.push_back(v / nv);
  }
}

// Orthonormal vectors completing basis inside the span of allowed (columns), random but seeded.
void complete_in(std::vector<Vector>& basis, const Matrix& allowed, std::size_t limit, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 64 && basis.size() < limit; ++attempt) {
    Vector coeff(allowed.cols());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff[i] = normal(rng);
    extend_basis(basis, {allowed * coeff}, limit, 1e-6);
  }
  if (basis.size() < limit) throw DegenerateConfiguration("could not complete the embedding basis");
}

Matrix rows_of(const std::vector<Vector>& rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

Matrix coordinate_span(int n, const std::vector<int>& idx) {
  Matrix m = Matrix::Zero(n, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) m(idx[k], k) = 1.0;
  return m;
}

Vector restrict_to(const Vector& v, const std::vector<int>& idx) {
  Vector out = Vector::Zero(v.size());
  for (int i : idx) out[i] = v[i];
  return out;
}

// P_s = [e_1; completion of g V_0; g b_k for k >= block].
Matrix space_basis(const Matrix& g, const Matrix& body, int block) {
  const int n = static_cast<int>(g.rows());
  std::vector<Vector> rows{Vector::Unit(n, 0)};
  std::vector<Vector> images;
  for (int k = 0; k < block; ++k) images.push_back(g * body.row(k).transpose());
  extend_basis(rows, images, block, 1e-6);
  if (static_cast<int>(rows.size()) < block) throw DegenerateConfiguration("space basis is rank deficient");
  for (int k = block; k < n; ++k) rows.push_back(g * body.row(k).transpose());
  return reorthonormalize(rows_of(rows)).matrix();
}

Embedding finish(const MassTensor& J, const FullState& s0, const Matrix& body, int block) {
  const Matrix space = space_basis(s0.g.matrix(), body, block);
  const Matrix g = space * s0.g.matrix() * body.transpose();
  const Matrix o = body * s0.omega.dense() * body.transpose();
  const Matrix jm = body * J.matrix() * body.transpose();
  const MassTensor mass(Vector(jm.diagonal()));
  FullState state{OrthogonalMatrix(g, 1e-9), SkewMatrix::from_dense(o)};
  FullState block_state{OrthogonalMatrix(Matrix(g.topLeftCorner(block, block)), 1e-8),
                        SkewMatrix::from_dense(o.topLeftCorner(block, block))};
  MassTensor block_mass(Vector(jm.diagonal().head(block)));
  return Embedding{body, space, block, mass, state, block_mass, block_state};
}

}  // namespace

OrthogonalMatrix reconstruct_3d_at(const ReducedState& s, const Matrix& g0) {
  if (s.q.size() != 3) throw DimensionError("3D reconstruction needs n = 3");
  const double pn = s.p.norm();
  if (pn < 1e-12) throw ZeroMomentum("reconstruction needs p != 0");
  Matrix g(3, 3);
  g.row(0) = s.q.transpose();
  g.row(1) = s.p.transpose() / pn;
  g.row(2) = cross3(s.q, s.p).transpose() / pn;
  if (g0.size() != 0) {
    if (g0.rows() != 3 || g0.cols() != 3) throw DimensionError("g0 must be 3x3");
    if ((g0.row(0) - Eigen::RowVector3d(1, 0, 0)).norm() > 1e-9) throw OutsideSpace("g0 must fix e_1");
    g = g0 * g;
  }
  return OrthogonalMatrix(g, 1e-8);
}

std::vector<OrthogonalMatrix> reconstruct_3d(const std::vector<ReducedState>& traj, const Matrix& g0) {
  std::vector<OrthogonalMatrix> out;
  out.reserve(traj.size());
  for (const auto& s : traj) out.push_back(reconstruct_3d_at(s, g0));
  return out;
}

SkewMatrix reconstructed_omega(const MassTensor& J, const ReducedState& s) {
  return wedge(s.q, vector_field_reduced(J, s).q_dot);
}

double full_equation_residual(const MassTensor& J, const Matrix& g, const SkewMatrix& omega,
                              const SkewMatrix& omega_dot) {
  const int n = J.dim();
  const SkewMatrix M = inertia_apply(J, omega);
  const SkewMatrix r = inertia_apply(J, omega_dot) - commutator(M, omega);
  const int m = (n - 1) * (n - 2) / 2;
  if (m == 0) return r.norm();
  Matrix x(r.packed_size(), m);
  int c = 0;
  for (int a = 1; a < n; ++a)
    for (int b = a + 1; b < n; ++b) x.col(c++) = wedge(g.row(a).transpose(), g.row(b).transpose()).packed();
  const Vector lambda = x.colPivHouseholderQr().solve(r.packed());
  return (r.packed() - x * lambda).norm();
}

double off_block_mass(const FullState& s, int block) {
  const Matrix& g = s.g.matrix();
  const Matrix o = s.omega.dense();
  const int n = static_cast<int>(g.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const bool in_top = i < block && j < block;
      const bool in_bottom = i >= block && j >= block;
      if (!in_top && !in_bottom) worst = std::max({worst, std::abs(g(i, j)), std::abs(o(i, j))});
      if (in_bottom) {
        worst = std::max(worst, std::abs(o(i, j)));
        worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
      }
    }
  return worst;
}

Embedding embed_axisymmetric(const MassTensor& J, const FullState& s0, std::uint64_t seed) {
  const int n = J.dim();
  if (n <= 3) throw DimensionError("axisymmetric embedding needs n > 3");
  const auto cls = classify_symmetry(J);
  const auto* ax = std::get_if<Axisymmetric>(&cls);
  if (ax == nullptr) throw DegenerateBody("mass tensor is not axisymmetric");
  const ReducedState r = project_to_reduced(J, s0);
  std::mt19937_64 rng(seed);
  std::vector<Vector> rows{Vector::Unit(n, ax->axis)};
  extend_basis(rows, {r.q, r.p}, 3);
  complete_in(rows, Matrix::Identity(n, n), 3, rng);
  complete_in(rows, Matrix::Identity(n, n), n, rng);
  return finish(J, s0, reorthonormalize(rows_of(rows)).matrix(), 3);
}

Embedding embed_cylindrical(const MassTensor& J, const FullState& s0, std::uint64_t seed) {
  const int n = J.dim();
  if (n <= 4) throw DimensionError("cylindrical embedding needs n > 4");
  const auto cls = classify_symmetry(J);
  const auto* cy = std::get_if<Cylindrical>(&cls);
  if (cy == nullptr) throw DegenerateBody("mass tensor is not cylindrical");
  const ReducedState r = project_to_reduced(J, s0);
  std::mt19937_64 rng(seed);
  const Matrix span1 = coordinate_span(n, cy->first);
  const Matrix span2 = coordinate_span(n, cy->second);
  std::vector<Vector> first, second;
  extend_basis(first, {restrict_to(r.q, cy->first), restrict_to(r.p, cy->first)}, 2);
  complete_in(first, span1, 2, rng);
  extend_basis(second, {restrict_to(r.q, cy->second), restrict_to(r.p, cy->second)}, 2);
  complete_in(second, span2, 2, rng);
  std::vector<Vector> rest1 = first, rest2 = second;
  complete_in(rest1, span1, cy->first.size(), rng);
  complete_in(rest2, span2, cy->second.size(), rng);
  std::vector<Vector> rows{first[0], first[1], second[0], second[1]};
  rows.insert(rows.end(), rest1.begin() + 2, rest1.end());
  rows.insert(rows.end(), rest2.begin() + 2, rest2.end());
  return finish(J, s0, reorthonormalize(rows_of(rows)).matrix(), 4);
}

RelEqFrequencies cyl_releq_frequencies(double j1, double j2, double h, double P) {
  const double a = std::sqrt(4.0 * j1 * h + P);
  const double b = std::sqrt(4.0 * j2 * h + P);
  return {2.0 * std::sqrt(2.0) * h / a, 2.0 * std::sqrt(2.0) * h / b, -4.0 * h * std::sqrt(P) / (a * b)};
}

RelEqSample cyl_releq_reconstruction(double j1, double j2, double h, double P, double t) {
  if (j1 == j2) throw DegenerateBody("relative equilibrium needs J1 != J2");
  if (!(h > 0.0) || !(P > 0.0)) throw OutsideImage("relative equilibrium needs h > 0 and P > 0");
  const double a0 = (P - 4.0 * j2 * h) / (4.0 * (j1 - j2) * h);
  const double b0 = (P - 4.0 * j2 * h) * (P + 4.0 * j1 * h) / (8.0 * (j1 - j2) * h);
  if (!(a0 > 0.0 && a0 < 1.0 && b0 > 0.0 && b0 < P)) throw OutsideImage("(h, P) is not inside the image of the EM map");
  const RelEqFrequencies f = cyl_releq_frequencies(j1, j2, h, P);
  const double sa = std::sqrt(a0), ca = std::sqrt(1.0 - a0);
  const double sb = std::sqrt(b0), cb = std::sqrt(P - b0);
  const double c1 = std::cos(f.omega1 * t), s1 = std::sin(f.omega1 * t);
  const double c2 = std::cos(f.omega2 * t), s2 = std::sin(f.omega2 * t);
  const double c3 = std::cos(f.omega3 * t), s3 = std::sin(f.omega3 * t);

  ReducedState red{Vector(4), Vector(4)};
  red.q << sa * c1, -sa * s1, ca * c2, -ca * s2;
  red.p << -sb * s1, -sb * c1, -cb * s2, -cb * c2;

  Matrix g0(4, 4);
  g0 << sa, 0, ca, 0,
        0, sb / std::sqrt(P), 0, cb / std::sqrt(P),
        ca, 0, -sa, 0,
        0, cb / std::sqrt(P), 0, -sb / std::sqrt(P);
  Matrix rot = Matrix::Zero(4, 4);
  rot.block<2, 2>(0, 0) << c1, -s1, s1, c1;
  rot.block<2, 2>(2, 2) << c2, -s2, s2, c2;
  Matrix left = Matrix::Identity(4, 4);
  left.block<2, 2>(2, 2) << c3, -s3, s3, c3;
  const Matrix g = left * g0 * rot;

  auto generator = [](int a, int b) {
    Matrix k = Matrix::Zero(4, 4);
    k(b, a) = 1.0;
    k(a, b) = -1.0;
    return k;
  };
  const Matrix w = f.omega1 * generator(0, 1) + f.omega2 * generator(2, 3);
  const Matrix z = f.omega3 * g0.transpose() * generator(2, 3) * g0;
  const Matrix omega = rot.transpose() * z * rot + w;
  const Matrix omega_dot = omega * w - w * omega;
  return RelEqSample{red, OrthogonalMatrix(g, 1e-9), SkewMatrix::from_dense(omega), SkewMatrix::from_dense(omega_dot)};
}

AxisTrace axis_trace(const std::vector<double>& t, const std::vector<ReducedState>& traj) {
  if (t.size() != traj.size()) throw DimensionError("time and trajectory lengths differ");
  AxisTrace out;
  out.t = t;
  out.samples.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ReducedState& s = traj[k];
    if (s.q.size() != 3) throw DimensionError("axis trace needs n = 3");
    const double sp = s.p.norm();
    if (sp < 1e-12) throw ZeroMomentum("axis trace needs P > 0");
    const double x1 = s.q[0];
    const double x2 = s.p[0] / sp;
    const double root = std::sqrt(std::max(0.0, 1.0 - x1 * x1 - x2 * x2));
    double x3;
    if (k == 0) {
      x3 = cross3(s.q, s.p)[0] >= 0.0 ? root : -root;
    } else {
      const double prev = out.samples[k - 1][2];
      const double predicted = k >= 2 ? 2.0 * prev - out.samples[k - 2][2] : prev;
      x3 = std::abs(root - predicted) <= std::abs(-root - predicted) ? root : -root;
    }
    out.samples.emplace_back(x1, x2, x3);
  }
  return out;
}

AxisTrace axis_trace_from_frames(const std::vector<double>& t, const std::vector<OrthogonalMatrix>& frames) {
  if (t.size() != frames.size()) throw DimensionError("time and frame lengths differ");
  AxisTrace out;
  out.t = t;
  for (const auto& g : frames) {
    if (g.dim() != 3) throw DimensionError("axis trace needs n = 3");
    out.samples.emplace_back(g(0, 0), g(1, 0), g(2, 0));
  }
  return out;
}

double axis_cylinder_residual(double j1, double j2, double H, double P, const Eigen::Vector3d& x) {
  return x[0] * x[0] + P * x[1] * x[1] / (2.0 * H * (j1 + j2)) - (4.0 * H * j2 - P) / (2.0 * H * (j2 - j1));
}

}  // namespace veselova
