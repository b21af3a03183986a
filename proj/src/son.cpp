#include "veselova/son.hpp"

#include <cmath>
#include <string>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

void require_finite_positive(const Vector& d) {
  if (d.size() < 3) throw DimensionError("mass tensor needs n >= 3, got n = " + std::to_string(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || d[i] <= 0.0) throw InvalidMassTensor("mass tensor must be positive");
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

MassTensor::MassTensor(const Vector& diagonal) : d_(diagonal) { require_finite_positive(d_); }

MassTensor::MassTensor(std::initializer_list<double> diagonal)
    : MassTensor(std::vector<double>(diagonal)) {}

MassTensor::MassTensor(const std::vector<double>& diagonal) : MassTensor(to_vector(diagonal)) {}

SkewMatrix::SkewMatrix(int n) : n_(n), v_(Vector::Zero(n * (n - 1) / 2)) {
  if (n < 2) throw DimensionError("so(n) needs n >= 2");
}

SkewMatrix::SkewMatrix(int n, const Vector& packed) : n_(n), v_(packed) {
  if (packed.size() != n * (n - 1) / 2) throw DimensionError("packed size does not match n(n-1)/2");
}

SkewMatrix SkewMatrix::from_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("skew matrix must be square");
  const int n = static_cast<int>(m.rows());
  SkewMatrix w(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w.v_[k++] = 0.5 * (m(i, j) - m(j, i));
  return w;
}

double SkewMatrix::operator()(int i, int j) const {
  if (i == j) return 0.0;
  if (i < j) return v_[index(n_, i, j)];
  return -v_[index(n_, j, i)];
}

void SkewMatrix::set(int i, int j, double value) {
  if (i == j) throw DimensionError("diagonal of a skew matrix is zero");
  if (i < j)
    v_[index(n_, i, j)] = value;
  else
    v_[index(n_, j, i)] = -value;
}

Matrix SkewMatrix::dense() const {
  Matrix m = Matrix::Zero(n_, n_);
  int k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      m(i, j) = v_[k];
      m(j, i) = -v_[k];
      ++k;
    }
  return m;
}

Vector SkewMatrix::apply(const Vector& x) const {
  Vector y = Vector::Zero(n_);
  int k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      y[i] += v_[k] * x[j];
      y[j] -= v_[k] * x[i];
      ++k;
    }
  return y;
}

SkewMatrix& SkewMatrix::operator+=(const SkewMatrix& o) {
  if (o.n_ != n_) throw DimensionError("so(n) dimension mismatch");
  v_ += o.v_;
  return *this;
}

SkewMatrix& SkewMatrix::operator-=(const SkewMatrix& o) {
  if (o.n_ != n_) throw DimensionError("so(n) dimension mismatch");
  v_ -= o.v_;
  return *this;
}

SkewMatrix& SkewMatrix::operator*=(double s) {
  v_ *= s;
  return *this;
}

double orthogonality_defect(const Matrix& g) {
  return (g.transpose() * g - Matrix::Identity(g.rows(), g.cols())).norm();
}

OrthogonalMatrix::OrthogonalMatrix(const Matrix& m, double tol) : m_(m) {
  if (m.rows() != m.cols()) throw DimensionError("orthogonal matrix must be square");
  const double d = orthogonality_defect(m);
  if (!(d <= tol)) throw DriftError("orthogonality defect " + std::to_string(d) + " exceeds tolerance");
}

OrthogonalMatrix OrthogonalMatrix::identity(int n) { return OrthogonalMatrix(Matrix::Identity(n, n), Unchecked{}); }

double OrthogonalMatrix::defect() const { return orthogonality_defect(m_); }

OrthogonalMatrix OrthogonalMatrix::transpose() const { return OrthogonalMatrix(Matrix(m_.transpose()), Unchecked{}); }

OrthogonalMatrix operator*(const OrthogonalMatrix& a, const OrthogonalMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("orthogonal product dimension mismatch");
  return OrthogonalMatrix(Matrix(a.m_ * b.m_), OrthogonalMatrix::Unchecked{});
}

double pairing(const SkewMatrix& a, const SkewMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("so(n) dimension mismatch");
  return a.packed().dot(b.packed());
}

SkewMatrix wedge(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("wedge of vectors of different length");
  const int n = static_cast<int>(a.size());
  SkewMatrix w(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w.packed()[k++] = a[i] * b[j] - b[i] * a[j];
  return w;
}

SkewMatrix commutator(const SkewMatrix& a, const SkewMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("so(n) dimension mismatch");
  const Matrix da = a.dense();
  const Matrix db = b.dense();
  return SkewMatrix::from_dense(da * db - db * da);
}

SkewMatrix inertia_apply(const MassTensor& J, const SkewMatrix& w) {
  if (J.dim() != w.dim()) throw DimensionError("mass tensor and so(n) dimension mismatch");
  SkewMatrix m(w.dim());
  int k = 0;
  for (int i = 0; i < w.dim(); ++i)
    for (int j = i + 1; j < w.dim(); ++j, ++k) m.packed()[k] = J.plane_moment(i, j) * w.packed()[k];
  return m;
}

SkewMatrix inertia_inverse_apply(const MassTensor& J, const SkewMatrix& m) {
  if (J.dim() != m.dim()) throw DimensionError("mass tensor and so(n) dimension mismatch");
  SkewMatrix w(m.dim());
  int k = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j, ++k) w.packed()[k] = m.packed()[k] / J.plane_moment(i, j);
  return w;
}

OrthogonalMatrix reorthonormalize(const Matrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("orthogonal matrix must be square");
  const double d0 = orthogonality_defect(g);
  if (!(d0 < 0.5)) throw DriftError("matrix too far from O(n) to re-orthonormalize");
  const Matrix id = Matrix::Identity(g.rows(), g.cols());
  Matrix x = g;
  for (int it = 0; it < 30; ++it) {
    const Matrix e = x.transpose() * x - id;
    if (e.norm() < 1e-15) break;
    x = x - 0.5 * x * e;
  }
  return OrthogonalMatrix(x, OrthogonalMatrix::Unchecked{});
}

int numerical_rank(const SkewMatrix& w, double rel_tol) {
  const Eigen::JacobiSVD<Matrix> svd(w.dense());
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

OrthogonalMatrix mat_exp_rank2(const SkewMatrix& omega, double t) {
  const int n = omega.dim();
  const double w = omega.norm();
  if (w == 0.0) return OrthogonalMatrix::identity(n);
  if (numerical_rank(omega) != 2) throw RankError("mat_exp_rank2 needs a rank-2 skew matrix");
  const Matrix o = omega.dense();
  const Matrix e = Matrix::Identity(n, n) + (std::sin(w * t) / w) * o + ((1.0 - std::cos(w * t)) / (w * w)) * (o * o);
  return OrthogonalMatrix(e, OrthogonalMatrix::Unchecked{});
}

Matrix frame_with_first_row(const Vector& q) {
  const int n = static_cast<int>(q.size());
  Matrix h = Matrix::Identity(n, n);
  Vector u = Vector::Unit(n, 0) - q;
  const double un = u.norm();
  if (un < 1e-14) return h;
  u /= un;
  h -= 2.0 * u * u.transpose();
  return h;
}

}  // namespace veselova
