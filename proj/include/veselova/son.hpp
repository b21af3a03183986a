#pragma once

#include "veselova/mass_tensor.hpp"

namespace veselova {

// Element of so(n), stored as the strict upper triangle in row-major order.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(int n);
  SkewMatrix(int n, const Vector& packed);

  // Takes the antisymmetric part of m.
  static SkewMatrix from_dense(const Matrix& m);

  int dim() const { return n_; }
  int packed_size() const { return static_cast<int>(v_.size()); }

  static int index(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

  double operator()(int i, int j) const;
  void set(int i, int j, double value);

  const Vector& packed() const { return v_; }
  Vector& packed() { return v_; }

  Matrix dense() const;
  Vector apply(const Vector& x) const;

  // Norm induced by the pairing, sqrt(<W, W>).
  double norm() const { return v_.norm(); }

  SkewMatrix& operator+=(const SkewMatrix& o);
  SkewMatrix& operator-=(const SkewMatrix& o);
  SkewMatrix& operator*=(double s);

  friend SkewMatrix operator+(SkewMatrix a, const SkewMatrix& b) { return a += b; }
  friend SkewMatrix operator-(SkewMatrix a, const SkewMatrix& b) { return a -= b; }
  friend SkewMatrix operator*(double s, SkewMatrix a) { return a *= s; }
  friend SkewMatrix operator*(SkewMatrix a, double s) { return a *= s; }

 private:
  int n_ = 0;
  Vector v_;
};

// Square matrix with g^T g = Id up to the construction tolerance.
class OrthogonalMatrix {
 public:
  static constexpr double default_tolerance = 1e-10;

  OrthogonalMatrix() = default;
  explicit OrthogonalMatrix(const Matrix& m, double tol = default_tolerance);

  static OrthogonalMatrix identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double defect() const;

  OrthogonalMatrix transpose() const;
  friend OrthogonalMatrix operator*(const OrthogonalMatrix& a, const OrthogonalMatrix& b);

 private:
  struct Unchecked {};
  OrthogonalMatrix(const Matrix& m, Unchecked) : m_(m) {}
  friend OrthogonalMatrix reorthonormalize(const Matrix& g);
  friend OrthogonalMatrix mat_exp_rank2(const SkewMatrix& omega, double t);

  Matrix m_;
};

double orthogonality_defect(const Matrix& g);

// <A, B> = 1/2 tr(A^T B).
double pairing(const SkewMatrix& a, const SkewMatrix& b);

// a ^ b = a b^T - b a^T.
SkewMatrix wedge(const Vector& a, const Vector& b);

SkewMatrix commutator(const SkewMatrix& a, const SkewMatrix& b);

// I(W) = J W + W J, entrywise (J_i + J_j) W_ij.
SkewMatrix inertia_apply(const MassTensor& J, const SkewMatrix& w);
SkewMatrix inertia_inverse_apply(const MassTensor& J, const SkewMatrix& m);

// Polar-factor projection; requires ||g^T g - Id||_F < 0.5.
OrthogonalMatrix reorthonormalize(const Matrix& g);

// exp(t W) for rank(W) = 2 by the Rodrigues-type formula.
OrthogonalMatrix mat_exp_rank2(const SkewMatrix& omega, double t);

int numerical_rank(const SkewMatrix& w, double rel_tol = 1e-10);

// Householder reflection whose first row is the unit vector q.
Matrix frame_with_first_row(const Vector& q);

}  // namespace veselova
