#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace veselova {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Diagonal mass tensor J = diag(J_1, ..., J_n) in the principal basis.
class MassTensor {
 public:
  explicit MassTensor(const Vector& diagonal);
  MassTensor(std::initializer_list<double> diagonal);
  explicit MassTensor(const std::vector<double>& diagonal);

  int dim() const { return static_cast<int>(d_.size()); }
  double operator[](int i) const { return d_[i]; }
  const Vector& diagonal() const { return d_; }
  Matrix matrix() const { return d_.asDiagonal(); }

  // J_i + J_j, the moment of inertia for rotation in the plane (i, j).
  double plane_moment(int i, int j) const { return d_[i] + d_[j]; }

  double quadratic(const Vector& q) const { return q.dot(d_.cwiseProduct(q)); }

 private:
  Vector d_;
};

}  // namespace veselova
