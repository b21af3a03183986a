#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "veselova/errors.hpp"
#include "veselova/son.hpp"

using namespace veselova;

namespace {

Vector e(int n, int i) { return Vector::Unit(n, i); }

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = N(rng);
  return m;
}

}  // namespace

TEST_CASE("mass tensor rejects bad input") {
  CHECK_THROWS_AS(MassTensor({1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(MassTensor({1.0, 0.0, 2.0}), InvalidMassTensor);
  CHECK_THROWS_AS(MassTensor({1.0, -1.0, 2.0}), InvalidMassTensor);
  CHECK_THROWS_AS(MassTensor({1.0, NAN, 2.0}), InvalidMassTensor);
  CHECK(MassTensor({1.0, 2.0, 3.0}).plane_moment(0, 2) == 4.0);
}

TEST_CASE("packed index") {
  CHECK(SkewMatrix::index(4, 0, 1) == 0);
  CHECK(SkewMatrix::index(4, 0, 3) == 2);
  CHECK(SkewMatrix::index(4, 1, 2) == 3);
  CHECK(SkewMatrix::index(4, 2, 3) == 5);
  SkewMatrix w(4);
  w.set(2, 1, 5.0);
  CHECK(w(1, 2) == -5.0);
  CHECK(w(2, 1) == 5.0);
  CHECK(w(3, 3) == 0.0);
}

TEST_CASE("wedge") {
  const Matrix w12 = wedge(e(3, 0), e(3, 1)).dense();
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 1) = 1.0;
  expected(1, 0) = -1.0;
  CHECK((w12 - expected).norm() == 0.0);
  CHECK(wedge(Vector::Ones(3), Vector::Ones(3)).norm() == 0.0);

  Vector a(3), b(3);
  a << 1, 1, 0;
  b << 0, 1, 1;
  Matrix hand(3, 3);
  hand << 0, 1, 1, -1, 0, 1, -1, -1, 0;
  CHECK((wedge(a, b).dense() - hand).norm() == 0.0);
}

TEST_CASE("pairing") {
  const SkewMatrix a = wedge(e(3, 0), e(3, 1));
  CHECK(pairing(a, a) == 1.0);
  CHECK(pairing(a, wedge(e(3, 0), e(3, 2))) == 0.0);
  CHECK(pairing(a, 3.0 * a) == 3.0);

  std::mt19937_64 rng(3);
  const SkewMatrix x = SkewMatrix::from_dense(random_matrix(5, rng));
  const SkewMatrix y = SkewMatrix::from_dense(random_matrix(5, rng));
  CHECK(pairing(x, y) == doctest::Approx(0.5 * (x.dense().transpose() * y.dense()).trace()).epsilon(1e-14));
}

TEST_CASE("commutator matches dense product") {
  std::mt19937_64 rng(4);
  const SkewMatrix x = SkewMatrix::from_dense(random_matrix(4, rng));
  const SkewMatrix y = SkewMatrix::from_dense(random_matrix(4, rng));
  const Matrix c = x.dense() * y.dense() - y.dense() * x.dense();
  CHECK((commutator(x, y).dense() - c).norm() < 1e-13);
}

TEST_CASE("inertia operator") {
  const MassTensor J{1.0, 2.0, 3.0};
  const SkewMatrix w = wedge(e(3, 0), e(3, 1));
  CHECK((inertia_apply(J, w) - 3.0 * w).norm() == 0.0);
  CHECK((inertia_apply(MassTensor{1.0, 1.0, 1.0}, w) - 2.0 * w).norm() == 0.0);
  CHECK((inertia_inverse_apply(J, 6.0 * w) - 2.0 * w).norm() < 1e-15);
  CHECK(inertia_inverse_apply(J, SkewMatrix(3)).norm() == 0.0);

  const MassTensor J4{1.0, 2.0, 3.0, 4.0};
  const SkewMatrix m = inertia_apply(J4, wedge(e(4, 0) + e(4, 2), e(4, 1) + e(4, 3)));
  CHECK(m.dense().determinant() == doctest::Approx(16.0).epsilon(1e-12));

  std::mt19937_64 rng(5);
  const SkewMatrix r = SkewMatrix::from_dense(random_matrix(4, rng));
  CHECK((inertia_apply(J4, inertia_inverse_apply(J4, r)) - r).norm() < 1e-14);
  const Matrix dense = J4.matrix() * r.dense() + r.dense() * J4.matrix();
  CHECK((inertia_apply(J4, r).dense() - dense).norm() < 1e-14);
}

TEST_CASE("rank-two exponential") {
  const double w = 1.7;
  const SkewMatrix om = w * wedge(e(3, 0), e(3, 1));
  const Matrix half = mat_exp_rank2(om, M_PI / w).matrix();
  Matrix expected = Matrix::Identity(3, 3);
  expected(0, 0) = expected(1, 1) = -1.0;
  CHECK((half - expected).norm() < 1e-14);
  CHECK((mat_exp_rank2(om, 0.0).matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
  const SkewMatrix unit = wedge(e(4, 0), e(4, 1));
  CHECK((mat_exp_rank2(unit, 2.0 * M_PI).matrix() - Matrix::Identity(4, 4)).norm() < 1e-12);

  Vector a(4), b(4);
  a << 0.3, -1.0, 0.2, 0.5;
  b << 1.1, 0.4, -0.7, 0.0;
  const SkewMatrix gen = wedge(a, b);
  const Matrix series = (0.8 * gen.dense()).exp();
  CHECK((mat_exp_rank2(gen, 0.8).matrix() - series).norm() < 1e-13);

  CHECK_THROWS_AS(mat_exp_rank2(wedge(e(4, 0), e(4, 1)) + wedge(e(4, 2), e(4, 3)), 1.0), RankError);
}

TEST_CASE("reorthonormalization") {
  CHECK((reorthonormalize(Matrix::Identity(4, 4)).matrix() - Matrix::Identity(4, 4)).norm() == 0.0);
  CHECK((reorthonormalize((1.0 + 1e-8) * Matrix::Identity(3, 3)).matrix() - Matrix::Identity(3, 3)).norm() < 1e-15);

  std::mt19937_64 rng(6);
  const Matrix q = Eigen::HouseholderQR<Matrix>(random_matrix(5, rng)).householderQ();
  const Matrix perturbed = q + 1e-9 * random_matrix(5, rng);
  const OrthogonalMatrix g = reorthonormalize(perturbed);
  CHECK(g.defect() < 1e-14);
  Eigen::JacobiSVD<Matrix> svd(perturbed, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CHECK((g.matrix() - svd.matrixU() * svd.matrixV().transpose()).norm() < 1e-14);

  CHECK_THROWS_AS(reorthonormalize(2.0 * Matrix::Identity(3, 3)), DriftError);
  CHECK_THROWS_AS(OrthogonalMatrix(1.01 * Matrix::Identity(3, 3)), DriftError);
}

TEST_CASE("numerical rank and frames") {
  CHECK(numerical_rank(wedge(e(4, 0), e(4, 1))) == 2);
  CHECK(numerical_rank(SkewMatrix(4)) == 0);
  CHECK(numerical_rank(wedge(e(4, 0), e(4, 1)) + wedge(e(4, 2), e(4, 3))) == 4);

  Vector q(4);
  q << 0.5, -0.5, 0.5, 0.5;
  const Matrix f = frame_with_first_row(q);
  CHECK(orthogonality_defect(f) < 1e-15);
  CHECK((f.row(0).transpose() - q).norm() < 1e-15);
}
