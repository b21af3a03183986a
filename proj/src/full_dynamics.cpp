#include "veselova/full_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

// Evaluates the constrained field on raw (g, M) with preallocated workspace.
class Engine {
 public:
  explicit Engine(const MassTensor& J) : n_(J.dim()), size_(n_ * (n_ - 1) / 2), m_((n_ - 1) * (n_ - 2) / 2) {
    inv_moment_.resize(size_);
    int k = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) inv_moment_[k++] = 1.0 / J.plane_moment(i, j);
    for (int r = 1; r < n_; ++r)
      for (int s = r + 1; s < n_; ++s) pairs_.emplace_back(r, s);
    x_.resize(size_, m_);
    wx_.resize(size_, m_);
    gram_.resize(m_, m_);
    rhs_.resize(m_);
    lambda_.resize(m_);
    od_.resize(n_, n_);
    md_.resize(n_, n_);
    comm_dense_.resize(n_, n_);
    comm_.resize(size_);
  }

  void eval(const Matrix& g, const Vector& M, Matrix& g_dot, Vector& m_dot) {
    unpack(M.cwiseProduct(inv_moment_), od_);
    unpack(M, md_);
    comm_dense_.noalias() = md_ * od_;
    comm_dense_.noalias() -= od_ * md_;
    pack(comm_dense_, comm_);
    fill_constraint_basis(g);
    if (m_ > 0) {
      wx_ = inv_moment_.asDiagonal() * x_;
      gram_.noalias() = x_.transpose() * wx_;
      rhs_.noalias() = -wx_.transpose() * comm_;
      llt_.compute(gram_);
      if (llt_.info() != Eigen::Success) throw SingularSystem("constraint Gram matrix is not positive definite");
      lambda_ = llt_.solve(rhs_);
      m_dot = comm_;
      m_dot.noalias() += x_ * lambda_;
    } else {
      m_dot = comm_;
    }
    g_dot.noalias() = g * od_;
  }

  void fill_constraint_basis(const Matrix& g) {
    for (int c = 0; c < m_; ++c) {
      const int r = pairs_[c].first;
      const int s = pairs_[c].second;
      int k = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) x_(k++, c) = g(r, i) * g(s, j) - g(s, i) * g(r, j);
    }
  }

  void unpack(const Vector& v, Matrix& out) const {
    int k = 0;
    for (int i = 0; i < n_; ++i) {
      out(i, i) = 0.0;
      for (int j = i + 1; j < n_; ++j) {
        out(i, j) = v[k];
        out(j, i) = -v[k];
        ++k;
      }
    }
  }

  void pack(const Matrix& m, Vector& out) const {
    int k = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) out[k++] = 0.5 * (m(i, j) - m(j, i));
  }

  const Vector& inv_moment() const { return inv_moment_; }
  const Vector& lambda() const { return lambda_; }
  const Matrix& constraint_basis() const { return x_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

 private:
  int n_;
  int size_;
  int m_;
  Vector inv_moment_;
  std::vector<std::pair<int, int>> pairs_;
  Matrix x_, wx_, gram_, od_, md_, comm_dense_;
  Vector rhs_, lambda_, comm_;
  Eigen::LLT<Matrix> llt_;
};

void check_state(const MassTensor& J, const FullState& s) {
  if (s.g.dim() != J.dim() || s.omega.dim() != J.dim()) throw DimensionError("state dimension does not match mass tensor");
}

// Omega <- (Omega q) ^ q with q the first row of g, in packed form.
void project_packed(const Matrix& g, int n, Vector& omega, Vector& work) {
  work.setZero(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      work[i] += omega[k] * g(0, j);
      work[j] -= omega[k] * g(0, i);
    }
  k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) omega[k++] = work[i] * g(0, j) - g(0, i) * work[j];
}

double energy_packed(const Vector& M, const Vector& inv_moment) {
  return 0.5 * M.cwiseProduct(inv_moment).dot(M);
}

}  // namespace

Vector constraint_residuals(const FullState& s) {
  const int n = s.g.dim();
  const Matrix& g = s.g.matrix();
  Vector out((n - 1) * (n - 2) / 2);
  int c = 0;
  for (int r = 1; r < n; ++r)
    for (int t = r + 1; t < n; ++t)
      out[c++] = pairing(wedge(g.row(r).transpose(), g.row(t).transpose()), s.omega);
  return out;
}

double max_constraint_residual(const FullState& s) {
  const Vector r = constraint_residuals(s);
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

MultiplierSet solve_multipliers(const MassTensor& J, const FullState& s) {
  check_state(J, s);
  Engine engine(J);
  const Vector M = inertia_apply(J, s.omega).packed();
  Matrix g_dot(J.dim(), J.dim());
  Vector m_dot(M.size());
  engine.eval(s.g.matrix(), M, g_dot, m_dot);
  MultiplierSet out;
  out.pairs = engine.pairs();
  out.values = engine.lambda();
  const Vector omega_dot = m_dot.cwiseProduct(engine.inv_moment());
  const Matrix& x = engine.constraint_basis();
  out.residual = x.cols() == 0 ? 0.0 : (x.transpose() * omega_dot).cwiseAbs().maxCoeff();
  return out;
}

FullTangent vector_field_full(const MassTensor& J, const FullState& s) {
  check_state(J, s);
  Engine engine(J);
  const int n = J.dim();
  const Vector M = inertia_apply(J, s.omega).packed();
  FullTangent t{Matrix(n, n), SkewMatrix(n), SkewMatrix(n)};
  engine.eval(s.g.matrix(), M, t.g_dot, t.m_dot.packed());
  t.omega_dot = inertia_inverse_apply(J, t.m_dot);
  return t;
}

double energy(const MassTensor& J, const SkewMatrix& omega) { return 0.5 * pairing(inertia_apply(J, omega), omega); }

double momentum_norm_sq(const MassTensor& J, const SkewMatrix& omega) {
  return inertia_apply(J, omega).packed().squaredNorm();
}

SkewMatrix project_admissible(const Matrix& g, const SkewMatrix& omega) {
  const int n = omega.dim();
  SkewMatrix out = omega;
  Vector work(n);
  project_packed(g, n, out.packed(), work);
  return out;
}

FullState integrate_full(const MassTensor& J, const FullState& s0, const FullOptions& opts,
                         const FullObserver& observer) {
  check_state(J, s0);
  if (!(opts.dt > 0.0) || opts.steps < 0 || opts.stride < 1) throw DimensionError("invalid integration options");
  const int n = J.dim();
  const int size = n * (n - 1) / 2;
  Engine engine(J);
  const Vector& inv = engine.inv_moment();
  const Vector moment = inv.cwiseInverse();

  Matrix g = s0.g.matrix();
  Vector omega = s0.omega.packed();
  Vector work(n);
  project_packed(g, n, omega, work);
  Vector M = omega.cwiseProduct(moment);

  Matrix kg1(n, n), kg2(n, n), kg3(n, n), kg4(n, n), gt(n, n), gram(n, n);
  Vector km1(size), km2(size), km3(size), km4(size), mt(size);
  const Matrix id = Matrix::Identity(n, n);

  const double h0 = energy_packed(M, inv);
  double h_prev = h0;
  const double dt = opts.dt;

  auto emit = [&](double t) {
    FullState s{OrthogonalMatrix(g, std::max(opts.orth_tol, 1e-12)), SkewMatrix(n, omega)};
    observer(t, s);
  };
  if (observer) emit(0.0);

  for (long step = 1; step <= opts.steps; ++step) {
    engine.eval(g, M, kg1, km1);
    gt = g + (0.5 * dt) * kg1;
    mt = M + (0.5 * dt) * km1;
    engine.eval(gt, mt, kg2, km2);
    gt = g + (0.5 * dt) * kg2;
    mt = M + (0.5 * dt) * km2;
    engine.eval(gt, mt, kg3, km3);
    gt = g + dt * kg3;
    mt = M + dt * km3;
    engine.eval(gt, mt, kg4, km4);
    g += (dt / 6.0) * (kg1 + 2.0 * kg2 + 2.0 * kg3 + kg4);
    M += (dt / 6.0) * (km1 + 2.0 * km2 + 2.0 * km3 + km4);

    for (int it = 0; it < 4; ++it) {
      gram.noalias() = g.transpose() * g;
      gram -= id;
      if (gram.norm() < 1e-15) break;
      gt.noalias() = g * gram;
      g -= 0.5 * gt;
    }
    const double defect = orthogonality_defect(g);
    if (!(defect <= opts.orth_tol))
      throw DriftError("orthogonality defect " + std::to_string(defect) + " at step " + std::to_string(step));

    omega = M.cwiseProduct(inv);
    project_packed(g, n, omega, work);
    M = omega.cwiseProduct(moment);

    const double h = energy_packed(M, inv);
    if (!std::isfinite(h) || (h0 > 0.0 && std::abs(h - h_prev) > opts.energy_guard * h0))
      throw DriftError("energy changed by more than the per-step guard at step " + std::to_string(step));
    h_prev = h;
    if (observer && step % opts.stride == 0) emit(step * dt);
  }
  return FullState{OrthogonalMatrix(g, std::max(opts.orth_tol, 1e-12)), SkewMatrix(n, omega)};
}

FullState steady_rotation_state(const MassTensor& J, const PrincipalPlane& plane, double speed, double phase) {
  if (plane.a.size() != J.dim()) throw DimensionError("plane has wrong dimension");
  const Vector q0 = std::cos(phase) * plane.a + std::sin(phase) * plane.b;
  return FullState{OrthogonalMatrix(frame_with_first_row(q0)), speed * wedge(plane.a, plane.b)};
}

ReducedState project_to_reduced(const MassTensor& J, const FullState& s) {
  check_state(J, s);
  const Vector q = s.g.matrix().row(0).transpose();
  const Vector p = -inertia_apply(J, s.omega).apply(q);
  return {q, p};
}

FullState lift_reduced(const MassTensor& J, const ReducedState& s, const Matrix& completion) {
  validate_reduced(J, s);
  Matrix g = completion.size() == 0 ? frame_with_first_row(s.q) : completion;
  if (g.rows() != J.dim() || g.cols() != J.dim()) throw DimensionError("completion has wrong shape");
  if ((g.row(0).transpose() - s.q).norm() > 1e-9) throw OutsideSpace("completion must have q as its first row");
  const Vector v = vector_field_reduced(J, s).q_dot;
  return FullState{OrthogonalMatrix(g, 1e-9), wedge(s.q, v)};
}

FullState group_act(const Matrix& A, const Matrix& B, const FullState& s) {
  const int n = s.g.dim();
  if (A.rows() != n || B.rows() != n) throw DimensionError("group element has wrong dimension");
  const Matrix g = A * s.g.matrix() * B.transpose();
  const Matrix o = B * s.omega.dense() * B.transpose();
  return FullState{OrthogonalMatrix(g, 1e-9), SkewMatrix::from_dense(o)};
}

Matrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  return reorthonormalize(q).matrix();
}

FullState random_admissible_state(const MassTensor& J, std::mt19937_64& rng, double speed_scale) {
  const int n = J.dim();
  const Matrix g = random_orthogonal(n, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector q = g.row(0).transpose();
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  v -= v.dot(q) * q;
  v *= speed_scale;
  return FullState{OrthogonalMatrix(g, 1e-9), wedge(q, v)};
}

}  // namespace veselova
