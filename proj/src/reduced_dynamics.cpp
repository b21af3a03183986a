#include "veselova/reduced_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

struct Contractions {
  Vector c;
  double pcp = 0.0;  // p . C p
  double pcq = 0.0;  // p . C q
  double qcq = 0.0;  // q . C q
};

Contractions contract(const MassTensor& J, const Vector& q, const Vector& p) {
  Contractions k;
  k.c = c_diagonal(J, q);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    k.pcp += k.c[i] * p[i] * p[i];
    k.pcq += k.c[i] * p[i] * q[i];
    k.qcq += k.c[i] * q[i] * q[i];
  }
  return k;
}

// Columns span the tangent space of T*S^{n-1} at (q, p), orthonormally.
Matrix tangent_frame(const Vector& q, const Vector& p) {
  const int n = static_cast<int>(q.size());
  Matrix a = Matrix::Zero(2 * n, 2 * n + 2);
  a.col(0).head(n) = q;
  a.col(1).head(n) = p;
  a.col(1).tail(n) = q;
  a.rightCols(2 * n) = Matrix::Identity(2 * n, 2 * n);
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix full = qr.householderQ() * Matrix::Identity(2 * n, 2 * n);
  return full.rightCols(2 * n - 2);
}

Vector stacked_field(const MassTensor& J, const Vector& y, const DensityFunction& density) {
  const int n = static_cast<int>(y.size() / 2);
  const ReducedState s{y.head(n), y.tail(n)};
  const ReducedTangent t = vector_field_reduced(J, s);
  Vector out(2 * n);
  const double mu = density ? density(s.q) : 1.0;
  out.head(n) = mu * t.q_dot;
  out.tail(n) = mu * t.p_dot;
  return out;
}

double tangential_trace(const MassTensor& J, const Vector& x, const Matrix& frame, const DensityFunction& density,
                        double h) {
  double tr = 0.0;
  for (Eigen::Index k = 0; k < frame.cols(); ++k) {
    const Vector t = frame.col(k);
    const Vector d = (stacked_field(J, x + h * t, density) - stacked_field(J, x - h * t, density)) / (2.0 * h);
    tr += t.dot(d);
  }
  return tr;
}

}  // namespace

void validate_reduced(const MassTensor& J, const ReducedState& s, double tol) {
  if (s.q.size() != J.dim() || s.p.size() != J.dim()) throw DimensionError("reduced state has wrong dimension");
  if (std::abs(s.q.norm() - 1.0) > tol) throw OutsideSpace("|q| != 1");
  if (std::abs(s.q.dot(s.p)) > tol * std::max(1.0, s.p.norm())) throw OutsideSpace("q . p != 0");
}

Vector c_diagonal(const MassTensor& J, const Vector& q) {
  if (q.size() != J.dim()) throw DimensionError("q has wrong dimension");
  const double qjq = J.quadratic(q);
  return (J.diagonal().array() + qjq).inverse().matrix();
}

double hamiltonian_reduced(const MassTensor& J, const ReducedState& s) {
  const Contractions k = contract(J, s.q, s.p);
  return 0.5 * (k.pcp - k.pcq * k.pcq / k.qcq);
}

ReducedTangent vector_field_reduced(const MassTensor& J, const ReducedState& s) {
  const Contractions k = contract(J, s.q, s.p);
  const double ratio = k.pcq / k.qcq;
  const double h = 0.5 * (k.pcp - k.pcq * ratio);
  ReducedTangent t;
  t.q_dot = k.c.cwiseProduct(s.p - ratio * s.q);
  t.p_dot = -2.0 * h * s.q;
  return t;
}

std::pair<Vector, Vector> hamiltonian_gradient(const MassTensor& J, const ReducedState& s) {
  const Contractions k = contract(J, s.q, s.p);
  const double ratio = k.pcq / k.qcq;
  const Vector v = k.c.cwiseProduct(s.p - ratio * s.q);
  const Vector dq = -v.squaredNorm() * J.diagonal().cwiseProduct(s.q) - ratio * v;
  return {dq, v};
}

double measure_density(const MassTensor& J, const Vector& q) {
  const Vector c = c_diagonal(J, q);
  const double qcq = q.dot(c.cwiseProduct(q));
  return std::sqrt(c.prod() / qcq);
}

double chaplygin_multiplier_candidate(const MassTensor& J, const Vector& q) {
  if (J.dim() < 3) throw DimensionError("Chaplygin candidate needs n >= 3");
  const Vector c = c_diagonal(J, q);
  const double qcq = q.dot(c.cwiseProduct(q));
  return std::pow(c.prod() / qcq, -1.0 / (2.0 * (J.dim() - 2)));
}

double divergence_residual(const MassTensor& J, const ReducedState& s, const DensityFunction& density,
                           double fd_step) {
  validate_reduced(J, s);
  const int n = J.dim();
  Vector x(2 * n);
  x << s.q, s.p;
  const Matrix frame = tangent_frame(s.q, s.p);
  const double d1 = tangential_trace(J, x, frame, density, fd_step);
  const double d2 = tangential_trace(J, x, frame, density, 0.5 * fd_step);
  return std::abs((4.0 * d2 - d1) / 3.0);
}

double measure_divergence_residual(const MassTensor& J, const ReducedState& s, double fd_step) {
  return divergence_residual(J, s, [&J](const Vector& q) { return measure_density(J, q); }, fd_step);
}

EMValue em_map(const MassTensor& J, const ReducedState& s) { return {s.p.squaredNorm(), hamiltonian_reduced(J, s)}; }

std::vector<double> critical_ray_slopes(const MassTensor& J, double rel_tol) {
  std::vector<double> slopes;
  for (const auto& plane : principal_planes(J)) slopes.push_back(2.0 * plane.moment);
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> out;
  for (double s : slopes)
    if (out.empty() || std::abs(s - out.back()) > rel_tol * s) out.push_back(s);
  return out;
}

Eigen::Vector2d em_jacobian_singular_values(const MassTensor& J, const ReducedState& s) {
  const int n = J.dim();
  const Matrix frame = tangent_frame(s.q, s.p);
  const auto [hq, hp] = hamiltonian_gradient(J, s);
  Matrix grads = Matrix::Zero(2, 2 * n);
  grads.row(0).tail(n) = 2.0 * s.p.transpose();
  grads.row(1).head(n) = hq.transpose();
  grads.row(1).tail(n) = hp.transpose();
  const Eigen::JacobiSVD<Matrix> svd(grads * frame);
  return svd.singularValues().head<2>();
}

ReducedState steady_rotation_reduced(const MassTensor& J, const PrincipalPlane& plane, double P0, double phase) {
  if (plane.a.size() != J.dim()) throw DimensionError("plane has wrong dimension");
  if (P0 < 0.0) throw OutsideSpace("P0 must be non-negative");
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {c * plane.a + s * plane.b, std::sqrt(P0) * (-s * plane.a + c * plane.b)};
}

double steady_rotation_lagrange_residual(const MassTensor& J, const ReducedState& s) {
  const double P = s.p.squaredNorm();
  if (P <= 0.0) throw ZeroMomentum("Lagrange check needs P > 0");
  const double H = hamiltonian_reduced(J, s);
  const double l1 = H / P;
  const double l3 = -2.0 * (H * H / P) * J.quadratic(s.q);
  const auto [hq, hp] = hamiltonian_gradient(J, s);
  const Vector rq = hq - 2.0 * l3 * s.q;
  const Vector rp = hp - 2.0 * l1 * s.p;
  return std::sqrt(rq.squaredNorm() + rp.squaredNorm());
}

namespace {

// Slice directions at the steady rotation q = f_i, p = sqrt(P) f_j.
std::vector<std::pair<Vector, Vector>> slice_basis(const MassTensor& J, int i, int j, double omega,
                                                   std::vector<int>& others) {
  const int n = J.dim();
  std::vector<std::pair<Vector, Vector>> basis;
  basis.emplace_back(Vector::Zero(n), Vector::Unit(n, j));
  others.clear();
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    others.push_back(k);
    const double bk = std::sqrt((J[i] + J[j]) * (J[i] + J[k]));
    basis.emplace_back(Vector::Unit(n, k) / omega, Vector::Zero(n));
    basis.emplace_back(Vector::Zero(n), bk * Vector::Unit(n, k));
  }
  return basis;
}

void check_plane(const MassTensor& J, int i, int j, double omega) {
  if (i < 0 || j < 0 || i >= J.dim() || j >= J.dim() || i == j) throw DimensionError("invalid plane indices");
  if (omega == 0.0) throw ZeroMomentum("steady rotation needs omega != 0");
}

}  // namespace

StabilityAnalysis stability_hessian(const MassTensor& J, int i, int j, double omega, double rel_tol) {
  check_plane(J, i, j, omega);
  const ExtremalPlanes ext = extremal_planes(J, rel_tol);
  auto contains = [&](const std::vector<PrincipalPlane>& v) {
    return std::any_of(v.begin(), v.end(), [&](const PrincipalPlane& p) {
      return (p.i == std::min(i, j) && p.j == std::max(i, j));
    });
  };
  StabilityAnalysis out;
  out.convention = (!contains(ext.minimal) && contains(ext.maximal)) ? Convention::Maximal : Convention::Minimal;
  const double sign = out.convention == Convention::Minimal ? -1.0 : 1.0;
  const double m = J[i] + J[j];
  slice_basis(J, i, j, omega, out.others);
  const int dim = 1 + 2 * static_cast<int>(out.others.size());
  out.hessian = Matrix::Zero(dim, dim);
  out.retained.assign(dim, true);
  out.hessian(0, 0) = sign * 4.0 * omega * omega * m * m;
  const double scale = std::max({J.diagonal().maxCoeff(), 1.0});
  for (std::size_t n = 0; n < out.others.size(); ++n) {
    const int k = out.others[n];
    const int a = 1 + 2 * static_cast<int>(n);
    out.hessian(a, a) = J[i] - J[k];
    out.hessian(a + 1, a + 1) = J[j] - J[k];
    if (std::abs(J[k] - J[i]) <= rel_tol * scale) out.retained[a] = false;
    if (std::abs(J[k] - J[j]) <= rel_tol * scale) out.retained[a + 1] = false;
  }
  bool definite = true;
  for (int d = 0; d < dim; ++d) {
    if (!out.retained[d]) continue;
    const double v = out.hessian(d, d);
    if (!(sign * v > rel_tol * scale)) definite = false;
  }
  out.verdict = definite ? Verdict::Stable : Verdict::NotDeterminedByThisCriterion;
  return out;
}

Matrix stability_hessian_fd(const MassTensor& J, int i, int j, double omega, Convention convention,
                            double fd_step) {
  check_plane(J, i, j, omega);
  const int n = J.dim();
  const double m = J[i] + J[j];
  const double P0 = m * m * omega * omega;
  const double lambda = 1.0 / (2.0 * m);
  const double sign = convention == Convention::Minimal ? -0.5 : 0.5;
  std::vector<int> others;
  const auto basis = slice_basis(J, i, j, omega, others);
  const Vector q0 = Vector::Unit(n, i);
  const Vector p0 = std::sqrt(P0) * Vector::Unit(n, j);
  const int dim = static_cast<int>(basis.size());

  auto f = [&](int a, double sa, int b, double sb) {
    Vector q = q0 + sa * basis[a].first + sb * basis[b].first;
    Vector p = p0 + sa * basis[a].second + sb * basis[b].second;
    q.normalize();
    p -= p.dot(q) * q;
    const ReducedState s{q, p};
    const double P = p.squaredNorm();
    return hamiltonian_reduced(J, s) - lambda * P + sign * (P - P0) * (P - P0);
  };
  auto hessian = [&](double h) {
    Matrix out(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        const double v = (f(a, h, b, h) - f(a, h, b, -h) - f(a, -h, b, h) + f(a, -h, b, -h)) / (4.0 * h * h);
        out(a, b) = v;
        out(b, a) = v;
      }
    return out;
  };
  const Matrix h1 = hessian(fd_step);
  const Matrix h2 = hessian(0.5 * fd_step);
  return (4.0 * h2 - h1) / 3.0;
}

void project_reduced(ReducedState& s) {
  s.q.normalize();
  s.p -= s.p.dot(s.q) * s.q;
}

ReducedState integrate_reduced(const MassTensor& J, const ReducedState& s0, const IntegrationOptions& opts,
                               const ReducedObserver& observer) {
  validate_reduced(J, s0);
  if (!(opts.dt > 0.0) || opts.steps < 0 || opts.stride < 1) throw DimensionError("invalid integration options");
  ReducedState s = s0;
  const double h0 = hamiltonian_reduced(J, s);
  const double scale = std::max(std::abs(h0), 1e-300);
  const double dt = opts.dt;
  if (observer) observer(0.0, s);
  double h_prev = h0;
  for (long step = 1; step <= opts.steps; ++step) {
    const ReducedTangent k1 = vector_field_reduced(J, s);
    const ReducedTangent k2 = vector_field_reduced(J, {s.q + 0.5 * dt * k1.q_dot, s.p + 0.5 * dt * k1.p_dot});
    const ReducedTangent k3 = vector_field_reduced(J, {s.q + 0.5 * dt * k2.q_dot, s.p + 0.5 * dt * k2.p_dot});
    const ReducedTangent k4 = vector_field_reduced(J, {s.q + dt * k3.q_dot, s.p + dt * k3.p_dot});
    s.q += (dt / 6.0) * (k1.q_dot + 2.0 * k2.q_dot + 2.0 * k3.q_dot + k4.q_dot);
    s.p += (dt / 6.0) * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
    project_reduced(s);
    const double h = hamiltonian_reduced(J, s);
    if (!std::isfinite(h) || (h0 != 0.0 && std::abs(h - h_prev) > opts.energy_guard * scale))
      throw DriftError("energy changed by more than the per-step guard at step " + std::to_string(step));
    h_prev = h;
    if (observer && step % opts.stride == 0) observer(step * dt, s);
  }
  return s;
}

ReducedState random_reduced_state(int n, std::mt19937_64& rng, double momentum_scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ReducedState s{Vector(n), Vector(n)};
  for (int i = 0; i < n; ++i) s.q[i] = normal(rng);
  for (int i = 0; i < n; ++i) s.p[i] = normal(rng);
  s.q.normalize();
  s.p -= s.p.dot(s.q) * s.q;
  s.p *= momentum_scale;
  return s;
}

}  // namespace veselova
