#include "veselova/second_reduction.hpp"

#include <algorithm>
#include <cmath>

#include "veselova/errors.hpp"

namespace veselova {

namespace {

int rank2(const Vector& a, const Vector& b, double tol) {
  if (a.size() == 0) return 0;
  Matrix m(a.size(), 2);
  m.col(0) = a;
  m.col(1) = b;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++r;
  return r;
}

Stratum cyl_from_ranks(int k1, int k2, int r, int rp) {
  static const StratumTag table[3][3] = {
      {StratumTag::S4, StratumTag::S0, StratumTag::S1},  // k1 = 0 is impossible with |q| = 1
      {StratumTag::S0p, StratumTag::S2, StratumTag::S3},
      {StratumTag::S1p, StratumTag::S3p, StratumTag::S4}};
  return Stratum{table[k1][k2], r - k1, rp - k2};
}

Stratum cyl_from_tag(StratumTag tag, int r, int rp) {
  switch (tag) {
    case StratumTag::S0: return cyl_from_ranks(0, 1, r, rp);
    case StratumTag::S0p: return cyl_from_ranks(1, 0, r, rp);
    case StratumTag::S1: return cyl_from_ranks(0, 2, r, rp);
    case StratumTag::S1p: return cyl_from_ranks(2, 0, r, rp);
    case StratumTag::S2: return cyl_from_ranks(1, 1, r, rp);
    case StratumTag::S3: return cyl_from_ranks(1, 2, r, rp);
    case StratumTag::S3p: return cyl_from_ranks(2, 1, r, rp);
    case StratumTag::S4: return cyl_from_ranks(2, 2, r, rp);
  }
  return {};
}

double clamp_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

std::vector<int> transverse_axes(int n, int axis) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (i != axis) out.push_back(i);
  return out;
}

}  // namespace

std::string stratum_name(StratumTag tag) {
  switch (tag) {
    case StratumTag::S0: return "S0";
    case StratumTag::S0p: return "S0'";
    case StratumTag::S1: return "S1";
    case StratumTag::S1p: return "S1'";
    case StratumTag::S2: return "S2";
    case StratumTag::S3: return "S3";
    case StratumTag::S3p: return "S3'";
    case StratumTag::S4: return "S4";
  }
  return "?";
}

AxiPoint axi_invariants(const ReducedState& s, int axis) {
  if (axis < 0 || axis >= s.q.size()) throw DimensionError("axis index out of range");
  return {s.q[axis], s.p[axis], s.p.squaredNorm()};
}

bool axi_in_space(const AxiPoint& a, double tol) {
  const double t = tol * std::max(1.0, a.P);
  return std::abs(a.q1) <= 1.0 + tol && a.P >= -t && a.p1 * a.p1 <= (1.0 - a.q1 * a.q1) * a.P + t;
}

Stratum axi_stratum(const AxiPoint& a, int n, double tol) {
  if (!axi_in_space(a, tol)) throw OutsideSpace("point is outside the axisymmetric orbit space");
  const double t = tol * std::max(1.0, a.P);
  if (a.P <= t && std::abs(std::abs(a.q1) - 1.0) <= tol)
    return Stratum{a.q1 > 0.0 ? StratumTag::S0p : StratumTag::S0, n - 1, 0};
  if (std::abs(a.p1 * a.p1 - (1.0 - a.q1 * a.q1) * a.P) <= t) return Stratum{StratumTag::S2, n - 2, 0};
  return Stratum{StratumTag::S3, n - 3, 0};
}

double axi_hamiltonian(double j1, double j2, const AxiPoint& a) {
  return ((j2 - j1) * a.p1 * a.p1 + (j1 + j2) * a.P) / (2.0 * (j1 + j2) * ((j1 - j2) * a.q1 * a.q1 + 2.0 * j2));
}

AxiTangent axi_vector_field(double j1, double j2, const AxiPoint& a) {
  const double h = axi_hamiltonian(j1, j2, a);
  return {a.p1 / (j1 + j2), -2.0 * h * a.q1, 0.0};
}

double AxiClosedForm::q1(double t) const { return A * std::cos(omega * t) + B * std::sin(omega * t); }

double AxiClosedForm::p1(double t, double j1, double j2) const {
  return (j1 + j2) * omega * (-A * std::sin(omega * t) + B * std::cos(omega * t));
}

AxiClosedForm axi_closed_form(double j1, double j2, const AxiPoint& a0) {
  const double h = axi_hamiltonian(j1, j2, a0);
  AxiClosedForm cf;
  cf.omega = std::sqrt(2.0 * h / (j1 + j2));
  cf.A = a0.q1;
  cf.B = cf.omega > 0.0 ? a0.p1 / ((j1 + j2) * cf.omega) : 0.0;
  return cf;
}

ReducedState axi_lift(const AxiPoint& a, int n, int axis) {
  if (n < 3) throw DimensionError("axisymmetric lift needs n >= 3");
  if (!axi_in_space(a)) throw OutsideSpace("point is outside the axisymmetric orbit space");
  const auto tr = transverse_axes(n, axis);
  ReducedState s{Vector::Zero(n), Vector::Zero(n)};
  s.q[axis] = a.q1;
  s.p[axis] = a.p1;
  const double rho2 = 1.0 - a.q1 * a.q1;
  if (rho2 > 1e-15) {
    const double rho = std::sqrt(rho2);
    s.q[tr[0]] = rho;
    s.p[tr[0]] = -a.q1 * a.p1 / rho;
    s.p[tr[1]] = clamp_sqrt(a.P - a.p1 * a.p1 / rho2);
  } else {
    s.p[tr[0]] = clamp_sqrt(a.P - a.p1 * a.p1);
  }
  return s;
}

Stratum axi_isotropy(const ReducedState& s, int axis, double tol) {
  const int n = static_cast<int>(s.q.size());
  const auto tr = transverse_axes(n, axis);
  Vector q2(n - 1), p2(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    q2[k] = s.q[tr[k]];
    p2[k] = s.p[tr[k]];
  }
  const int k = rank2(q2, p2, tol * std::max(1.0, s.p.norm()));
  if (k == 0) return Stratum{s.q[axis] > 0.0 ? StratumTag::S0p : StratumTag::S0, n - 1, 0};
  if (k == 1) return Stratum{StratumTag::S2, n - 2, 0};
  return Stratum{StratumTag::S3, n - 3, 0};
}

CylPoint cyl_invariants(const ReducedState& s, const std::vector<int>& first_block) {
  CylPoint c;
  for (int i : first_block) {
    if (i < 0 || i >= s.q.size()) throw DimensionError("block index out of range");
    c.A += s.q[i] * s.q[i];
    c.B += s.p[i] * s.p[i];
    c.D += s.q[i] * s.p[i];
  }
  c.P = s.p.squaredNorm();
  return c;
}

CylPoint cyl_invariants(const ReducedState& s, int r) {
  if (r < 1 || r >= s.q.size()) throw DimensionError("block size out of range");
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  return cyl_invariants(s, idx);
}

bool cyl_in_space(const CylPoint& c, double tol) {
  const double t = tol * std::max(1.0, c.P);
  return c.A >= -tol && c.A <= 1.0 + tol && c.B >= -t && c.B <= c.P + t && c.D * c.D <= c.A * c.B + t &&
         c.D * c.D <= (1.0 - c.A) * (c.P - c.B) + t;
}

Stratum cyl_stratum(const CylPoint& c, int r, int r_prime, double tol) {
  if (r < 2 || r_prime < 2) throw DimensionError("cylindrical strata need r, r' >= 2");
  if (!cyl_in_space(c, tol)) throw OutsideSpace("point is outside the cylindrical orbit space");
  const double t = tol * std::max(1.0, c.P);
  if (c.P <= t) {
    if (c.A <= tol) return cyl_from_tag(StratumTag::S0, r, r_prime);
    if (1.0 - c.A <= tol) return cyl_from_tag(StratumTag::S0p, r, r_prime);
    return cyl_from_tag(StratumTag::S2, r, r_prime);
  }
  if (c.A <= tol && c.B <= t && std::abs(c.D) <= t) return cyl_from_tag(StratumTag::S1, r, r_prime);
  if (1.0 - c.A <= tol && c.P - c.B <= t && std::abs(c.D) <= t) return cyl_from_tag(StratumTag::S1p, r, r_prime);
  const bool first = std::abs(c.D * c.D - c.A * c.B) <= t;
  const bool second = std::abs(c.D * c.D - (1.0 - c.A) * (c.P - c.B)) <= t;
  if (first && second) return cyl_from_tag(StratumTag::S2, r, r_prime);
  if (first) return cyl_from_tag(StratumTag::S3, r, r_prime);
  if (second) return cyl_from_tag(StratumTag::S3p, r, r_prime);
  return cyl_from_tag(StratumTag::S4, r, r_prime);
}

CylBetas cyl_betas(double j1, double j2, double A) {
  return {1.0 / ((j1 - j2) * A + j1 + j2), 1.0 / ((j1 - j2) * A + 2.0 * j2)};
}

double cyl_hamiltonian(double j1, double j2, const CylPoint& c) {
  const CylBetas b = cyl_betas(j1, j2, c.A);
  const double d = b.beta1 - b.beta2;
  return 0.5 * (d * c.B + b.beta2 * c.P - d * d * c.D * c.D / (b.beta1 * c.A + b.beta2 * (1.0 - c.A)));
}

CylTangent cyl_vector_field(double j1, double j2, const CylPoint& c) {
  if (j1 == j2) throw DegenerateBody("cylindrical field needs J1 != J2");
  const double h = cyl_hamiltonian(j1, j2, c);
  return {2.0 * c.D / (j1 + j2), -4.0 * h * c.D, 0.0, -4.0 * h * c.A + (c.P - 4.0 * j2 * h) / (j1 - j2)};
}

double cyl_measure_density(double j1, double j2, double A) {
  const CylBetas b = cyl_betas(j1, j2, A);
  return b.beta1 * b.beta2;
}

double integral_F(double j1, double j2, const CylPoint& c, double H) { return 2.0 * (j1 + j2) * c.A * H + c.B; }

std::optional<CylPoint> cyl_equilibrium(double j1, double j2, double h, double P) {
  if (j1 == j2) throw DegenerateBody("cylindrical equilibrium needs J1 != J2");
  if (!(h > 0.0)) return std::nullopt;
  const double a0 = (P - 4.0 * j2 * h) / (4.0 * (j1 - j2) * h);
  const double b0 = (P - 4.0 * j2 * h) * (P + 4.0 * j1 * h) / (8.0 * (j1 - j2) * h);
  const double tol = 1e-12;
  if (a0 < -tol || a0 > 1.0 + tol || b0 < -tol * std::max(1.0, P) || b0 > P * (1.0 + tol) + tol) return std::nullopt;
  return CylPoint{a0, b0, P, 0.0};
}

CylPoint CylClosedForm::at(double t) const {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  CylPoint out;
  out.A = A_star + C1 * c + C2 * s;
  out.B = B_star - 2.0 * h * (j1 + j2) * (C1 * c + C2 * s);
  out.P = P;
  out.D = 0.5 * (j1 + j2) * omega * (-C1 * s + C2 * c);
  return out;
}

double CylClosedForm::period() const { return 2.0 * M_PI / omega; }

CylClosedForm cyl_closed_form(double j1, double j2, const CylPoint& c0) {
  if (j1 == j2) throw DegenerateBody("cylindrical closed form needs J1 != J2");
  CylClosedForm cf;
  cf.j1 = j1;
  cf.j2 = j2;
  cf.h = cyl_hamiltonian(j1, j2, c0);
  if (!(cf.h > 0.0)) throw ZeroMomentum("closed form needs H > 0");
  cf.P = c0.P;
  cf.omega = std::sqrt(8.0 * cf.h / (j1 + j2));
  cf.A_star = (c0.P - 4.0 * j2 * cf.h) / (4.0 * (j1 - j2) * cf.h);
  cf.C1 = c0.A - cf.A_star;
  cf.C2 = 2.0 * c0.D / ((j1 + j2) * cf.omega);
  cf.B_star = c0.B + 2.0 * cf.h * (j1 + j2) * cf.C1;
  return cf;
}

ReducedState cyl_lift(const CylPoint& c, int r, int r_prime) {
  if (r < 2 || r_prime < 2) throw DimensionError("cylindrical lift needs r, r' >= 2");
  if (!cyl_in_space(c)) throw OutsideSpace("point is outside the cylindrical orbit space");
  const int n = r + r_prime;
  ReducedState s{Vector::Zero(n), Vector::Zero(n)};
  const double A = std::clamp(c.A, 0.0, 1.0);
  if (A > 1e-15) {
    const double a = std::sqrt(A);
    s.q[0] = a;
    s.p[0] = c.D / a;
    s.p[1] = clamp_sqrt(c.B - c.D * c.D / A);
  } else {
    s.p[0] = clamp_sqrt(c.B);
  }
  if (1.0 - A > 1e-15) {
    const double b = std::sqrt(1.0 - A);
    s.q[r] = b;
    s.p[r] = -c.D / b;
    s.p[r + 1] = clamp_sqrt(c.P - c.B - c.D * c.D / (1.0 - A));
  } else {
    s.p[r] = clamp_sqrt(c.P - c.B);
  }
  return s;
}

Stratum cyl_isotropy(const ReducedState& s, int r, double tol) {
  const int n = static_cast<int>(s.q.size());
  const double t = tol * std::max(1.0, s.p.norm());
  const int k1 = rank2(s.q.head(r), s.p.head(r), t);
  const int k2 = rank2(s.q.tail(n - r), s.p.tail(n - r), t);
  return cyl_from_ranks(k1, k2, r, n - r);
}

std::vector<StratumSample> canoe_samples(double P, int grid, int n) {
  if (grid < 2) throw DimensionError("grid needs at least 2 points");
  std::vector<StratumSample> out;
  for (int a = 0; a < grid; ++a) {
    const double q1 = -1.0 + 2.0 * a / (grid - 1);
    const double pmax = std::sqrt(std::max(0.0, (1.0 - q1 * q1) * P));
    const int count = pmax > 0.0 ? grid : 1;
    for (int b = 0; b < count; ++b) {
      const double p1 = count == 1 ? 0.0 : -pmax + 2.0 * pmax * b / (grid - 1);
      const AxiPoint pt{q1, p1, P};
      out.push_back({q1, p1, P, axi_stratum(pt, n).tag});
    }
  }
  return out;
}

std::vector<StratumSample> cone_section_samples(double P, int grid, int r, int r_prime) {
  if (grid < 2) throw DimensionError("grid needs at least 2 points");
  std::vector<StratumSample> out;
  for (int a = 0; a < grid; ++a) {
    const double A = static_cast<double>(a) / (grid - 1);
    for (int b = 0; b < grid; ++b) {
      const double B = P * b / (grid - 1);
      const double dmax = std::sqrt(std::max(0.0, std::min(A * B, (1.0 - A) * (P - B))));
      const int count = dmax > 0.0 ? grid : 1;
      for (int d = 0; d < count; ++d) {
        const double D = count == 1 ? 0.0 : -dmax + 2.0 * dmax * d / (grid - 1);
        const CylPoint c{A, B, P, D};
        out.push_back({A, B, D, cyl_stratum(c, r, r_prime).tag});
      }
    }
  }
  return out;
}

}  // namespace veselova
