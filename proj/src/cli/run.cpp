#include "veselova/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"
#include "veselova/cli/csv.hpp"
#include "veselova/veselova.hpp"

namespace veselova::cli {

namespace {

double rel_change(double now, double ref) { return std::abs(now - ref) / std::max(std::abs(ref), 1e-300); }

std::mt19937_64 rng_for(const ExperimentConfig& c, int index) {
  if (c.batch == 1) return std::mt19937_64(c.seed);
  std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

Matrix to_matrix(const std::vector<std::vector<double>>& m) {
  Matrix out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
  return out;
}

// Moves a reduced state written in block order (first block, then second) onto the body axes.
ReducedState place_blocks(const ReducedState& canonical, const Cylindrical& cy) {
  ReducedState s{Vector::Zero(canonical.q.size()), Vector::Zero(canonical.p.size())};
  std::vector<int> order = cy.first;
  order.insert(order.end(), cy.second.begin(), cy.second.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    s.q[order[k]] = canonical.q[k];
    s.p[order[k]] = canonical.p[k];
  }
  return s;
}

CylPoint releq_point(const ExperimentConfig& c, const Cylindrical& cy) {
  const auto eq = cyl_equilibrium(cy.j1, cy.j2, c.initial.h, c.initial.P);
  if (!eq) throw OutsideImage("(h, P) has no relative equilibrium inside the orbit space");
  CylPoint pt = *eq;
  pt.A += c.initial.offset_A;
  pt.D += c.initial.offset_D;
  return pt;
}

ReducedState initial_reduced(const ExperimentConfig& c, const MassTensor& J, std::mt19937_64& rng) {
  const auto& s = c.initial;
  const int n = J.dim();
  switch (s.kind) {
    case InitialKind::Random: return random_reduced_state(n, rng, s.scale);
    case InitialKind::Explicit: {
      ReducedState r{to_vector(s.q), to_vector(s.p)};
      validate_reduced(J, r);
      return r;
    }
    case InitialKind::SteadyRotation: {
      const auto plane = PrincipalPlane::axes(J, s.plane_i - 1, s.plane_j - 1);
      const double m = plane.moment * s.speed;
      return steady_rotation_reduced(J, plane, m * m, s.phase);
    }
    case InitialKind::AxiPoint: {
      const auto ax = std::get<Axisymmetric>(classify_symmetry(J));
      return axi_lift(AxiPoint{s.q1, s.p1, s.P}, n, ax.axis);
    }
    case InitialKind::CylReleq:
    case InitialKind::CylPoint: {
      const auto cy = std::get<Cylindrical>(classify_symmetry(J));
      const CylPoint pt = s.kind == InitialKind::CylReleq ? releq_point(c, cy) : CylPoint{s.A, s.B, s.P, s.D};
      return place_blocks(cyl_lift(pt, cy.r(), cy.r_prime()), cy);
    }
  }
  throw DimensionError("unknown initial condition");
}

FullState initial_full(const ExperimentConfig& c, const MassTensor& J, std::mt19937_64& rng) {
  const auto& s = c.initial;
  switch (s.kind) {
    case InitialKind::Random: return random_admissible_state(J, rng, s.scale);
    case InitialKind::Explicit:
      if (!s.g.empty()) {
        const Matrix g = to_matrix(s.g);
        const SkewMatrix o = SkewMatrix::from_dense(to_matrix(s.omega));
        FullState f{OrthogonalMatrix(g, 1e-9), o};
        if (max_constraint_residual(f) > 1e-9) throw OutsideSpace("explicit Omega violates the constraints");
        return f;
      }
      return lift_reduced(J, initial_reduced(c, J, rng));
    case InitialKind::SteadyRotation:
      return steady_rotation_state(J, PrincipalPlane::axes(J, s.plane_i - 1, s.plane_j - 1), s.speed, s.phase);
    default: return lift_reduced(J, initial_reduced(c, J, rng));
  }
}

struct Trajectory {
  double drift_H = 0.0;
  double drift_P = 0.0;
  double maxres = 0.0;
  std::string path;
};

FullOptions full_options(const ExperimentConfig& c, long stride) {
  FullOptions o;
  o.dt = c.integrator.dt;
  o.steps = c.integrator.steps;
  o.stride = stride;
  o.energy_guard = c.integrator.energy_guard;
  o.orth_tol = c.integrator.orth_tol;
  return o;
}

IntegrationOptions reduced_options(const ExperimentConfig& c, long stride) {
  IntegrationOptions o;
  o.dt = c.integrator.dt;
  o.steps = c.integrator.steps;
  o.stride = stride;
  o.energy_guard = c.integrator.energy_guard;
  return o;
}

std::vector<std::string> full_header(int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) h.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) h.push_back("omega" + std::to_string(i) + "_" + std::to_string(j));
  h.insert(h.end(), {"H", "P", "maxres"});
  return h;
}

std::vector<std::string> reduced_header(int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i) h.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) h.push_back("p" + std::to_string(i));
  h.insert(h.end(), {"H", "P", "mu"});
  return h;
}

Trajectory run_full_one(const ExperimentConfig& c, const MassTensor& J, int index) {
  auto rng = rng_for(c, index);
  const FullState s0 = initial_full(c, J, rng);
  Trajectory tr;
  tr.path = c.batch > 1 && !c.output.path.empty() ? indexed_path(c.output.path, index) : c.output.path;
  CsvWriter csv;
  if (!tr.path.empty()) csv = CsvWriter(tr.path, full_header(J.dim()));
  const double H0 = energy(J, s0.omega);
  const double P0 = project_to_reduced(J, s0).p.squaredNorm();
  std::vector<double> row;
  integrate_full(J, s0, full_options(c, c.output.stride), [&](double t, const FullState& s) {
    const double H = energy(J, s.omega);
    const double P = project_to_reduced(J, s).p.squaredNorm();
    const double res = max_constraint_residual(s);
    tr.drift_H = std::max(tr.drift_H, rel_change(H, H0));
    tr.drift_P = std::max(tr.drift_P, rel_change(P, P0));
    tr.maxres = std::max(tr.maxres, res);
    if (!csv.enabled()) return;
    row.assign(1, t);
    const Matrix& g = s.g.matrix();
    for (int i = 0; i < J.dim(); ++i)
      for (int j = 0; j < J.dim(); ++j) row.push_back(g(i, j));
    for (Eigen::Index k = 0; k < s.omega.packed().size(); ++k) row.push_back(s.omega.packed()[k]);
    row.insert(row.end(), {H, P, res});
    csv.row(row);
  });
  return tr;
}

Trajectory run_reduced_one(const ExperimentConfig& c, const MassTensor& J, int index) {
  auto rng = rng_for(c, index);
  const ReducedState s0 = initial_reduced(c, J, rng);
  Trajectory tr;
  tr.path = c.batch > 1 && !c.output.path.empty() ? indexed_path(c.output.path, index) : c.output.path;
  CsvWriter csv;
  if (!tr.path.empty()) csv = CsvWriter(tr.path, reduced_header(J.dim()));
  const double H0 = hamiltonian_reduced(J, s0);
  const double P0 = s0.p.squaredNorm();
  std::vector<double> row;
  integrate_reduced(J, s0, reduced_options(c, c.output.stride), [&](double t, const ReducedState& s) {
    const double H = hamiltonian_reduced(J, s);
    const double P = s.p.squaredNorm();
    tr.drift_H = std::max(tr.drift_H, rel_change(H, H0));
    tr.drift_P = std::max(tr.drift_P, rel_change(P, P0));
    tr.maxres = std::max({tr.maxres, std::abs(s.q.norm() - 1.0), std::abs(s.q.dot(s.p))});
    if (!csv.enabled()) return;
    row.assign(1, t);
    row.insert(row.end(), s.q.data(), s.q.data() + s.q.size());
    row.insert(row.end(), s.p.data(), s.p.data() + s.p.size());
    row.insert(row.end(), {H, P, measure_density(J, s.q)});
    csv.row(row);
  });
  return tr;
}

void run_trajectories(const ExperimentConfig& c, const MassTensor& J, RunReport& rep, bool full) {
  auto one = [&](int k) { return full ? run_full_one(c, J, k) : run_reduced_one(c, J, k); };
  std::vector<Trajectory> results(c.batch);
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < c.batch; start += workers) {
    std::vector<std::future<Trajectory>> futs;
    for (int k = start; k < std::min(c.batch, start + workers); ++k)
      futs.push_back(std::async(std::launch::async, one, k));
    for (std::size_t i = 0; i < futs.size(); ++i) results[start + i] = futs[i].get();
  }
  for (const auto& t : results) {
    rep.drift_H = std::max(rep.drift_H, t.drift_H);
    rep.drift_P = std::max(rep.drift_P, t.drift_P);
    rep.max_constraint_residual = std::max(rep.max_constraint_residual, t.maxres);
    if (!t.path.empty()) rep.files.push_back(t.path);
  }
}

void note_stratum(std::set<std::string>& seen, StratumTag tag) { seen.insert(stratum_name(tag)); }

void run_axi(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  const auto ax = std::get<Axisymmetric>(classify_symmetry(J));
  auto rng = rng_for(c, 0);
  AxiPoint a = c.initial.kind == InitialKind::AxiPoint ? AxiPoint{c.initial.q1, c.initial.p1, c.initial.P}
                                                        : axi_invariants(initial_reduced(c, J, rng), ax.axis);
  CsvWriter csv;
  if (!c.output.path.empty()) {
    csv = CsvWriter(c.output.path, {"t", "q1", "p1", "P", "H"});
    rep.files.push_back(c.output.path);
  }
  const double j1 = ax.j1, j2 = ax.j2, dt = c.integrator.dt;
  const double H0 = axi_hamiltonian(j1, j2, a);
  std::set<std::string> seen;
  auto emit = [&](double t) {
    const double H = axi_hamiltonian(j1, j2, a);
    rep.drift_H = std::max(rep.drift_H, rel_change(H, H0));
    note_stratum(seen, axi_stratum(a, J.dim(), 1e-7).tag);
    if (csv.enabled()) csv.row({t, a.q1, a.p1, a.P, H});
  };
  emit(0.0);
  for (long step = 1; step <= c.integrator.steps; ++step) {
    auto f = [&](const AxiPoint& x) { return axi_vector_field(j1, j2, x); };
    const AxiTangent k1 = f(a);
    const AxiTangent k2 = f({a.q1 + 0.5 * dt * k1.q1_dot, a.p1 + 0.5 * dt * k1.p1_dot, a.P});
    const AxiTangent k3 = f({a.q1 + 0.5 * dt * k2.q1_dot, a.p1 + 0.5 * dt * k2.p1_dot, a.P});
    const AxiTangent k4 = f({a.q1 + dt * k3.q1_dot, a.p1 + dt * k3.p1_dot, a.P});
    a.q1 += dt / 6.0 * (k1.q1_dot + 2 * k2.q1_dot + 2 * k3.q1_dot + k4.q1_dot);
    a.p1 += dt / 6.0 * (k1.p1_dot + 2 * k2.p1_dot + 2 * k3.p1_dot + k4.p1_dot);
    if (step % c.output.stride == 0) emit(step * dt);
  }
  rep.strata.assign(seen.begin(), seen.end());
}

void run_cyl(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  const auto cy = std::get<Cylindrical>(classify_symmetry(J));
  auto rng = rng_for(c, 0);
  CylPoint p;
  if (c.initial.kind == InitialKind::CylReleq)
    p = releq_point(c, cy);
  else if (c.initial.kind == InitialKind::CylPoint)
    p = CylPoint{c.initial.A, c.initial.B, c.initial.P, c.initial.D};
  else
    p = cyl_invariants(initial_reduced(c, J, rng), cy.first);
  if (!cyl_in_space(p)) throw OutsideSpace("initial point is outside the cylindrical orbit space");
  CsvWriter csv;
  if (!c.output.path.empty()) {
    csv = CsvWriter(c.output.path, {"t", "A", "B", "P", "D", "H", "F"});
    rep.files.push_back(c.output.path);
  }
  const double j1 = cy.j1, j2 = cy.j2, dt = c.integrator.dt;
  const double H0 = cyl_hamiltonian(j1, j2, p);
  const double F0 = integral_F(j1, j2, p, H0);
  rep.has_F = true;
  std::set<std::string> seen;
  auto emit = [&](double t) {
    const double H = cyl_hamiltonian(j1, j2, p);
    const double F = integral_F(j1, j2, p, H);
    rep.drift_H = std::max(rep.drift_H, rel_change(H, H0));
    rep.drift_F = std::max(rep.drift_F, rel_change(F, F0));
    note_stratum(seen, cyl_stratum(p, cy.r(), cy.r_prime(), 1e-7).tag);
    if (csv.enabled()) csv.row({t, p.A, p.B, p.P, p.D, H, F});
  };
  emit(0.0);
  auto add = [](const CylPoint& x, const CylTangent& k, double h) {
    return CylPoint{x.A + h * k.A_dot, x.B + h * k.B_dot, x.P, x.D + h * k.D_dot};
  };
  for (long step = 1; step <= c.integrator.steps; ++step) {
    const CylTangent k1 = cyl_vector_field(j1, j2, p);
    const CylTangent k2 = cyl_vector_field(j1, j2, add(p, k1, 0.5 * dt));
    const CylTangent k3 = cyl_vector_field(j1, j2, add(p, k2, 0.5 * dt));
    const CylTangent k4 = cyl_vector_field(j1, j2, add(p, k3, dt));
    p.A += dt / 6.0 * (k1.A_dot + 2 * k2.A_dot + 2 * k3.A_dot + k4.A_dot);
    p.B += dt / 6.0 * (k1.B_dot + 2 * k2.B_dot + 2 * k3.B_dot + k4.B_dot);
    p.D += dt / 6.0 * (k1.D_dot + 2 * k2.D_dot + 2 * k3.D_dot + k4.D_dot);
    if (step % c.output.stride == 0) emit(step * dt);
  }
  rep.strata.assign(seen.begin(), seen.end());
}

void run_em_map(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  std::map<double, std::string> rays;
  const auto slopes = critical_ray_slopes(J);
  for (const auto& plane : principal_planes(J)) {
    const double s = 2.0 * plane.moment;
    double key = s;
    for (double v : slopes)
      if (std::abs(v - s) <= 1e-9 * s) key = v;
    auto& label = rays[key];
    label += (label.empty() ? "" : ";") + std::to_string(plane.i + 1) + "-" + std::to_string(plane.j + 1);
  }
  if (!c.output.path.empty()) {
    CsvWriter csv(c.output.path, {"slope", "planes"});
    for (const auto& [slope, planes] : rays) csv.row({slope}, planes);
    rep.files.push_back(c.output.path);
  }
  if (c.em_samples > 0) {
    auto rng = rng_for(c, 0);
    const double lo = slopes.front(), hi = slopes.back();
    CsvWriter csv;
    if (!c.output.path.empty()) {
      const std::string path = indexed_path(c.output.path, 0);
      csv = CsvWriter(path, {"P", "H"});
      rep.files.push_back(path);
    }
    double worst = 0.0;
    for (int k = 0; k < c.em_samples; ++k) {
      const ReducedState s = random_reduced_state(J.dim(), rng, c.initial.scale);
      const EMValue v = em_map(J, s);
      worst = std::max({worst, v.H - v.P / lo, v.P / hi - v.H});
      if (csv.enabled()) csv.row({v.P, v.H});
    }
    rep.checks.push_back({"em_wedge_bounds", worst, 1e-12, worst <= 1e-12});
  }
}

void run_strata(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  std::vector<StratumSample> samples;
  std::vector<std::string> header;
  if (c.strata.kind == "cone") {
    const auto cy = std::get<Cylindrical>(classify_symmetry(J));
    samples = cone_section_samples(c.strata.P, c.strata.grid, cy.r(), cy.r_prime());
    header = {"A", "B", "D", "stratum"};
  } else {
    samples = canoe_samples(c.strata.P, c.strata.grid, J.dim());
    header = {"q1", "p1", "P", "stratum"};
  }
  std::set<std::string> seen;
  for (const auto& s : samples) seen.insert(stratum_name(s.tag));
  rep.strata.assign(seen.begin(), seen.end());
  if (!c.output.path.empty()) {
    CsvWriter csv(c.output.path, header);
    for (const auto& s : samples) csv.row({s.x, s.y, s.z}, stratum_name(s.tag));
    rep.files.push_back(c.output.path);
  }
}

void run_spectrum(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  auto rng = rng_for(c, 0);
  const int n = J.dim();
  std::vector<std::vector<double>> channels;
  const long stride = c.spectrum.sample_stride;
  if (c.spectrum.space == "full") {
    channels.resize(n * n);
    const FullState s0 = initial_full(c, J, rng);
    integrate_full(J, s0, full_options(c, stride), [&](double, const FullState& s) {
      for (int i = 0; i < n * n; ++i) channels[i].push_back(s.g.matrix()(i / n, i % n));
    });
  } else {
    channels.resize(2 * n);
    const ReducedState s0 = initial_reduced(c, J, rng);
    integrate_reduced(J, s0, reduced_options(c, stride), [&](double, const ReducedState& s) {
      for (int i = 0; i < n; ++i) {
        channels[i].push_back(s.q[i]);
        channels[n + i].push_back(s.p[i]);
      }
    });
  }
  FrequencyOptions fo;
  fo.tolerance = c.spectrum.tolerance;
  fo.max_coefficient = c.spectrum.max_coefficient;
  rep.spectrum = frequency_analysis(channels, c.integrator.dt * static_cast<double>(stride), fo);
  rep.has_spectrum = true;
  if (!c.output.path.empty()) {
    CsvWriter csv(c.output.path, {"frequency", "amplitude"});
    for (const auto& l : rep.spectrum.lines) csv.row({l.frequency, l.amplitude});
    rep.files.push_back(c.output.path);
  }
}

void run_axis_trace(const ExperimentConfig& c, const MassTensor& J, RunReport& rep) {
  const auto ax = std::get<Axisymmetric>(classify_symmetry(J));
  // The trace formula is written for the symmetry axis along the first coordinate.
  std::vector<int> order{ax.axis};
  for (int i = 0; i < 3; ++i)
    if (i != ax.axis) order.push_back(i);
  const MassTensor Jc{J[order[0]], J[order[1]], J[order[2]]};
  auto rng = rng_for(c, 0);
  ReducedState s0 = initial_reduced(c, J, rng);
  ReducedState sc{Vector(3), Vector(3)};
  for (int k = 0; k < 3; ++k) {
    sc.q[k] = s0.q[order[k]];
    sc.p[k] = s0.p[order[k]];
  }
  std::vector<double> ts;
  std::vector<ReducedState> traj;
  integrate_reduced(Jc, sc, reduced_options(c, c.output.stride), [&](double t, const ReducedState& s) {
    ts.push_back(t);
    traj.push_back(s);
  });
  const AxisTrace trace = axis_trace(ts, traj);
  const double H = hamiltonian_reduced(Jc, sc);
  const double P = sc.p.squaredNorm();
  double worst_norm = 0.0, worst_cyl = 0.0;
  for (const auto& x : trace.samples) {
    worst_norm = std::max(worst_norm, std::abs(x.norm() - 1.0));
    worst_cyl = std::max(worst_cyl, std::abs(axis_cylinder_residual(ax.j1, ax.j2, H, P, x)));
  }
  rep.checks.push_back({"axis_unit_norm", worst_norm, 1e-10, worst_norm <= 1e-10});
  rep.checks.push_back({"axis_on_cylinder", worst_cyl, 1e-8, worst_cyl <= 1e-8});
  if (!c.output.path.empty()) {
    CsvWriter csv(c.output.path, {"t", "x1", "x2", "x3"});
    for (std::size_t k = 0; k < ts.size(); ++k)
      csv.row({ts[k], trace.samples[k][0], trace.samples[k][1], trace.samples[k][2]});
    rep.files.push_back(c.output.path);
  }
}

}  // namespace

bool RunReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

RunReport run(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = config;
  if (c.mass.empty()) c.mass = {1.0, 2.0, 3.0};
  const MassTensor J(c.mass);
  RunReport rep;
  rep.mode = mode_name(c.mode);
  rep.n = J.dim();
  rep.seed = c.seed;
  switch (c.mode) {
    case Mode::Full: run_trajectories(c, J, rep, true); break;
    case Mode::Reduced: run_trajectories(c, J, rep, false); break;
    case Mode::Axi: run_axi(c, J, rep); break;
    case Mode::Cyl: run_cyl(c, J, rep); break;
    case Mode::Verify: rep.checks = verify_suite(c.mass, c.seed); break;
    case Mode::EmMap: run_em_map(c, J, rep); break;
    case Mode::Spectrum: run_spectrum(c, J, rep); break;
    case Mode::AxisTrace: run_axis_trace(c, J, rep); break;
    case Mode::Strata: run_strata(c, J, rep); break;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_to_json(const RunReport& r) {
  using nlohmann::json;
  json j;
  j["schema_version"] = report_schema_version;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["drifts"] = {{"H", r.drift_H}, {"P", r.drift_P}};
  if (r.has_F) j["drifts"]["F"] = r.drift_F;
  j["max_constraint_residual"] = r.max_constraint_residual;
  j["strata"] = r.strata;
  if (r.has_spectrum) {
    json lines = json::array();
    for (const auto& l : r.spectrum.lines) lines.push_back({{"frequency", l.frequency}, {"amplitude", l.amplitude}});
    j["spectrum"] = {{"base_count", r.spectrum.base_count},
                     {"basis", r.spectrum.basis},
                     {"tolerance", r.spectrum.tolerance},
                     {"near_resonance", r.spectrum.near_resonance},
                     {"resonance_margin", r.spectrum.resonance_margin},
                     {"lines", lines}};
  }
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  j["checks"] = checks;
  j["files"] = r.files;
  j["wall_time_s"] = r.wall_time;
  return j.dump(2) + "\n";
}

}  // namespace veselova::cli
