#include <algorithm>
#include <cmath>
#include <random>

#include "veselova/cli/run.hpp"
#include "veselova/veselova.hpp"

namespace veselova::cli {

namespace {

Check upper(const std::string& name, double value, double threshold) {
  return Check{name, value, threshold, std::isfinite(value) && value <= threshold};
}

Check lower(const std::string& name, double value, double threshold) {
  return Check{name, value, threshold, std::isfinite(value) && value >= threshold};
}

}  // namespace

std::vector<Check> verify_suite(const std::vector<double>& mass, std::uint64_t seed) {
  const MassTensor J(mass);
  const int n = J.dim();
  std::mt19937_64 rng(seed);
  std::vector<Check> out;

  {
    double dh = 0.0, dp = 0.0, res = 0.0, rdh = 0.0, rdp = 0.0;
    for (int k = 0; k < 3; ++k) {
      const FullState s0 = random_admissible_state(J, rng, 1.0);
      const double H0 = energy(J, s0.omega);
      const double P0 = project_to_reduced(J, s0).p.squaredNorm();
      FullOptions o;
      o.steps = 10000;
      o.stride = 100;
      integrate_full(J, s0, o, [&](double, const FullState& s) {
        dh = std::max(dh, std::abs(energy(J, s.omega) - H0) / H0);
        dp = std::max(dp, std::abs(project_to_reduced(J, s).p.squaredNorm() - P0) / P0);
        res = std::max(res, max_constraint_residual(s));
      });
      const ReducedState r0 = project_to_reduced(J, s0);
      IntegrationOptions ro;
      ro.steps = 10000;
      ro.stride = 100;
      integrate_reduced(J, r0, ro, [&](double, const ReducedState& s) {
        rdh = std::max(rdh, std::abs(hamiltonian_reduced(J, s) - H0) / H0);
        rdp = std::max(rdp, std::abs(s.p.squaredNorm() - P0) / P0);
      });
    }
    out.push_back(upper("full_energy_drift", dh, 1e-8));
    out.push_back(upper("full_momentum_drift", dp, 1e-8));
    out.push_back(upper("full_constraint_residual", res, 1e-10));
    out.push_back(upper("reduced_energy_drift", rdh, 1e-8));
    out.push_back(upper("reduced_momentum_drift", rdp, 1e-8));
  }

  {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) worst = std::max(worst, measure_divergence_residual(J, random_reduced_state(n, rng)));
    out.push_back(upper("invariant_measure_divergence", worst, 1e-6));
  }

  {
    double h_err = 0.0, mult = 0.0, ray = 0.0, lag = 0.0;
    for (const auto& plane : principal_planes(J)) {
      const double speed = 1.5;
      const FullState s = steady_rotation_state(J, plane, speed);
      h_err = std::max(h_err, std::abs(energy(J, s.omega) - 0.5 * plane.moment * speed * speed));
      mult = std::max(mult, solve_multipliers(J, s).values.cwiseAbs().maxCoeff());
      const ReducedState r = project_to_reduced(J, s);
      const EMValue v = em_map(J, r);
      ray = std::max(ray, std::abs(v.P - 2.0 * plane.moment * v.H));
      lag = std::max(lag, steady_rotation_lagrange_residual(J, r));
    }
    out.push_back(upper("steady_rotation_energy", h_err, 1e-10));
    out.push_back(upper("steady_rotation_multipliers", mult, 1e-12));
    out.push_back(upper("steady_rotation_on_critical_ray", ray, 1e-12));
    out.push_back(upper("steady_rotation_lagrange", lag, 1e-10));
  }

  {
    const auto slopes = critical_ray_slopes(J);
    double worst = -INFINITY;
    for (int k = 0; k < 1000; ++k) {
      const EMValue v = em_map(J, random_reduced_state(n, rng, 2.0));
      worst = std::max({worst, v.H - v.P / slopes.front(), v.P / slopes.back() - v.H});
    }
    out.push_back(upper("em_wedge_bounds", worst, 1e-12));
  }

  {
    double diff = 0.0;
    bool verdicts = true;
    const ExtremalPlanes ext = extremal_planes(J);
    for (const auto& plane : principal_planes(J)) {
      const StabilityAnalysis a = stability_hessian(J, plane.i, plane.j, 1.3);
      const Matrix fd = stability_hessian_fd(J, plane.i, plane.j, 1.3, a.convention);
      diff = std::max(diff, (fd - a.hessian).cwiseAbs().maxCoeff());
      auto in = [&](const std::vector<PrincipalPlane>& v) {
        return std::any_of(v.begin(), v.end(), [&](const PrincipalPlane& p) { return p.i == plane.i && p.j == plane.j; });
      };
      const bool extremal = in(ext.minimal) || in(ext.maximal);
      if (extremal != (a.verdict == Verdict::Stable)) verdicts = false;
    }
    out.push_back(upper("stability_hessian_fd", diff, 1e-6));
    out.push_back(Check{"stability_verdicts", verdicts ? 1.0 : 0.0, 1.0, verdicts});
  }

  {
    const auto A = fj_matrix(J);
    const auto cls = classify_symmetry(J);
    const bool expected = n == 3 || std::holds_alternative<Axisymmetric>(cls) || is_isotropic(J);
    out.push_back(Check{"fj_feasibility", A.has_value() ? 1.0 : 0.0, expected ? 1.0 : 0.0, A.has_value() == expected});
    if (A) out.push_back(upper("fj_residual", fj_condition_residual(J, *A, 100, seed + 1), 1e-12));
    if (n >= 4 && !expected) out.push_back(lower("rank2_witness", rank2_preservation_witness_max(J), 1e-12));
  }

  const auto cls = classify_symmetry(J);
  if (const auto* ax = std::get_if<Axisymmetric>(&cls)) {
    double diff = 0.0;
    for (int k = 0; k < 100; ++k) {
      const ReducedState s = random_reduced_state(n, rng, 1.5);
      diff = std::max(diff, std::abs(axi_hamiltonian(ax->j1, ax->j2, axi_invariants(s, ax->axis)) - hamiltonian_reduced(J, s)));
    }
    out.push_back(upper("axisymmetric_hamiltonian", diff, 1e-12));
  }
  if (const auto* cy = std::get_if<Cylindrical>(&cls)) {
    double diff = 0.0, fdrift = 0.0;
    for (int k = 0; k < 100; ++k) {
      const ReducedState s = random_reduced_state(n, rng, 1.5);
      diff = std::max(diff, std::abs(cyl_hamiltonian(cy->j1, cy->j2, cyl_invariants(s, cy->first)) - hamiltonian_reduced(J, s)));
    }
    const ReducedState s0 = random_reduced_state(n, rng, 1.5);
    const CylPoint c0 = cyl_invariants(s0, cy->first);
    const double F0 = integral_F(cy->j1, cy->j2, c0, cyl_hamiltonian(cy->j1, cy->j2, c0));
    IntegrationOptions ro;
    ro.steps = 10000;
    ro.stride = 100;
    integrate_reduced(J, s0, ro, [&](double, const ReducedState& s) {
      const CylPoint c = cyl_invariants(s, cy->first);
      fdrift = std::max(fdrift, std::abs(integral_F(cy->j1, cy->j2, c, cyl_hamiltonian(cy->j1, cy->j2, c)) - F0));
    });
    out.push_back(upper("cylindrical_hamiltonian", diff, 1e-12));
    out.push_back(upper("cylindrical_integral_F", fdrift, 1e-10));
  }
  return out;
}

}  // namespace veselova::cli
