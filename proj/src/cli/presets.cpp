#include "veselova/cli/run.hpp"

namespace veselova::cli {

namespace {

ExperimentConfig base(Mode mode, std::vector<double> mass, const std::string& output) {
  ExperimentConfig c;
  c.mode = mode;
  c.mass = std::move(mass);
  c.seed = 1;
  c.output.path = output;
  return c;
}

ExperimentConfig spectrum(std::vector<double> mass, const std::string& space, const std::string& output) {
  ExperimentConfig c = base(Mode::Spectrum, std::move(mass), output);
  c.spectrum.space = space;
  c.spectrum.sample_stride = 20;
  c.integrator.dt = 0.005;
  c.integrator.steps = 400000;
  return c;
}

}  // namespace

std::vector<std::pair<std::string, ExperimentConfig>> presets() {
  std::vector<std::pair<std::string, ExperimentConfig>> out;

  auto em_generic = base(Mode::EmMap, {1, 2, 3}, "em_generic.csv");
  em_generic.em_samples = 2000;
  out.emplace_back("em-map-generic", em_generic);

  auto em_axi = base(Mode::EmMap, {1, 2, 2}, "em_axisymmetric.csv");
  em_axi.em_samples = 2000;
  out.emplace_back("em-map-axisymmetric", em_axi);

  auto em_cyl = base(Mode::EmMap, {1, 1, 2, 2}, "em_cylindrical.csv");
  em_cyl.em_samples = 2000;
  out.emplace_back("em-map-cylindrical", em_cyl);

  auto canoe = base(Mode::Strata, {1, 2, 2}, "canoe_strata.csv");
  canoe.strata = {"canoe", 6.0, 41};
  out.emplace_back("canoe-strata", canoe);

  for (double q1 : {0.2, 0.5, 0.8}) {
    auto orbit = base(Mode::Axi, {1, 2, 2}, "canoe_orbit_" + std::to_string(static_cast<int>(q1 * 10)) + ".csv");
    orbit.initial.kind = InitialKind::AxiPoint;
    orbit.initial.q1 = q1;
    orbit.initial.p1 = 0.0;
    orbit.initial.P = 6.0;
    orbit.integrator.steps = 10000;
    orbit.output.stride = 10;
    out.emplace_back("canoe-orbit-q" + std::to_string(static_cast<int>(q1 * 10)), orbit);
  }

  auto cone = base(Mode::Strata, {1, 1, 2, 2}, "cone_strata.csv");
  cone.strata = {"cone", 6.0, 21};
  out.emplace_back("cone-strata", cone);

  auto cyl = base(Mode::Cyl, {1, 1, 2, 2}, "cyl_orbit.csv");
  cyl.initial.kind = InitialKind::CylReleq;
  cyl.initial.h = 1.0;
  cyl.initial.P = 6.0;
  cyl.initial.offset_A = 0.05;
  cyl.initial.offset_D = 0.1;
  cyl.integrator.steps = 10000;
  cyl.output.stride = 10;
  out.emplace_back("cone-orbit", cyl);

  auto trace = base(Mode::AxisTrace, {1, 2, 2}, "axis_trace.csv");
  trace.initial.kind = InitialKind::AxiPoint;
  trace.initial.q1 = 0.3;
  trace.initial.p1 = 0.5;
  trace.initial.P = 6.0;
  trace.integrator.steps = 40000;
  trace.output.stride = 20;
  out.emplace_back("axis-trace", trace);

  auto steady = base(Mode::Full, {1, 2, 3}, "steady_rotation.csv");
  steady.initial.kind = InitialKind::SteadyRotation;
  steady.initial.plane_i = 1;
  steady.initial.plane_j = 2;
  steady.initial.speed = 2.0;
  steady.integrator.steps = 10000;
  steady.output.stride = 10;
  out.emplace_back("steady-rotation", steady);

  auto axi_reduced = spectrum({1, 2, 2}, "reduced", "spectrum_axi_reduced.csv");
  axi_reduced.initial.kind = InitialKind::AxiPoint;
  axi_reduced.initial.q1 = 0.3;
  axi_reduced.initial.p1 = 0.5;
  axi_reduced.initial.P = 6.0;
  out.emplace_back("spectrum-axi-reduced", axi_reduced);

  auto axi_full = axi_reduced;
  axi_full.spectrum.space = "full";
  axi_full.output.path = "spectrum_axi_full.csv";
  out.emplace_back("spectrum-axi-full", axi_full);

  auto cyl_reduced = spectrum({1, 1, 2, 2}, "reduced", "spectrum_cyl_reduced.csv");
  cyl_reduced.initial = cyl.initial;
  out.emplace_back("spectrum-cyl-reduced", cyl_reduced);

  auto cyl_full = cyl_reduced;
  cyl_full.spectrum.space = "full";
  cyl_full.output.path = "spectrum_cyl_full.csv";
  out.emplace_back("spectrum-cyl-full", cyl_full);

  auto verify = base(Mode::Verify, {1, 2, 3}, "");
  out.emplace_back("verify-generic", verify);
  return out;
}

}  // namespace veselova::cli
