#include "veselova/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "veselova/body.hpp"

namespace veselova::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "\n") + s;
  return out;
}

struct ModeEntry {
  Mode mode;
  const char* name;
};

constexpr ModeEntry mode_table[] = {{Mode::Full, "full"},         {Mode::Reduced, "reduced"},
                                    {Mode::Axi, "axi"},           {Mode::Cyl, "cyl"},
                                    {Mode::Verify, "verify"},     {Mode::EmMap, "em-map"},
                                    {Mode::Spectrum, "spectrum"}, {Mode::AxisTrace, "axis-trace"},
                                    {Mode::Strata, "strata"}};

struct InitialEntry {
  InitialKind kind;
  const char* name;
};

constexpr InitialEntry initial_table[] = {{InitialKind::Random, "random"},
                                          {InitialKind::Explicit, "explicit"},
                                          {InitialKind::SteadyRotation, "steady-rotation"},
                                          {InitialKind::CylReleq, "cyl-releq"},
                                          {InitialKind::AxiPoint, "axi-point"},
                                          {InitialKind::CylPoint, "cyl-point"}};

// Reads fields out of one JSON object and records problems instead of throwing.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& issues)
      : obj_(obj), prefix_(std::move(prefix)), issues_(issues) {}

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.push_back(prefix_ + key + ": wrong type");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  const json* object(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) return nullptr;
    if (!obj_.at(key).is_object()) {
      issues_.push_back(prefix_ + key + ": expected an object");
      return nullptr;
    }
    return &obj_.at(key);
  }

  void finish() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) issues_.push_back(prefix_ + it.key() + ": unknown field");
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

}  // namespace

std::string mode_name(Mode m) {
  for (const auto& e : mode_table)
    if (e.mode == m) return e.name;
  return "?";
}

ConfigError::ConfigError(const std::vector<std::string>& issues)
    : std::runtime_error("invalid configuration:\n" + join(issues)), issues_(issues) {}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte - 1 && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError({"line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"top level must be an object"});

  std::vector<std::string> issues;
  ExperimentConfig c;
  Reader top(root, "", issues);

  int version = 1;
  top.get("schema_version", version);
  if (version != 1) issues.push_back("schema_version: unsupported version " + std::to_string(version));

  std::string mode;
  top.get("mode", mode);
  if (!top.has("mode")) {
    issues.push_back("mode: required");
  } else {
    bool found = false;
    for (const auto& e : mode_table)
      if (mode == e.name) {
        c.mode = e.mode;
        found = true;
      }
    if (!found) issues.push_back("mode: unknown mode '" + mode + "'");
  }
  top.get("mass", c.mass);
  if (!top.has("mass") && c.mode != Mode::Verify) issues.push_back("mass: required");
  top.get("seed", c.seed);
  top.get("batch", c.batch);
  top.get("em_samples", c.em_samples);

  if (const json* ini = top.object("initial")) {
    Reader r(*ini, "initial.", issues);
    std::string kind = "random";
    r.get("kind", kind);
    bool found = false;
    for (const auto& e : initial_table)
      if (kind == e.name) {
        c.initial.kind = e.kind;
        found = true;
      }
    if (!found) issues.push_back("initial.kind: unknown kind '" + kind + "'");
    auto& s = c.initial;
    r.get("scale", s.scale);
    r.get("q", s.q);
    r.get("p", s.p);
    r.get("g", s.g);
    r.get("omega", s.omega);
    std::vector<int> plane;
    r.get("plane", plane);
    if (r.has("plane")) {
      if (plane.size() != 2) {
        issues.push_back("initial.plane: expected two axis indices");
      } else {
        s.plane_i = plane[0];
        s.plane_j = plane[1];
      }
    }
    r.get("speed", s.speed);
    r.get("phase", s.phase);
    r.get("h", s.h);
    r.get("P", s.P);
    r.get("offset_A", s.offset_A);
    r.get("offset_D", s.offset_D);
    r.get("q1", s.q1);
    r.get("p1", s.p1);
    r.get("A", s.A);
    r.get("B", s.B);
    r.get("D", s.D);
    r.finish();
  }
  if (const json* in = top.object("integrator")) {
    Reader r(*in, "integrator.", issues);
    r.get("dt", c.integrator.dt);
    r.get("steps", c.integrator.steps);
    r.get("energy_guard", c.integrator.energy_guard);
    r.get("orth_tol", c.integrator.orth_tol);
    r.finish();
  }
  if (const json* out = top.object("output")) {
    Reader r(*out, "output.", issues);
    r.get("path", c.output.path);
    r.get("report", c.output.report);
    r.get("stride", c.output.stride);
    r.finish();
  }
  if (const json* sp = top.object("spectrum")) {
    Reader r(*sp, "spectrum.", issues);
    r.get("space", c.spectrum.space);
    r.get("sample_stride", c.spectrum.sample_stride);
    r.get("tolerance", c.spectrum.tolerance);
    r.get("max_coefficient", c.spectrum.max_coefficient);
    r.finish();
  }
  if (const json* st = top.object("strata")) {
    Reader r(*st, "strata.", issues);
    r.get("kind", c.strata.kind);
    r.get("P", c.strata.P);
    r.get("grid", c.strata.grid);
    r.finish();
  }
  top.finish();
  if (!issues.empty()) throw ConfigError(issues);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> issues;
  const int n = static_cast<int>(c.mass.size());
  bool mass_ok = true;
  if (c.mode != Mode::Verify || !c.mass.empty()) {
    if (n < 3) {
      issues.push_back("mass: dimension n must be at least 3");
      mass_ok = false;
    }
    for (double v : c.mass)
      if (!(std::isfinite(v) && v > 0.0)) {
        issues.push_back("mass: mass tensor must be positive");
        mass_ok = false;
        break;
      }
  }
  const auto& in = c.integrator;
  if (!(in.dt > 0.0) || !std::isfinite(in.dt)) issues.push_back("integrator.dt: must be positive");
  if (in.steps < 0) issues.push_back("integrator.steps: must be non-negative");
  if (!(in.energy_guard > 0.0)) issues.push_back("integrator.energy_guard: must be positive");
  if (!(in.orth_tol > 0.0)) issues.push_back("integrator.orth_tol: must be positive");
  if (c.output.stride < 1) issues.push_back("output.stride: must be at least 1");
  if (c.batch < 1) issues.push_back("batch: must be at least 1");
  if (c.batch > 1 && c.initial.kind != InitialKind::Random)
    issues.push_back("batch: batches need initial.kind = random");
  if (c.batch > 1 && c.mode != Mode::Full && c.mode != Mode::Reduced)
    issues.push_back("batch: batches are supported for full and reduced modes");
  if (c.em_samples < 0) issues.push_back("em_samples: must be non-negative");

  const auto& s = c.initial;
  if (mass_ok && n >= 3) {
    if (s.kind == InitialKind::Explicit) {
      const bool reduced = !s.q.empty() || !s.p.empty();
      const bool full = !s.g.empty() || !s.omega.empty();
      if (reduced == full) issues.push_back("initial: explicit start needs either q, p or g, omega");
      if (reduced && (static_cast<int>(s.q.size()) != n || static_cast<int>(s.p.size()) != n))
        issues.push_back("initial.q, initial.p: need n entries each");
      if (full) {
        auto square = [n](const std::vector<std::vector<double>>& m) {
          if (static_cast<int>(m.size()) != n) return false;
          for (const auto& row : m)
            if (static_cast<int>(row.size()) != n) return false;
          return true;
        };
        if (!square(s.g) || !square(s.omega)) issues.push_back("initial.g, initial.omega: need n x n matrices");
        if (c.mode != Mode::Full && !(c.mode == Mode::Spectrum && c.spectrum.space == "full"))
          issues.push_back("initial: explicit g, omega only applies to the full system");
      }
    }
    if (s.kind == InitialKind::SteadyRotation) {
      if (s.plane_i < 1 || s.plane_j < 1 || s.plane_i > n || s.plane_j > n || s.plane_i == s.plane_j)
        issues.push_back("initial.plane: need two distinct axes in 1..n");
    }
    if (s.kind == InitialKind::Random && !(s.scale > 0.0)) issues.push_back("initial.scale: must be positive");

    const MassTensor J(c.mass);
    const auto cls = classify_symmetry(J);
    const bool axi = std::holds_alternative<Axisymmetric>(cls);
    const bool cyl = std::holds_alternative<Cylindrical>(cls);
    if ((c.mode == Mode::Axi || c.mode == Mode::AxisTrace) && !axi)
      issues.push_back("mass: mode " + mode_name(c.mode) + " needs an axisymmetric mass tensor with J1 != J2");
    if (c.mode == Mode::AxisTrace && n != 3) issues.push_back("mass: axis-trace needs n = 3");
    if (c.mode == Mode::Cyl && !cyl)
      issues.push_back("mass: cyl mode needs a cylindrical mass tensor with J1 != J2 (degenerate body)");
    if ((s.kind == InitialKind::CylReleq || s.kind == InitialKind::CylPoint) && !cyl)
      issues.push_back("initial.kind: " + std::string(s.kind == InitialKind::CylReleq ? "cyl-releq" : "cyl-point") +
                       " needs a cylindrical mass tensor");
    if (s.kind == InitialKind::AxiPoint && !axi) issues.push_back("initial.kind: axi-point needs an axisymmetric mass tensor");
    if (c.mode == Mode::Strata && c.strata.kind == "cone" && !cyl)
      issues.push_back("mass: cone strata need a cylindrical mass tensor");
    if (c.mode == Mode::Strata && c.strata.kind == "canoe" && !axi)
      issues.push_back("mass: canoe strata need an axisymmetric mass tensor");
  }
  if (c.spectrum.space != "reduced" && c.spectrum.space != "full")
    issues.push_back("spectrum.space: must be reduced or full");
  if (c.spectrum.sample_stride < 1) issues.push_back("spectrum.sample_stride: must be at least 1");
  if (!(c.spectrum.tolerance > 0.0)) issues.push_back("spectrum.tolerance: must be positive");
  if (c.spectrum.max_coefficient < 1) issues.push_back("spectrum.max_coefficient: must be at least 1");
  if (c.strata.kind != "cone" && c.strata.kind != "canoe") issues.push_back("strata.kind: must be cone or canoe");
  if (!(c.strata.P >= 0.0)) issues.push_back("strata.P: must be non-negative");
  if (c.strata.grid < 2) issues.push_back("strata.grid: must be at least 2");
  if (!issues.empty()) throw ConfigError(issues);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_environment(ExperimentConfig& c) {
  if (const char* env = std::getenv("VESELOVA_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError({"VESELOVA_SEED: not an unsigned integer"});
    c.seed = v;
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = 1;
  j["mode"] = mode_name(c.mode);
  j["mass"] = c.mass;
  j["seed"] = c.seed;
  if (c.batch != 1) j["batch"] = c.batch;
  if (c.em_samples != 0) j["em_samples"] = c.em_samples;
  json ini;
  const auto& s = c.initial;
  for (const auto& e : initial_table)
    if (e.kind == s.kind) ini["kind"] = e.name;
  switch (s.kind) {
    case InitialKind::Random: ini["scale"] = s.scale; break;
    case InitialKind::Explicit:
      if (!s.q.empty()) {
        ini["q"] = s.q;
        ini["p"] = s.p;
      } else {
        ini["g"] = s.g;
        ini["omega"] = s.omega;
      }
      break;
    case InitialKind::SteadyRotation:
      ini["plane"] = {s.plane_i, s.plane_j};
      ini["speed"] = s.speed;
      ini["phase"] = s.phase;
      break;
    case InitialKind::CylReleq:
      ini["h"] = s.h;
      ini["P"] = s.P;
      ini["offset_A"] = s.offset_A;
      ini["offset_D"] = s.offset_D;
      break;
    case InitialKind::AxiPoint:
      ini["q1"] = s.q1;
      ini["p1"] = s.p1;
      ini["P"] = s.P;
      break;
    case InitialKind::CylPoint:
      ini["A"] = s.A;
      ini["B"] = s.B;
      ini["P"] = s.P;
      ini["D"] = s.D;
      break;
  }
  j["initial"] = ini;
  j["integrator"] = {{"dt", c.integrator.dt},
                     {"steps", c.integrator.steps},
                     {"energy_guard", c.integrator.energy_guard},
                     {"orth_tol", c.integrator.orth_tol}};
  j["output"] = {{"path", c.output.path}, {"report", c.output.report}, {"stride", c.output.stride}};
  if (c.mode == Mode::Spectrum)
    j["spectrum"] = {{"space", c.spectrum.space},
                     {"sample_stride", c.spectrum.sample_stride},
                     {"tolerance", c.spectrum.tolerance},
                     {"max_coefficient", c.spectrum.max_coefficient}};
  if (c.mode == Mode::Strata) j["strata"] = {{"kind", c.strata.kind}, {"P", c.strata.P}, {"grid", c.strata.grid}};
  return j.dump(2) + "\n";
}

}  // namespace veselova::cli
