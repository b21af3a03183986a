#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "veselova/cli/run.hpp"
#include "veselova/errors.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numeric = 2;
constexpr int exit_check = 3;

int emit(const veselova::cli::RunReport& rep, const std::string& report_path) {
  const std::string text = veselova::cli::report_to_json(rep);
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return exit_usage;
    }
    out << text;
  }
  for (const auto& c : rep.checks)
    if (!c.passed) std::cerr << "check failed: " << c.name << " = " << c.value << " (threshold " << c.threshold << ")\n";
  return rep.all_checks_passed() ? exit_ok : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace veselova::cli;
  CLI::App app{"Veselova top simulator"};
  app.require_subcommand(1);

  std::string config_path, output, report;
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output", output, "CSV output path (overrides the config)");
  run_cmd->add_option("-r,--report", report, "JSON report path (overrides the config)");
  run_cmd->add_option("-s,--seed", seed, "Seed (overrides the config and VESELOVA_SEED)");

  auto* check_cmd = app.add_subcommand("check", "Validate a config without running it");
  check_cmd->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::vector<double> mass{1.0, 2.0, 3.0};
  std::uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite for one mass tensor");
  verify_cmd->add_option("-m,--mass", mass, "Diagonal of the mass tensor")->delimiter(',');
  verify_cmd->add_option("-s,--seed", verify_seed, "Seed");
  verify_cmd->add_option("-r,--report", report, "JSON report path");

  std::string preset_dir;
  auto* presets_cmd = app.add_subcommand("presets", "List the preset configs, or write them to a directory");
  presets_cmd->add_option("-d,--dir", preset_dir, "Directory to write <name>.json files into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*presets_cmd) {
      for (const auto& [name, cfg] : presets()) {
        if (preset_dir.empty()) {
          std::cout << name << "\n";
          continue;
        }
        std::filesystem::create_directories(preset_dir);
        std::ofstream(std::filesystem::path(preset_dir) / (name + ".json")) << config_to_json(cfg);
      }
      return exit_ok;
    }
    if (*check_cmd) {
      ExperimentConfig cfg = load_config(config_path);
      validate(cfg);
      std::cout << "ok\n";
      return exit_ok;
    }
    if (*verify_cmd) {
      ExperimentConfig cfg;
      cfg.mode = Mode::Verify;
      cfg.mass = mass;
      cfg.seed = verify_seed;
      return emit(run(cfg), report);
    }
    ExperimentConfig cfg = load_config(config_path);
    apply_environment(cfg);
    if (seed) cfg.seed = *seed;
    if (!output.empty()) cfg.output.path = output;
    if (!report.empty()) cfg.output.report = report;
    return emit(run(cfg), cfg.output.report);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "config error: " << issue << "\n";
    return exit_usage;
  } catch (const veselova::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
}
