#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gyro/commands.hpp"
#include "gyro/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kDomain = 3, kSimulation = 4 };

struct Options {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  double target_rel_err = 0.002;
  std::string design_space;
};

int run(const std::string& command, const Options& opt) {
  const std::filesystem::path scenario_path(opt.scenario);
  gyro::Scenario s = gyro::load_scenario(scenario_path);
  if (opt.seed && s.sim) s.sim->seed = *opt.seed;
  const auto pc = gyro::scenario_constants(s, scenario_path.parent_path());
  gyro::validate_scenario(s, pc);
  const std::filesystem::path out_dir = opt.out.empty() ? std::filesystem::path(s.output.directory) : std::filesystem::path(opt.out);

  gyro::Report report;
  if (command == "phase-budget") {
    report = gyro::cmd_phase_budget(s, pc);
  } else if (command == "noise-sweep") {
    report = gyro::cmd_noise_sweep(s, pc, out_dir);
  } else if (command == "plan") {
    report = gyro::cmd_plan(s, pc, opt.target_rel_err);
  } else if (command == "simulate") {
    report = gyro::cmd_simulate(s, pc, out_dir);
  } else {
    const auto space = gyro::load_design_space(opt.design_space);
    report = gyro::cmd_optimize(s, pc, space, opt.seed.value_or(s.sim ? s.sim->seed : 1), out_dir);
  }

  const std::string text = report.dump(2) + "\n";
  std::filesystem::create_directories(out_dir);
  std::string name = command;
  for (auto& ch : name) ch = ch == '-' ? '_' : ch;
  std::ofstream(out_dir / (name + ".json")) << text;
  std::cout << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and noise-budget tool for a superfluid helium Josephson gyrometer"};
  app.require_subcommand(1);
  Options opt;

  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (default: output.directory of the scenario)");
    sub->add_option("--seed", opt.seed, "Override the scenario seed");
    sub->add_option("--target-rel-err", opt.target_rel_err, "Target relative error for plan")
        ->check(CLI::PositiveNumber);
    return sub;
  };
  add("phase-budget", "Relativistic phase budget and projected precession rates");
  add("noise-sweep", "Noise floor over temperature and diaphragm Q (CSV per family)");
  add("plan", "Measurement time, position resolution and orientation tolerance");
  add("simulate", "Time-domain ringdown and optional Monte Carlo sensitivity");
  add("optimize", "Bounded search of a design space")
      ->add_option("--design-space", opt.design_space, "Design-space JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const gyro::ValidationError& e) {
    std::cerr << "gyro " << command << ": validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const gyro::DomainError& e) {
    std::cerr << "gyro " << command << ": domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const gyro::SimulationError& e) {
    std::cerr << "gyro " << command << ": simulation aborted: " << e.what() << '\n';
    return kSimulation;
  } catch (const std::exception& e) {
    std::cerr << "gyro " << command << ": internal error: " << e.what() << '\n';
    return kInternal;
  }
}
