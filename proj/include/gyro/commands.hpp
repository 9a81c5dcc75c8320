#pragma once

#include <filesystem>

#include <json.hpp>

#include "gyro/scenario.hpp"

namespace gyro {

using Report = nlohmann::ordered_json;

// Frame-dragging precession rate projected on the loop normal, rad/s.
double frame_dragging_signal(const Scenario& s, const PhysicalConstants& pc);

Report cmd_phase_budget(const Scenario& s, const PhysicalConstants& pc);

// Writes noise_sweep_solid.csv (all losses) and noise_sweep_dashed.csv
// (diaphragm loss only) into out_dir.
Report cmd_noise_sweep(const Scenario& s, const PhysicalConstants& pc, const std::filesystem::path& out_dir);

Report cmd_plan(const Scenario& s, const PhysicalConstants& pc, double target_rel_err);

// Calibrated ringdown with the scenario seed, written to trajectory.csv, and
// a Monte Carlo summary when sim.trials > 0.
Report cmd_simulate(const Scenario& s, const PhysicalConstants& pc, const std::filesystem::path& out_dir);

// Writes optimized_scenario.json into out_dir.
Report cmd_optimize(const Scenario& s, const PhysicalConstants& pc, const DesignSpaceFile& space, std::uint64_t seed,
                    const std::filesystem::path& out_dir);

}  // namespace gyro
