#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gyro/circuit.hpp"
#include "gyro/design.hpp"
#include "gyro/dynamics.hpp"
#include "gyro/noise.hpp"
#include "gyro/relativity.hpp"

namespace gyro {

// Blocks hold the values exactly as written in the file (degrees, Hz) so that
// a scenario serialises back to identical numbers.
struct GeometryBlock {
  double area_m2 = 0;
  double line_length_m = 0;
  double line_cross_section_m2 = 0;
  double diaphragm_area_m2 = 0;
  double spring_constant_N_per_m = 0;
  double diaphragm_resonance_Hz = 0;
  double diaphragm_quality_factor = 0;
  double critical_current_kg_per_s = 0;

  GyrometerGeometry to_geometry() const;
  static GeometryBlock from_geometry(const GyrometerGeometry& g);
  bool operator==(const GeometryBlock&) const = default;
};

struct OrientationBlock {
  double theta_deg = 0;
  double chi_deg = 0;
  double psi_deg = 0;

  Orientation to_orientation() const { return Orientation::from_degrees(theta_deg, chi_deg, psi_deg); }
  bool operator==(const OrientationBlock&) const = default;
};

struct TemperatureGrid {
  double min_K = 0;
  double max_K = 0;
  std::size_t points = 0;
  bool operator==(const TemperatureGrid&) const = default;
};

struct SweepBlock {
  std::vector<double> temperatures_K;    // explicit list, or
  std::optional<TemperatureGrid> grid;   // log-spaced grid
  std::vector<double> diaphragm_quality_factors;

  std::vector<double> temperatures() const;
  bool operator==(const SweepBlock&) const = default;
};

struct SimBlock {
  double dt_s = 50e-6;
  double duration_s = 10.0;
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: single ringdown only
  double noise_psd_scale = 1.0;
  double rotation_rad_per_s = 0.0;
  std::size_t trajectory_decimation = 1;
  bool thermal_noise = true;
  bool operator==(const SimBlock&) const = default;
};

struct OutputBlock {
  std::string directory = "gyro-out";
  bool write_trajectory = true;
  bool operator==(const OutputBlock&) const = default;
};

struct Scenario {
  std::optional<std::string> constants_ref;
  GeometryBlock geometry;
  OrientationBlock orientation;
  PpnParams ppn;
  OperatingPoint operating;
  std::optional<SweepBlock> sweep;
  std::optional<SimBlock> sim;
  OutputBlock output;

  bool operator==(const Scenario&) const = default;
};

// Strict parse: unknown keys, missing required keys and wrong types are
// ValidationErrors naming the offending path (and line for syntax errors).
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);
std::string to_json(const Scenario& s);

// Constants named by constants_ref (relative to base_dir), else the default.
PhysicalConstants scenario_constants(const Scenario& s, const std::filesystem::path& base_dir);

// Runs every block through its module's invariants.
void validate_scenario(const Scenario& s, const PhysicalConstants& pc);

SimConfig make_sim_config(const Scenario& s, const PhysicalConstants& pc);

// Design-space file: {"phiA_max_rad": ..., "max_evaluations": ..., "free": {key: [lo, hi]}}
// with keys as in the geometry/operating blocks.
struct DesignSpaceFile {
  double phiA_max = 0.2;
  std::size_t max_evaluations = 4000;
  std::vector<std::pair<DesignParameter, Bounds>> free;  // internal units (rad/s for the diaphragm)
};

DesignSpaceFile parse_design_space(const std::string& text, const std::string& origin = "<string>");
DesignSpaceFile load_design_space(const std::filesystem::path& path);

// Writes a design point back into the scenario, leaving untouched any value
// whose internal representation is unchanged.
void apply_design_point(Scenario& s, const DesignPoint& point);

}  // namespace gyro
