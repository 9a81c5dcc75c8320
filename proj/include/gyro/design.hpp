#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gyro/noise.hpp"

namespace gyro {

enum class DesignParameter {
  area,
  line_length,
  line_cross_section,
  diaphragm_area,
  spring_constant,
  diaphragm_omega,
  diaphragm_q,
  critical_current,
  phi0,
  phiA,
};

// Scenario key used for each parameter (e.g. "area_m2", "phi0_rad").
std::string_view parameter_key(DesignParameter p);
std::optional<DesignParameter> parameter_from_key(std::string_view key);

struct Bounds {
  double lo = 0;
  double hi = 0;
};

struct DesignPoint {
  GyrometerGeometry geometry;
  OperatingPoint op;

  double get(DesignParameter p) const;
  void set(DesignParameter p, double v);
};

// Box over a subset of parameters around a baseline point; everything not
// listed stays at the baseline value. Temperature is always fixed.
struct DesignSpace {
  DesignPoint baseline;
  std::vector<std::pair<DesignParameter, Bounds>> free;
  double phiA_max = 0.2;

  void validate() const;
};

// Names of violated constraints; empty when feasible.
std::vector<std::string> violated_constraints(const DesignPoint& point, const PhysicalConstants& pc,
                                              double phiA_max);

// sqrt_S_omega at the point, or +inf when infeasible.
double design_objective(const DesignPoint& point, const PhysicalConstants& pc, double phiA_max);

struct DesignResult {
  DesignPoint best;
  NoiseReport report;
  double objective = 0;
  double baseline_objective = 0;
  std::vector<std::string> active_constraints;
  std::size_t evaluations = 0;
};

// Feasibility grid pre-pass followed by a bounded Nelder-Mead search in
// normalised coordinates. Deterministic for a given seed. Throws
// InfeasibleError when the baseline violates a constraint.
DesignResult optimize_design(const DesignSpace& space, const PhysicalConstants& pc, std::uint64_t seed,
                             std::size_t max_evaluations = 4000);

}  // namespace gyro
