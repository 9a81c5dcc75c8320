#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "gyro/physconst.hpp"
#include "gyro/units.hpp"

namespace gyro {

struct GyrometerGeometry {
  double area = 0;                // A, pickup area, m^2
  double line_length = 0;         // l, m
  double line_cross_section = 0;  // a_l, m^2
  double diaphragm_area = 0;      // a_d, m^2
  double spring_constant = 0;     // k_d, N/m
  double diaphragm_omega = 0;     // omega_d, rad/s
  double diaphragm_q = 0;         // Q_d
  double critical_current = 0;    // I_c, kg/s

  // Baseline design: 10 cm loop radius, 3 kHz diaphragm, Q_d = 1e5.
  static GyrometerGeometry baseline();

  void validate() const;
  bool operator==(const GyrometerGeometry&) const = default;
};

struct OperatingPoint {
  double phi0 = 0;         // static junction phase, rad
  double phiA = 0;         // drive amplitude, rad
  double temperature = 0;  // K

  static OperatingPoint baseline() { return {2.3, 0.2, 0.010}; }

  // Requires cos(phi0) + 1/beta > 0 and 0 < phiA < pi/2.
  void validate(double beta) const;
  bool operator==(const OperatingPoint&) const = default;
};

// Lumped elements of the Helmholtz circuit. Immutable once built.
class CircuitModel {
 public:
  CircuitModel(const GyrometerGeometry& geometry, const PhysicalConstants& constants);

  const GyrometerGeometry& geometry() const { return geometry_; }
  const PhysicalConstants& constants() const { return constants_; }

  HydroInductance loop_inductance() const { return loop_inductance_; }          // L_l = l/(rho a_l)
  HydroInductance junction_inductance0() const { return junction_inductance0_; }  // L_J(0)
  HydroCapacitance capacitance() const { return capacitance_; }                 // C_d = (a_d rho)^2/k_d
  HydroResistance diaphragm_resistance() const { return diaphragm_resistance_; }
  double beta() const { return loop_inductance_ / junction_inductance0_; }

  // hbar/m4; converts junction phase to the flux-like variable of the circuit.
  double phase_scale() const { return constants_.universal.hbar / constants_.helium.m4; }

  // Non-fatal notes raised at construction (e.g. beta >= 1).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  GyrometerGeometry geometry_;
  PhysicalConstants constants_;
  HydroInductance loop_inductance_;
  HydroInductance junction_inductance0_;
  HydroCapacitance capacitance_;
  HydroResistance diaphragm_resistance_;
  std::vector<std::string> warnings_;
};

// kappa4 / (2 pi I_c cos phi); negative for cos phi < 0. Throws
// StabilityError when |cos phi| < 1e-12.
HydroInductance josephson_inductance(double phi, double critical_current, const PhysicalConstants& pc);

// Three-phonon loss of the sensing line evaluated at angular frequency omega.
HydroResistance loop_resistance(double temperature, const CircuitModel& model, double omega);
// Same, with omega = omega_H(phi0). omega_H depends only on the reactive
// elements, so no self-consistency iteration is needed.
HydroResistance loop_resistance_at_resonance(double temperature, const CircuitModel& model, double phi0);

// Thermo-viscous loss of the junction.
HydroResistance junction_resistance(double temperature, const CircuitModel& model);

// 1 / (C_d omega_d Q_d).
HydroResistance diaphragm_resistance(const GyrometerGeometry& geometry, const PhysicalConstants& pc);

struct HelmholtzFrequency {
  double omega_H = 0;   // [(L_J(phi0) || L_l) C_d]^-1/2
  double omega_oo = 0;  // (L_J(0) C_d)^-1/2
  HydroInductance effective_inductance;  // L_J(phi0) || L_l
  HydroInductance junction_inductance;   // L_J(phi0)
};

// Throws StabilityError if L_J(phi0) || L_l <= 0.
HelmholtzFrequency helmholtz_frequency(const CircuitModel& model, double phi0);

struct QualityFactor {
  double Q_H = 0;
  HelmholtzFrequency resonance;
  std::complex<double> z_junction;  // i omega_H L_J(phi0) + R_J
  std::complex<double> z_loop;      // i omega_H L_l + R_l
  std::complex<double> z_parallel;
  HydroResistance r_loop;
  HydroResistance r_junction;
  HydroResistance r_diaphragm;
  HydroResistance r_fluid;  // Re[Z_J || Z_l]
  HydroResistance r_total;  // R_d + r_fluid
};

// Overall Q of the Helmholtz resonance with the exact complex parallel
// combination of the junction and loop branches. With
// include_fluid_losses = false only R_d remains.
QualityFactor quality_factor(const CircuitModel& model, double phi0, double temperature,
                             bool include_fluid_losses = true);

// Small-R reduction of the full circuit to a series RLC.
struct SeriesRlc {
  HydroInductance inductance;  // L_J(phi0) || L_l
  HydroResistance resistance;  // R_d + Re[Z_J || Z_l]
  HydroCapacitance capacitance;
  double omega = 0;
  double Q = 0;
};

SeriesRlc series_rlc(const CircuitModel& model, double phi0, double temperature, bool include_fluid_losses = true);

// First-order small-R form of Re[Z_J || Z_l]:
//   (R_J X_l^2 + R_l X_J^2) / ((X_J + X_l)^2 + (R_J + R_l)^2)
double parallel_resistance_small_r(double r_junction, double x_junction, double r_loop, double x_loop);

// Flat key/value dump of every lumped value at an operating point.
std::vector<std::pair<std::string, double>> lumped_report(const CircuitModel& model, const OperatingPoint& op);

}  // namespace gyro
