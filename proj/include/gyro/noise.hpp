#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gyro/circuit.hpp"

namespace gyro {

// beta (cos phi0 + 1/beta)^(5/4) / sin phi0. Throws StabilityError at or
// beyond the stability boundary and where sin phi0 vanishes.
double epsilon(double phi0, double beta);

struct NoiseReport {
  double sqrt_S_omega = 0;  // rad/s/sqrt(Hz)
  double sqrt_S_tau = 0;    // s/sqrt(Hz); (2A/c^2) sqrt_S_omega
  double epsilon = 0;
  double Q_H = 0;
  double omega_H = 0;
  double omega_oo = 0;
  double temperature = 0;
  double x_resolution_required = std::numeric_limits<double>::quiet_NaN();  // m/sqrt(Hz)

  // Integration time to resolve `signal` (rad/s) to relative error `target_rel_err`.
  double measurement_time(double signal, double target_rel_err) const;
};

// Thermal-noise limited rotation sensitivity at the operating point.
NoiseReport rotation_noise_density(const CircuitModel& model, const OperatingPoint& op,
                                   bool include_fluid_losses = true);

// (sqrt_S_omega / (signal target_rel_err))^2
double measurement_time(double sqrt_S_omega, double signal, double target_rel_err);

// On-resonance thermal displacement density of the diaphragm,
// sqrt(4 k_B T / R_tot) / (omega_H rho a_d).
double position_resolution_required(const CircuitModel& model, double phi0, double temperature);

struct SweepSpec {
  std::vector<double> temperatures;  // K, strictly increasing, positive
  std::vector<double> diaphragm_qs;  // strictly increasing, positive
  bool include_fluid_losses = true;

  void validate() const;
  bool operator==(const SweepSpec&) const = default;
};

enum class Regime { diaphragm, fluid, error };
const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct SweepRow {
  double temperature = 0;
  double diaphragm_q = 0;
  double sqrt_S_omega = std::numeric_limits<double>::quiet_NaN();
  double sqrt_S_tau = std::numeric_limits<double>::quiet_NaN();
  double Q_H = std::numeric_limits<double>::quiet_NaN();
  Regime regime = Regime::error;
  std::string errata;  // domain error text for failed rows; empty otherwise
};

// One row per (Q_d, T) pair, Q_d-major. Rows that hit a domain error are
// kept with regime = error and the message in errata.
std::vector<SweepRow> sweep(const SweepSpec& spec, const GyrometerGeometry& geometry,
                            const PhysicalConstants& constants, const OperatingPoint& op);

// CSV with header T_K,Q_d,sqrtS_omega,sqrtS_tau,Q_H,regime,errata.
inline constexpr const char* kSweepCsvHeader = "T_K,Q_d,sqrtS_omega,sqrtS_tau,Q_H,regime,errata";
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

}  // namespace gyro
