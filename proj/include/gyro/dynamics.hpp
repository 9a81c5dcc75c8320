#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gyro/circuit.hpp"

namespace gyro {

// Root of phi + beta sin(phi) + bias = 0 nearest `hint`. For beta < 1 the
// left side is strictly increasing and the root is unique; for beta >= 1 a
// note is appended to `warnings` (if given) and the branch through `hint`
// is followed.
double static_operating_point(double beta, double bias, double hint = 0.0,
                              std::vector<std::string>* warnings = nullptr);

// Effective bias that places the static root at phi0: -(phi0 + beta sin phi0).
double bias_for_operating_point(double beta, double phi0);

// Phase offset produced by a rotation rate about the loop normal, and back.
double rotation_to_phase(double omega, double area, const PhysicalConstants& pc);
double phase_to_rotation(double phase, double area, const PhysicalConstants& pc);

struct Impulse {
  double phase_kick = 0;  // instantaneous jump of phi_J, rad
  double time = 0;        // s
};

struct SimConfig {
  explicit SimConfig(CircuitModel model) : circuit(std::move(model)) {}

  CircuitModel circuit;
  double phi0 = 2.3;            // operating phase that fixes the external bias
  double phiA = 0.2;            // target excursion for the calibrated impulse
  double rotation_phase = 0.0;  // extra fluxoid bias from rotation, rad
  double temperature = 0.010;   // K
  double dt = 50e-6;            // s
  double duration = 10.0;       // s
  std::uint64_t seed = 1;
  std::optional<Impulse> impulse;
  double noise_psd_scale = 1.0;
  bool thermal_noise = true;
  std::optional<double> resistance_override;  // replaces R_tot when set
  std::size_t decimation = 1;

  // Requires beta < 1, dt <= (2 pi / omega_H) / 200 and duration >= 20
  // periods, plus positivity of the numeric fields.
  void validate() const;
};

struct SimState {
  double Q = 0;      // kg on the diaphragm capacitor
  double phi_J = 0;  // rad
  double t = 0;      // s
};

// Two-state (Q, phi_J) integrator: half kick of phi_J, full drift of Q, half
// kick of phi_J. Damping and the Langevin force enter the kicks; the force is
// held constant over a step with variance 2 k_B T R scale / dt.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config, std::uint64_t stream = 0);

  const SimState& state() const { return state_; }
  void set_state(const SimState& s) { state_ = s; }

  // Advances one step; throws SimulationError if phi_J moves by more than pi
  // or leaves the finite range.
  void step();

  // Circuit current I_c sin phi + (hbar/m)(phi - phi_b)/L_l, kg/s.
  double current(double phi) const;

  // Q^2/2C + V(phi) - V(phi_eq), J.
  double energy(const SimState& s) const;
  double energy() const { return energy(state_); }

  double equilibrium_phase() const { return phi_eq_; }
  double resistance() const { return resistance_; }
  double noise_sigma() const { return noise_sigma_; }

 private:
  SimConfig config_;
  double p_, C_, I_c_, L_l_, phi_b_, phi_eq_, resistance_, noise_sigma_;
  SimState state_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct Trajectory {
  std::vector<double> t;      // s
  std::vector<double> x;      // diaphragm displacement Q / (rho a_d), m
  std::vector<double> phi_J;  // rad
};

Trajectory simulate(const SimConfig& config, std::uint64_t stream = 0);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Kick that makes the free oscillation reach max |phi_J - phi_eq| = phiA,
// found from the turning points of the potential.
double calibrate_impulse(const SimConfig& config);

// Amplitude-dependent frequency shift d omega / d(a^2) of the free
// oscillation from the cubic and quartic terms of the potential, a being the
// phase amplitude.
double landau_coefficient(const CircuitModel& model, double phi0);

// Reference quantities from noiseless, zero-rotation runs.
struct RingdownCalibration {
  double kick = 0;         // rad
  double omega_ref = 0;    // compensated frequency, dispersion corrected, rad/s
  double a_ref2 = 0;       // mean squared phase amplitude
  double kappa = 0;        // measured d omega / d(a^2)
  double bias_ref = 0;     // effective bias at zero rotation
  double phi0_ref = 0;
};

RingdownCalibration calibrate_ringdown(const SimConfig& config);

struct RingdownRecord {
  Trajectory trajectory;
  double omega_hat = 0;     // decaying-sinusoid fit, rad/s
  double se_omega = 0;
  double lambda = 0;        // envelope decay rate, 1/s
  double se_lambda = 0;
  double omega_compensated = 0;  // carrier plus amplitude-compensated drift, rad/s
  double amplitude2 = 0;    // mean squared phase amplitude
  double phi0_hat = 0;
  double rotation_hat = 0;  // rad/s
};

// Free decay after the impulse (calibrated when config.impulse is empty),
// followed by period estimation and inversion to a rotation rate relative to
// the calibration reference.
RingdownRecord ringdown_experiment(const SimConfig& config, const RingdownCalibration& cal, std::uint64_t stream = 0);

struct MonteCarloResult {
  double sqrt_S_omega = 0;  // rad/s/sqrt(Hz)
  double ci_low = 0;        // 95% bootstrap interval
  double ci_high = 0;
  double mean_rotation = 0;
  double analytic_sqrt_S_omega = 0;  // closed-form density at the same noise scale
  std::size_t trials = 0;
  std::size_t failed = 0;
  double trial_duration = 0;
  std::vector<double> rotation_estimates;  // in trial order; NaN for failures
  RingdownCalibration calibration;
  std::vector<std::string> failures;
};

// Spread of the rotation estimate over independent trials scaled by the
// square root of the trial duration. Trials run on `threads` workers (0:
// hardware concurrency) and are assembled in trial order. Throws
// SimulationError if more than 1% of trials abort.
MonteCarloResult monte_carlo_sensitivity(const SimConfig& config, std::size_t n_trials, std::size_t threads = 0);

}  // namespace gyro
