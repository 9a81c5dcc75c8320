#include "gyro/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "gyro/errors.hpp"
#include "gyro/fit.hpp"
#include "gyro/noise.hpp"

namespace gyro {

namespace {

constexpr double kPi = std::numbers::pi;

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

}  // namespace

double static_operating_point(double beta, double bias, double hint, std::vector<std::string>* warnings) {
  if (!std::isfinite(beta) || !std::isfinite(bias) || !std::isfinite(hint) || !(beta >= 0.0))
    throw ValidationError("static_operating_point: beta must be finite and non-negative, bias and hint finite");
  auto f = [&](double phi) { return phi + beta * std::sin(phi) + bias; };
  auto df = [&](double phi) { return 1.0 + beta * std::cos(phi); };

  if (beta >= 1.0) {
    if (warnings) warnings->push_back("beta >= 1: the static relation has several roots; following the branch at the hint");
    double phi = hint;
    for (int it = 0; it < 200; ++it) {
      const double d = df(phi);
      if (std::abs(d) < 1e-12) break;
      const double step = f(phi) / d;
      phi -= std::clamp(step, -0.5, 0.5);
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(phi))) return phi;
    }
    if (std::abs(f(phi)) < 1e-12) return phi;
    throw StabilityError("static_operating_point: no converged root near the hint for beta >= 1");
  }

  // f is strictly increasing; the root lies within beta of -bias.
  double lo = -bias - beta, hi = -bias + beta;
  if (beta == 0.0) return -bias;
  double phi = std::clamp(hint, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double v = f(phi);
    if (v == 0.0) return phi;
    (v < 0.0 ? lo : hi) = phi;
    double next = phi - v / df(phi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == phi || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi))) {
      phi = next;
      break;
    }
    phi = next;
  }
  return phi;
}

double bias_for_operating_point(double beta, double phi0) { return -(phi0 + beta * std::sin(phi0)); }

double rotation_to_phase(double omega, double area, const PhysicalConstants& pc) {
  return -2.0 * pc.helium.m4 * area * omega / pc.universal.hbar;
}

double phase_to_rotation(double phase, double area, const PhysicalConstants& pc) {
  return -pc.universal.hbar * phase / (2.0 * pc.helium.m4 * area);
}

void SimConfig::validate() const {
  const double beta = circuit.beta();
  if (!(beta < 1.0)) throw StabilityError("simulation requires beta < 1 (got " + std::to_string(beta) + ")");
  if (!std::isfinite(phi0)) throw ValidationError("sim: phi0 must be finite");
  if (!(phiA > 0.0 && phiA < kPi / 2)) throw ValidationError("sim: phiA must lie in (0, pi/2)");
  if (!std::isfinite(rotation_phase)) throw ValidationError("sim: rotation phase must be finite");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw ValidationError("sim: temperature must be >= 0");
  if (!(noise_psd_scale >= 0.0) || !std::isfinite(noise_psd_scale))
    throw ValidationError("sim: noise_psd_scale must be >= 0");
  if (resistance_override && !(*resistance_override >= 0.0)) throw ValidationError("sim: resistance override must be >= 0");
  if (decimation < 1) throw ValidationError("sim: decimation must be >= 1");
  if (impulse && (!std::isfinite(impulse->phase_kick) || !(impulse->time >= 0.0)))
    throw ValidationError("sim: impulse must be finite with time >= 0");
  const double period = 2.0 * kPi / helmholtz_frequency(circuit, phi0).omega_H;
  if (!(dt > 0.0) || dt > period / 200.0)
    throw ValidationError("sim: dt must be positive and at most 1/200 of the Helmholtz period (" +
                          std::to_string(period / 200.0) + " s)");
  if (!(duration >= 20.0 * period)) throw ValidationError("sim: duration must cover at least 20 Helmholtz periods");
}

Simulator::Simulator(const SimConfig& config, std::uint64_t stream) : config_(config) {
  config_.validate();
  const auto& m = config_.circuit;
  const auto& pc = m.constants();
  p_ = m.phase_scale();
  C_ = m.capacitance().value();
  I_c_ = m.geometry().critical_current;
  L_l_ = m.loop_inductance().value();
  const double bias = bias_for_operating_point(m.beta(), config_.phi0) + config_.rotation_phase;
  phi_b_ = -bias;
  phi_eq_ = static_operating_point(m.beta(), bias, config_.phi0);
  resistance_ = config_.resistance_override
                    ? *config_.resistance_override
                    : quality_factor(m, config_.phi0, config_.temperature).r_total.value();
  noise_sigma_ = config_.thermal_noise
                     ? std::sqrt(2.0 * pc.universal.k_B * config_.temperature * resistance_ * config_.noise_psd_scale /
                                 config_.dt)
                     : 0.0;
  auto seq = make_seed(config_.seed, stream);
  rng_.seed(seq);
  state_ = {0.0, phi_eq_, 0.0};
}

double Simulator::current(double phi) const { return I_c_ * std::sin(phi) + p_ * (phi - phi_b_) / L_l_; }

double Simulator::energy(const SimState& s) const {
  const double d = s.phi_J - phi_eq_;
  const double josephson = 2.0 * I_c_ * std::sin(0.5 * (s.phi_J + phi_eq_)) * std::sin(0.5 * d);
  const double loop = p_ / (2.0 * L_l_) * d * (s.phi_J + phi_eq_ - 2.0 * phi_b_);
  return s.Q * s.Q / (2.0 * C_) + p_ * (josephson + loop);
}

void Simulator::step() {
  const double h = config_.dt;
  const double mu = noise_sigma_ > 0.0 ? noise_sigma_ * normal_(rng_) : 0.0;
  const double phi_start = state_.phi_J;
  auto kick = [&] {
    state_.phi_J += 0.5 * h * (mu - state_.Q / C_ - resistance_ * current(state_.phi_J)) / p_;
  };
  kick();
  state_.Q += h * current(state_.phi_J);
  kick();
  state_.t += h;
  const double jump = state_.phi_J - phi_start;
  if (!std::isfinite(state_.phi_J) || !std::isfinite(state_.Q) || std::abs(jump) > kPi) {
    std::ostringstream msg;
    msg << std::setprecision(6) << "simulation blow-up at t = " << state_.t << " s: phi_J step " << jump
        << " rad, phi_J = " << state_.phi_J << ", Q = " << state_.Q;
    throw SimulationError(msg.str());
  }
}

Trajectory simulate(const SimConfig& config, std::uint64_t stream) {
  Simulator sim(config, stream);
  const auto n_steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  const double to_x = 1.0 / (config.circuit.constants().helium.rho * config.circuit.geometry().diaphragm_area);
  Trajectory tr;
  const std::size_t n_rec = n_steps / config.decimation + 1;
  tr.t.reserve(n_rec);
  tr.x.reserve(n_rec);
  tr.phi_J.reserve(n_rec);
  bool pending = config.impulse.has_value();
  for (std::size_t n = 0; n <= n_steps; ++n) {
    if (pending && sim.state().t >= config.impulse->time - 0.5 * config.dt) {
      SimState s = sim.state();
      s.phi_J += config.impulse->phase_kick;
      sim.set_state(s);
      pending = false;
    }
    if (n % config.decimation == 0) {
      const auto& s = sim.state();
      tr.t.push_back(static_cast<double>(n) * config.dt);
      tr.x.push_back(s.Q * to_x);
      tr.phi_J.push_back(s.phi_J);
    }
    if (n < n_steps) sim.step();
  }
  return tr;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t_s,x_m,phi_J_rad\n" << std::setprecision(17);
  for (std::size_t i = 0; i < tr.t.size(); ++i) out << tr.t[i] << ',' << tr.x[i] << ',' << tr.phi_J[i] << '\n';
}

double calibrate_impulse(const SimConfig& config) {
  SimConfig quiet = config;
  quiet.thermal_noise = false;
  const Simulator sim(quiet);
  const double eq = sim.equilibrium_phase();
  auto potential = [&](double phi) { return sim.energy({0.0, phi, 0.0}); };

  // The potential is convex for beta < 1, so each side is monotone.
  auto excursion = [&](double kick) {
    const double e = potential(eq + kick);
    double lo = eq - kPi, hi = eq;
    if (potential(lo) <= e) return std::max(kick, kPi);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (potential(mid) > e ? lo : hi) = mid;
    }
    return std::max(kick, eq - 0.5 * (lo + hi));
  };

  double lo = 0.0, hi = config.phiA;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * config.phiA; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excursion(mid) < config.phiA ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double landau_coefficient(const CircuitModel& model, double phi0) {
  const auto hf = helmholtz_frequency(model, phi0);
  const double w0 = hf.omega_H, woo2 = hf.omega_oo * hf.omega_oo;
  const double quad = -woo2 * std::sin(phi0) / 2.0;
  const double cubic = -woo2 * std::cos(phi0) / 6.0;
  return 3.0 * cubic / (8.0 * w0) - 5.0 * quad * quad / (12.0 * w0 * w0 * w0);
}

namespace {

struct Analysis {
  DecayingSinusoid fit;
  double omega_comp = 0;
  double a2_mean = 0;
};

struct Compensation {
  double kappa;
  double a_ref2;
};

// Carrier from a global fit, then block demodulation; the phase drift of the
// blocks, less the amplitude-induced part, refines the frequency.
Analysis analyze(const Trajectory& tr, const SimConfig& cfg, double t_start, std::optional<Compensation> comp) {
  const auto first = static_cast<std::size_t>(std::lower_bound(tr.t.begin(), tr.t.end(), t_start) - tr.t.begin());
  const std::vector<double> t(tr.t.begin() + static_cast<std::ptrdiff_t>(first), tr.t.end());
  const std::vector<double> x(tr.x.begin() + static_cast<std::ptrdiff_t>(first), tr.x.end());
  if (t.size() < 64) throw FitError("ringdown: record after the impulse is too short");
  const double ts = t[1] - t[0];

  const double guess = zero_crossing_frequency(t, x);
  const auto per_period = 2.0 * kPi / guess / ts;
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::floor(per_period / 48.0)));
  std::vector<double> ft, fx;
  for (std::size_t i = 0; i < t.size(); i += stride) {
    ft.push_back(t[i]);
    fx.push_back(x[i]);
  }

  Analysis a;
  a.fit = fit_decaying_sinusoid(ft, fx, guess);
  const double w = a.fit.omega;
  const auto block = static_cast<std::size_t>(std::max(8.0, std::round(10.0 * 2.0 * kPi / w / ts)));
  const auto blocks = demodulate(t, x, w, block);

  const auto& m = cfg.circuit;
  const double to_phase = m.constants().helium.rho * m.geometry().diaphragm_area / (m.capacitance().value() * m.phase_scale() * w);
  std::vector<double> bt, theta, a2;
  for (const auto& b : blocks) {
    bt.push_back(b.t_mid);
    theta.push_back(b.phase);
    const double amp = b.amplitude * to_phase;
    a2.push_back(amp * amp);
  }
  a.a2_mean = std::accumulate(a2.begin(), a2.end(), 0.0) / static_cast<double>(a2.size());

  if (comp) {
    double acc = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (k > 0) acc += 0.5 * ((a2[k] - comp->a_ref2) + (a2[k - 1] - comp->a_ref2)) * (bt[k] - bt[k - 1]);
      theta[k] -= comp->kappa * acc;
    }
  }
  a.omega_comp = w + (theta.size() >= 3 ? linear_fit(bt, theta).slope : 0.0);
  return a;
}

// Undo the leapfrog frequency warp: omega = (2/dt) sin(omega_hat dt / 2).
double undo_dispersion(double omega_hat, double dt) { return 2.0 / dt * std::sin(0.5 * omega_hat * dt); }

}  // namespace

RingdownCalibration calibrate_ringdown(const SimConfig& config) {
  SimConfig base = config;
  base.thermal_noise = false;
  base.rotation_phase = 0.0;
  base.impulse.reset();
  base.decimation = 1;

  RingdownCalibration cal;
  cal.kick = calibrate_impulse(base);
  cal.phi0_ref = static_operating_point(base.circuit.beta(), bias_for_operating_point(base.circuit.beta(), base.phi0),
                                        base.phi0);
  cal.bias_ref = bias_for_operating_point(base.circuit.beta(), base.phi0);

  auto run = [&](double phiA) {
    SimConfig c = base;
    c.phiA = phiA;
    c.impulse = Impulse{calibrate_impulse(c), 0.0};
    return simulate(c);
  };
  const auto lo = analyze(run(base.phiA * 0.95), base, 0.0, std::nullopt);
  const auto hi = analyze(run(base.phiA * 1.05), base, 0.0, std::nullopt);
  cal.kappa = (hi.fit.omega - lo.fit.omega) / (hi.a2_mean - lo.a2_mean);

  base.impulse = Impulse{cal.kick, 0.0};
  const auto nominal_traj = simulate(base);
  const auto nominal = analyze(nominal_traj, base, 0.0, std::nullopt);
  cal.a_ref2 = nominal.a2_mean;
  const auto compensated = analyze(nominal_traj, base, 0.0, Compensation{cal.kappa, cal.a_ref2});
  cal.omega_ref = undo_dispersion(compensated.omega_comp, base.dt);
  return cal;
}

RingdownRecord ringdown_experiment(const SimConfig& config, const RingdownCalibration& cal, std::uint64_t stream) {
  SimConfig cfg = config;
  if (!cfg.impulse) cfg.impulse = Impulse{cal.kick, 0.0};

  RingdownRecord rec;
  rec.trajectory = simulate(cfg, stream);
  const auto an = analyze(rec.trajectory, cfg, cfg.impulse->time, Compensation{cal.kappa, cal.a_ref2});
  rec.omega_hat = an.fit.omega;
  rec.se_omega = an.fit.se_omega;
  rec.lambda = an.fit.lambda;
  rec.se_lambda = an.fit.se_lambda;
  rec.omega_compensated = an.omega_comp;
  rec.amplitude2 = an.a2_mean;

  const auto& m = cfg.circuit;
  const double shift = undo_dispersion(an.omega_comp, cfg.dt) - cal.omega_ref;
  auto model_omega = [&](double phi) {
    return helmholtz_frequency(m, phi).omega_H + landau_coefficient(m, phi) * cal.a_ref2;
  };
  const double w_ref = model_omega(cal.phi0_ref);
  const double h = 1e-6;
  const double slope = (model_omega(cal.phi0_ref + h) - model_omega(cal.phi0_ref - h)) / (2.0 * h);
  double phi = cal.phi0_ref + shift / slope;
  for (int it = 0; it < 4; ++it) phi -= (model_omega(phi) - w_ref - shift) / slope;
  if (!std::isfinite(phi)) throw FitError("ringdown: frequency inversion failed");

  rec.phi0_hat = phi;
  const double bias_hat = bias_for_operating_point(m.beta(), phi);
  rec.rotation_hat = phase_to_rotation(bias_hat - cal.bias_ref, m.geometry().area, m.constants());
  return rec;
}

MonteCarloResult monte_carlo_sensitivity(const SimConfig& config, std::size_t n_trials, std::size_t threads) {
  if (n_trials < 100) throw ValidationError("monte_carlo_sensitivity: at least 100 trials are required");
  config.validate();

  MonteCarloResult res;
  res.trials = n_trials;
  res.calibration = calibrate_ringdown(config);
  res.rotation_estimates.assign(n_trials, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(n_trials);

  SimConfig trial = config;
  trial.decimation = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_trials; i = next++) {
      try {
        res.rotation_estimates[i] = ringdown_experiment(trial, res.calibration, i + 1).rotation_hat;
      } catch (const SimulationError& e) {
        errors[i] = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n_trials);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<double> ok;
  for (std::size_t i = 0; i < n_trials; ++i) {
    if (errors[i].empty()) {
      ok.push_back(res.rotation_estimates[i]);
    } else {
      res.failures.push_back("trial " + std::to_string(i) + ": " + errors[i]);
    }
  }
  res.failed = n_trials - ok.size();
  if (100 * res.failed > n_trials) {
    throw SimulationError("monte_carlo_sensitivity: " + std::to_string(res.failed) + " of " +
                          std::to_string(n_trials) + " trials aborted; first: " + res.failures.front());
  }

  res.trial_duration = config.duration - (config.impulse ? config.impulse->time : 0.0);
  const double root_t = std::sqrt(res.trial_duration);
  auto spread = [](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  res.mean_rotation = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
  res.sqrt_S_omega = spread(ok) * root_t;

  auto seq = make_seed(config.seed, 0xB0075742ULL);
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, ok.size() - 1);
  std::vector<double> boot(2000), sample(ok.size());
  for (auto& b : boot) {
    for (auto& s : sample) s = ok[pick(rng)];
    b = spread(sample) * root_t;
  }
  std::sort(boot.begin(), boot.end());
  res.ci_low = boot[static_cast<std::size_t>(0.025 * static_cast<double>(boot.size()))];
  res.ci_high = boot[static_cast<std::size_t>(0.975 * static_cast<double>(boot.size())) - 1];

  if (config.thermal_noise) {
    const auto& m = config.circuit;
    const auto report = rotation_noise_density(m, {config.phi0, config.phiA, config.temperature});
    double scale = config.noise_psd_scale;
    if (config.resistance_override) {
      scale *= *config.resistance_override / quality_factor(m, config.phi0, config.temperature).r_total.value();
    }
    res.analytic_sqrt_S_omega = report.sqrt_S_omega * std::sqrt(scale);
  }
  return res;
}

}  // namespace gyro
