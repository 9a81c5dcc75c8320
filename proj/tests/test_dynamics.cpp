#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gyro/dynamics.hpp"
#include "gyro/errors.hpp"
#include "gyro/fit.hpp"
#include "gyro/noise.hpp"
#include "support.hpp"

using namespace gyro;

namespace {

constexpr double kPi = std::numbers::pi;

SimConfig quiet_config(double qd = 1e4) {
  SimConfig c{test::baseline_model(qd)};
  c.thermal_noise = false;
  return c;
}

double period(const SimConfig& c) { return 2 * kPi / helmholtz_frequency(c.circuit, c.phi0).omega_H; }

// Fitted angular frequency of a run, with the leapfrog dispersion removed.
double measured_omega(const SimConfig& c) {
  const auto tr = simulate(c);
  const auto f = fit_decaying_sinusoid(tr.t, tr.x, zero_crossing_frequency(tr.t, tr.x));
  return 2.0 / c.dt * std::sin(0.5 * f.omega * c.dt);
}

double hann_mean(const std::vector<double>& v, std::size_t begin, std::size_t len) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2 * kPi * (i + 0.5) / len);
    num += w * v[begin + i];
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("static root: trivial bias and round trip") {
    CHECK(static_operating_point(0.8, 0.0) == 0.0);
    const double bias = bias_for_operating_point(0.8, 2.3);
    CHECK(bias == doctest::Approx(-2.90).epsilon(0.002));
    CHECK(std::abs(static_operating_point(0.8, bias, 2.0) - 2.3) < 1e-12);
  }

  TEST_CASE("static root residual over random biases") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> beta_d(1e-6, 1.0 - 1e-6), bias_d(-10.0, 10.0), hint_d(-12.0, 12.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const double beta = beta_d(rng), bias = bias_d(rng);
      const double phi = static_operating_point(beta, bias, hint_d(rng));
      worst = std::max(worst, std::abs(phi + beta * std::sin(phi) + bias));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("static root responds to bias with slope -1/(1 + beta cos phi0)") {
    const double beta = 0.8, phi0 = 2.3, h = 1e-5;
    const double bias = bias_for_operating_point(beta, phi0);
    const double fd = (static_operating_point(beta, bias + h, phi0) - static_operating_point(beta, bias - h, phi0)) / (2 * h);
    CHECK(fd == doctest::Approx(-1.0 / (1.0 + beta * std::cos(phi0))).epsilon(1e-6));
  }

  TEST_CASE("beta >= 1 raises a multiple-root warning") {
    std::vector<std::string> w;
    const double phi = static_operating_point(1.5, bias_for_operating_point(1.5, 0.5), 0.5, &w);
    CHECK(phi == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.size() == 1);
  }

  TEST_CASE("config validation") {
    auto c = quiet_config();
    c.dt = period(c) / 150;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = quiet_config();
    c.duration = 10 * period(c);
    CHECK_THROWS_AS(c.validate(), ValidationError);
    auto g = GyrometerGeometry::baseline();
    g.critical_current *= 2;
    SimConfig unstable{CircuitModel(g, test::constants())};
    CHECK_THROWS_AS(unstable.validate(), StabilityError);
  }

  TEST_CASE("energy is conserved without dissipation") {
    auto c = quiet_config();
    c.resistance_override = 0.0;
    c.dt = period(c) / 400;
    c.impulse = Impulse{calibrate_impulse(c), 0.0};
    Simulator sim(c);
    SimState s = sim.state();
    s.phi_J += c.impulse->phase_kick;
    sim.set_state(s);
    const auto steps = static_cast<std::size_t>(1000 * period(c) / c.dt);
    std::vector<double> e;
    e.reserve(steps + 1);
    std::vector<double> q;
    q.reserve(steps + 1);
    e.push_back(sim.energy());
    q.push_back(sim.state().Q);
    for (std::size_t n = 0; n < steps; ++n) {
      sim.step();
      e.push_back(sim.energy());
      q.push_back(sim.state().Q);
    }
    // Window over a whole number of measured oscillation periods.
    std::vector<double> tq(q.size());
    for (std::size_t i = 0; i < tq.size(); ++i) tq[i] = i * c.dt;
    const double t_osc = 2 * kPi / zero_crossing_frequency(tq, q);
    const auto len = static_cast<std::size_t>(std::round(20 * t_osc / c.dt));
    const double e0 = hann_mean(e, 0, len), e1 = hann_mean(e, e.size() - len, len);
    CHECK(std::abs(e1 / e0 - 1.0) < 1e-8);
  }

  TEST_CASE("linearized frequency equals the Helmholtz frequency") {
    for (double phi0 : {0.0, 1.0, 2.3}) {
      CAPTURE(phi0);
      auto c = quiet_config();
      c.phi0 = phi0;
      c.phiA = 1e-3;
      c.resistance_override = 0.0;
      c.dt = period(c) / 400;
      c.duration = 60 * period(c);
      c.impulse = Impulse{calibrate_impulse(c), 0.0};
      CHECK(test::rel_err(measured_omega(c), helmholtz_frequency(c.circuit, phi0).omega_H) < 1e-3);
    }
  }

  TEST_CASE("impulse reaches the requested excursion") {
    auto c = quiet_config();
    c.resistance_override = 0.0;
    c.dt = period(c) / 2000;
    c.duration = 25 * period(c);
    c.impulse = Impulse{calibrate_impulse(c), 0.0};
    const auto tr = simulate(c);
    double worst = 0;
    for (double p : tr.phi_J) worst = std::max(worst, std::abs(p - c.phi0));
    CHECK(worst == doctest::Approx(0.2).epsilon(1e-4));
  }

  TEST_CASE("envelope decays at omega_H / 2 Q_H") {
    auto c = quiet_config(30.0);
    c.phiA = 0.01;
    const auto q = quality_factor(c.circuit, c.phi0, c.temperature);
    c.duration = 4 * q.Q_H / q.resonance.omega_H;
    c.impulse = Impulse{calibrate_impulse(c), 0.0};
    const auto tr = simulate(c);
    const auto f = fit_decaying_sinusoid(tr.t, tr.x, zero_crossing_frequency(tr.t, tr.x));
    CHECK(f.lambda == doctest::Approx(q.resonance.omega_H / (2 * q.Q_H)).epsilon(0.05));
  }

  TEST_CASE("no dissipation gives zero decay within the fit error") {
    auto c = quiet_config();
    c.resistance_override = 0.0;
    c.phiA = 0.01;
    c.duration = 2.0;
    c.impulse = Impulse{calibrate_impulse(c), 0.0};
    const auto tr = simulate(c);
    const auto f = fit_decaying_sinusoid(tr.t, tr.x, zero_crossing_frequency(tr.t, tr.x));
    CHECK(std::abs(f.lambda) <= 3 * f.se_lambda + 1e-9);
  }

  TEST_CASE("equipartition of the capacitor energy") {
    auto c = quiet_config();
    c.thermal_noise = true;
    c.noise_psd_scale = 1e3;
    const auto hf = helmholtz_frequency(c.circuit, c.phi0);
    c.resistance_override = hf.omega_H * hf.effective_inductance.value() / 20.0;  // Q_H = 20
    c.duration = 400.0;
    Simulator sim(c, 3);
    const double cap = c.circuit.capacitance().value();
    const auto steps = static_cast<std::size_t>(c.duration / c.dt);
    const auto skip = static_cast<std::size_t>(1.0 / c.dt);
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < steps; ++i) {
      sim.step();
      if (i >= skip) {
        sum += sim.state().Q * sim.state().Q / (2 * cap);
        ++n;
      }
    }
    const double kt = test::constants().universal.k_B * c.temperature * c.noise_psd_scale;
    CHECK(sum / n / (0.5 * kt) == doctest::Approx(1.0).epsilon(0.10));
  }

  TEST_CASE("seeded runs are bit-identical") {
    auto c = quiet_config();
    c.thermal_noise = true;
    c.noise_psd_scale = 1e6;
    c.duration = 0.5;
    c.impulse = Impulse{0.1, 0.0};
    const auto a = simulate(c), b = simulate(c);
    CHECK(a.x == b.x);
    CHECK(a.phi_J == b.phi_J);
    c.seed = 2;
    CHECK(simulate(c).x != a.x);
    CHECK(simulate(c, 1).x != simulate(c, 2).x);
  }

  TEST_CASE("blow-up detector aborts with diagnostics") {
    auto c = quiet_config();
    c.thermal_noise = true;
    c.noise_psd_scale = 1e40;
    c.duration = 0.3;
    try {
      simulate(c);
      FAIL("expected an abort");
    } catch (const SimulationError& e) {
      CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
    }
  }

  TEST_CASE("trajectory CSV") {
    auto c = quiet_config();
    c.duration = 0.3;
    c.decimation = 10;
    c.impulse = Impulse{0.1, 0.0};
    const auto tr = simulate(c);
    std::ostringstream out;
    write_trajectory_csv(out, tr);
    const auto text = out.str();
    CHECK(text.rfind("t_s,x_m,phi_J_rad\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(tr.t.size() + 1));
  }

  TEST_CASE("ringdown: zero rotation, injection recovery and sign") {
    const auto c = quiet_config();
    const auto cal = calibrate_ringdown(c);
    const auto r0 = ringdown_experiment(c, cal);
    CHECK(r0.omega_hat > 0.0);
    CHECK(r0.se_omega > 0.0);
    CHECK(r0.se_lambda > 0.0);
    const double injected = phase_to_rotation(1e-6, c.circuit.geometry().area, c.circuit.constants());
    CHECK(std::abs(r0.rotation_hat) < 1e-3 * std::abs(injected));

    auto ci = c;
    ci.rotation_phase = 1e-6;
    const auto r1 = ringdown_experiment(ci, cal);
    CHECK(r1.rotation_hat == doctest::Approx(injected).epsilon(0.01));

    // d omega / d bias = (d omega_H / d phi0) * (-1 / (1 + beta cos phi0))
    const double h = 1e-6, beta = c.circuit.beta();
    const double dw = (helmholtz_frequency(c.circuit, c.phi0 + h).omega_H - helmholtz_frequency(c.circuit, c.phi0 - h).omega_H) / (2 * h);
    const double predicted = dw * (-1.0 / (1.0 + beta * std::cos(c.phi0)));
    CHECK((r1.omega_hat - r0.omega_hat) * predicted > 0.0);
  }

  TEST_CASE("rotation and phase conversions are inverse") {
    const auto& pc = test::constants();
    CHECK(phase_to_rotation(rotation_to_phase(3e-14, 0.03, pc), 0.03, pc) == doctest::Approx(3e-14).epsilon(1e-15));
    CHECK(rotation_to_phase(1.0, 0.03, pc) < 0.0);
  }

  TEST_CASE("Monte Carlo: argument checks, determinism and abort accounting") {
    auto c = quiet_config();
    c.thermal_noise = true;
    c.noise_psd_scale = 1e6;
    c.duration = 0.5;
    CHECK_THROWS_AS(monte_carlo_sensitivity(c, 99), ValidationError);
    const auto a = monte_carlo_sensitivity(c, 100, 1);
    const auto b = monte_carlo_sensitivity(c, 100, 3);
    CHECK(a.sqrt_S_omega == b.sqrt_S_omega);
    CHECK(a.rotation_estimates == b.rotation_estimates);
    CHECK(a.ci_low < a.sqrt_S_omega);
    CHECK(a.ci_high > a.sqrt_S_omega);
    CHECK(a.failed == 0);

    c.noise_psd_scale = 1e40;
    CHECK_THROWS_AS(monte_carlo_sensitivity(c, 100), SimulationError);
  }

  TEST_CASE("Monte Carlo density is linear in noise amplitude and independent of trial length") {
    auto c = quiet_config();
    c.thermal_noise = true;
    c.noise_psd_scale = 1e6;
    c.duration = 5.0;
    const auto base = monte_carlo_sensitivity(c, 100);
    auto louder = c;
    louder.noise_psd_scale = 4e6;
    const auto loud = monte_carlo_sensitivity(louder, 100);
    auto longer = c;
    longer.duration = 10.0;
    const auto slow = monte_carlo_sensitivity(longer, 100);

    auto overlap = [](double lo1, double hi1, double lo2, double hi2) { return lo1 <= hi2 && lo2 <= hi1; };
    CHECK(overlap(base.ci_low, base.ci_high, loud.ci_low / 2, loud.ci_high / 2));
    CHECK(overlap(base.ci_low, base.ci_high, slow.ci_low, slow.ci_high));
    CHECK(base.sqrt_S_omega / base.analytic_sqrt_S_omega == doctest::Approx(1.0).epsilon(0.5));
  }
}
