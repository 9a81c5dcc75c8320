#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gyro/errors.hpp"
#include "gyro/fit.hpp"

using namespace gyro;

namespace {

struct Series {
  std::vector<double> t, y;
};

Series make(double omega, double lambda, double a, double b, double sigma, std::uint64_t seed, int n = 4000,
            double dt = 1e-3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Series s;
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    s.t.push_back(t);
    s.y.push_back(std::exp(-lambda * t) * (a * std::cos(omega * t) + b * std::sin(omega * t)) + (sigma > 0 ? noise(rng) : 0.0));
  }
  return s;
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("zero crossings give the carrier") {
    const auto s = make(2 * std::numbers::pi * 7.3, 0.0, 1.0, 0.3, 0.0, 1);
    CHECK(zero_crossing_frequency(s.t, s.y) == doctest::Approx(2 * std::numbers::pi * 7.3).epsilon(1e-4));
    const auto flat = make(1.0, 0.0, 0.0, 0.0, 0.0, 1, 100);
    CHECK_THROWS_AS(zero_crossing_frequency(flat.t, flat.y), FitError);
  }

  TEST_CASE("noiseless decaying sinusoid is recovered exactly") {
    const auto s = make(61.0, 0.4, 1.3e-9, -0.7e-9, 0.0, 1);
    const auto f = fit_decaying_sinusoid(s.t, s.y, 60.0);
    CHECK(f.omega == doctest::Approx(61.0).epsilon(1e-12));
    CHECK(f.lambda == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(f.a == doctest::Approx(1.3e-9).epsilon(1e-10));
    CHECK(f.b == doctest::Approx(-0.7e-9).epsilon(1e-10));
    CHECK(f.se_omega > 0.0);
    CHECK(f(1.234) == doctest::Approx(s.y[1234]).epsilon(1e-9));
  }

  TEST_CASE("standard error of the frequency is honest") {
    std::vector<double> omegas;
    double se_mean = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
      const auto s = make(40.0, 0.1, 1.0, 0.0, 0.2, 100 + k);
      const auto f = fit_decaying_sinusoid(s.t, s.y, 40.05);
      omegas.push_back(f.omega);
      se_mean += f.se_omega / 200.0;
    }
    double m = 0, v = 0;
    for (double w : omegas) m += w / omegas.size();
    for (double w : omegas) v += (w - m) * (w - m) / (omegas.size() - 1);
    CHECK(std::sqrt(v) / se_mean == doctest::Approx(1.0).epsilon(0.15));
    CHECK(m == doctest::Approx(40.0).epsilon(1e-4));
  }

  TEST_CASE("demodulation tracks a frequency offset as a phase ramp") {
    const auto s = make(50.0, 0.0, 2.0, 0.0, 0.0, 1, 20000);
    const auto blocks = demodulate(s.t, s.y, 50.0 - 0.01, 500);
    REQUIRE(blocks.size() == 40);
    std::vector<double> t, ph;
    for (const auto& b : blocks) {
      CHECK(b.amplitude == doctest::Approx(2.0).epsilon(1e-3));
      t.push_back(b.t_mid);
      ph.push_back(b.phase);
    }
    CHECK(linear_fit(t, ph).slope == doctest::Approx(0.01).epsilon(1e-3));
    CHECK_THROWS_AS(demodulate(s.t, s.y, 50.0, 15000), FitError);
  }

  TEST_CASE("linear regression") {
    const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
    const auto f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.se_slope == doctest::Approx(0.0));
    CHECK_THROWS_AS(linear_fit({1, 1, 1}, {1, 2, 3}), FitError);
  }
}
