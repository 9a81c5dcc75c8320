#pragma once

#include <cstddef>
#include <vector>

namespace gyro {

// Mean frequency (rad/s) from upward zero crossings of the mean-removed
// signal, with linear interpolation between samples. Throws FitError when
// fewer than two crossings are found.
double zero_crossing_frequency(const std::vector<double>& t, const std::vector<double>& y);

// y(t) = exp(-lambda t) (a cos(omega t) + b sin(omega t))
struct DecayingSinusoid {
  double omega = 0;
  double lambda = 0;
  double a = 0;
  double b = 0;

  double se_omega = 0;
  double se_lambda = 0;
  double residual_rms = 0;
  std::size_t iterations = 0;

  double amplitude() const;
  double operator()(double t) const;
};

// Levenberg-Marquardt fit started from omega_guess. Standard errors come
// from the Jacobian at the optimum scaled by the residual variance.
// Throws FitError on non-convergence or a degenerate Jacobian.
DecayingSinusoid fit_decaying_sinusoid(const std::vector<double>& t, const std::vector<double>& y, double omega_guess);

// Complex amplitude of consecutive blocks against a fixed carrier:
// y ~ amplitude cos(carrier t + phase) within each block.
struct DemodBlock {
  double t_mid = 0;
  double amplitude = 0;
  double phase = 0;  // unwrapped across blocks
};

std::vector<DemodBlock> demodulate(const std::vector<double>& t, const std::vector<double>& y, double carrier,
                                   std::size_t block_len);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double se_slope = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gyro
