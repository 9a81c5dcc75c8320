#include "gyro/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "gyro/errors.hpp"

namespace gyro {

double zero_crossing_frequency(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 3) throw FitError("zero_crossing_frequency: need matching series of >= 3 samples");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double first = NAN, last = NAN;
  std::size_t count = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double y0 = y[i - 1] - mean, y1 = y[i] - mean;
    if (y0 < 0.0 && y1 >= 0.0) {
      const double tc = t[i - 1] + (t[i] - t[i - 1]) * (-y0) / (y1 - y0);
      if (count == 0) first = tc;
      last = tc;
      ++count;
    }
  }
  if (count < 2) throw FitError("zero_crossing_frequency: fewer than two zero crossings");
  return 2.0 * std::numbers::pi * static_cast<double>(count - 1) / (last - first);
}

double DecayingSinusoid::amplitude() const { return std::hypot(a, b); }

double DecayingSinusoid::operator()(double t) const {
  return std::exp(-lambda * t) * (a * std::cos(omega * t) + b * std::sin(omega * t));
}

namespace {

// Parameters are (omega, lambda, a, b); time is shifted to the record start
// and the model scaled so the Jacobian columns are of comparable size.
struct SinusoidFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<double>& t;
  const std::vector<double>& y;
  double t0;

  int inputs() const { return 4; }
  int values() const { return static_cast<int>(t.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double s = t[i] - t0;
      r[static_cast<Eigen::Index>(i)] =
          std::exp(-p[1] * s) * (p[2] * std::cos(p[0] * s) + p[3] * std::sin(p[0] * s)) - y[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double s = t[i] - t0;
      const double e = std::exp(-p[1] * s), c = std::cos(p[0] * s), sn = std::sin(p[0] * s);
      const auto k = static_cast<Eigen::Index>(i);
      j(k, 0) = e * s * (-p[2] * sn + p[3] * c);
      j(k, 1) = -s * e * (p[2] * c + p[3] * sn);
      j(k, 2) = e * c;
      j(k, 3) = e * sn;
    }
    return 0;
  }
};

// Linear least squares for (a, b) at fixed omega, lambda = 0.
Eigen::Vector2d quadratures(const std::vector<double>& t, const std::vector<double>& y, double omega, double t0,
                            std::size_t begin, std::size_t end) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (std::size_t i = begin; i < end; ++i) {
    const double s = t[i] - t0;
    const double c = std::cos(omega * s), sn = std::sin(omega * s);
    m(0, 0) += c * c;
    m(0, 1) += c * sn;
    m(1, 1) += sn * sn;
    v[0] += c * y[i];
    v[1] += sn * y[i];
  }
  m(1, 0) = m(0, 1);
  return m.ldlt().solve(v);
}

}  // namespace

DecayingSinusoid fit_decaying_sinusoid(const std::vector<double>& t, const std::vector<double>& y, double omega_guess) {
  if (t.size() != y.size() || t.size() < 8) throw FitError("fit_decaying_sinusoid: need matching series of >= 8 samples");
  if (!(omega_guess > 0.0)) throw FitError("fit_decaying_sinusoid: omega guess must be positive");
  const double t0 = t.front();
  // Work on a unit-RMS copy so the Jacobian columns are of order one.
  const double scale = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0) / static_cast<double>(y.size()));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw FitError("fit_decaying_sinusoid: signal is identically zero or not finite");
  std::vector<double> yn(y.size());
  std::transform(y.begin(), y.end(), yn.begin(), [scale](double v) { return v / scale; });

  const Eigen::Vector2d ab = quadratures(t, yn, omega_guess, t0, 0, t.size());
  Eigen::VectorXd p(4);
  p << omega_guess, 0.0, ab[0], ab[1];

  SinusoidFunctor f{t, yn, t0};
  Eigen::LevenbergMarquardt<SinusoidFunctor> lm(f);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 400;
  const auto status = lm.minimize(p);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !p.allFinite() || !(p[0] > 0.0))
    throw FitError("fit_decaying_sinusoid: did not converge (status " + std::to_string(static_cast<int>(status)) + ")");

  Eigen::VectorXd r(f.values());
  f(p, r);
  Eigen::MatrixXd j(f.values(), 4);
  f.df(p, j);
  const double dof = static_cast<double>(t.size()) - 4.0;
  const double sigma2 = r.squaredNorm() / dof;
  const Eigen::Matrix4d jtj = j.transpose() * j;
  Eigen::LDLT<Eigen::Matrix4d> ldlt(jtj);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw FitError("fit_decaying_sinusoid: singular normal matrix");
  const Eigen::Matrix4d cov = ldlt.solve(Eigen::Matrix4d::Identity()) * sigma2;

  DecayingSinusoid out;
  out.omega = p[0];
  out.lambda = p[1];
  // Express (a, b) relative to absolute time.
  const double c0 = std::cos(p[0] * t0), s0 = std::sin(p[0] * t0), e0 = scale * std::exp(p[1] * t0);
  out.a = e0 * (p[2] * c0 - p[3] * s0);
  out.b = e0 * (p[2] * s0 + p[3] * c0);
  // A noiseless record leaves only rounding in the residual; keep the
  // reported errors strictly positive.
  const double floor_se = 1e-300;
  out.se_omega = std::max(std::sqrt(std::max(cov(0, 0), 0.0)), floor_se);
  out.se_lambda = std::max(std::sqrt(std::max(cov(1, 1), 0.0)), floor_se);
  out.residual_rms = scale * std::sqrt(r.squaredNorm() / static_cast<double>(t.size()));
  out.iterations = static_cast<std::size_t>(lm.iter);
  return out;
}

std::vector<DemodBlock> demodulate(const std::vector<double>& t, const std::vector<double>& y, double carrier,
                                   std::size_t block_len) {
  if (t.size() != y.size()) throw FitError("demodulate: series length mismatch");
  if (block_len < 4) throw FitError("demodulate: block length must be >= 4 samples");
  const std::size_t n_blocks = t.size() / block_len;
  if (n_blocks < 2) throw FitError("demodulate: record shorter than two blocks");

  std::vector<DemodBlock> out;
  out.reserve(n_blocks);
  for (std::size_t k = 0; k < n_blocks; ++k) {
    const std::size_t begin = k * block_len, end = begin + block_len;
    const Eigen::Vector2d ab = quadratures(t, y, carrier, 0.0, begin, end);
    DemodBlock b;
    b.t_mid = 0.5 * (t[begin] + t[end - 1]);
    b.amplitude = ab.norm();
    b.phase = std::atan2(-ab[1], ab[0]);
    if (!out.empty()) {
      const double prev = out.back().phase;
      b.phase += 2.0 * std::numbers::pi * std::round((prev - b.phase) / (2.0 * std::numbers::pi));
    }
    out.push_back(b);
  }
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw FitError("linear_fit: need matching series of >= 3 points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("linear_fit: abscissa has zero spread");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.se_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace gyro
