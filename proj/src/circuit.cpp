#include "gyro/circuit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {
constexpr double kPi = std::numbers::pi;
}

GyrometerGeometry GyrometerGeometry::baseline() {
  GyrometerGeometry g;
  g.area = 3e-2;
  g.line_length = 2.0 * kPi * 0.1;
  g.line_cross_section = 3e-4;
  g.diaphragm_area = 2e-4;
  g.spring_constant = 1e4;
  g.diaphragm_omega = 2.0 * kPi * 3000.0;
  g.diaphragm_q = 1e5;
  g.critical_current = 9.2e-10;
  return g;
}

void GyrometerGeometry::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"area", area},
      {"line_length", line_length},
      {"line_cross_section", line_cross_section},
      {"diaphragm_area", diaphragm_area},
      {"spring_constant", spring_constant},
      {"diaphragm_omega", diaphragm_omega},
      {"diaphragm_q", diaphragm_q},
      {"critical_current", critical_current},
  };
  for (const auto& [name, v] : fields)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(std::string("geometry: ") + name + " must be finite and positive");
}

void OperatingPoint::validate(double beta) const {
  if (!std::isfinite(phi0)) throw ValidationError("operating point: phi0 must be finite");
  if (!(phiA > 0.0) || !(phiA < kPi / 2.0)) throw ValidationError("operating point: phiA must lie in (0, pi/2)");
  if (!(temperature >= 0.0)) throw ValidationError("operating point: temperature must be >= 0");
  if (!(std::cos(phi0) + 1.0 / beta > 0.0)) {
    std::ostringstream msg;
    msg << "operating point: cos(phi0) + 1/beta = " << std::cos(phi0) + 1.0 / beta << " <= 0 (unstable)";
    throw StabilityError(msg.str());
  }
}

CircuitModel::CircuitModel(const GyrometerGeometry& geometry, const PhysicalConstants& constants)
    : geometry_(geometry), constants_(constants) {
  geometry_.validate();
  const double rho = constants_.helium.rho;
  loop_inductance_ = HydroInductance(geometry_.line_length / (rho * geometry_.line_cross_section));
  junction_inductance0_ = josephson_inductance(0.0, geometry_.critical_current, constants_);
  const double ad_rho = geometry_.diaphragm_area * rho;
  capacitance_ = HydroCapacitance(ad_rho * ad_rho / geometry_.spring_constant);
  diaphragm_resistance_ = gyro::diaphragm_resistance(geometry_, constants_);

  if (!(beta() < 1.0)) {
    std::ostringstream msg;
    msg << "beta = L_l/L_J(0) = " << beta() << " >= 1: junction response is hysteretic";
    warnings_.push_back(msg.str());
  }
}

HydroInductance josephson_inductance(double phi, double critical_current, const PhysicalConstants& pc) {
  const double c = std::cos(phi);
  if (std::abs(c) < 1e-12) {
    std::ostringstream msg;
    msg << "josephson_inductance: cos(" << phi << ") vanishes, inductance is singular";
    throw StabilityError(msg.str());
  }
  return HydroInductance(pc.helium.kappa4 / (2.0 * kPi * critical_current * c));
}

HydroResistance loop_resistance(double temperature, const CircuitModel& model, double omega) {
  const auto& pc = model.constants();
  pc.check_temperature(temperature);
  const auto& he = pc.helium;
  const auto& g = model.geometry();
  const double z0 = std::sqrt(1.0 / (he.rho * he.rho * he.rho * g.line_cross_section * g.line_cross_section * he.beta_c));
  const double kt = pc.universal.k_B * temperature;
  const double attenuation = kPi * kPi * kPi / 60.0 * (he.gruneisen + 1.0) * (he.gruneisen + 1.0) /
                             (he.rho * std::pow(pc.universal.hbar, 3) * std::pow(he.c4, 6)) * kt * kt * kt * kt;
  return HydroResistance(z0 * attenuation * g.line_length * omega);
}

HydroResistance loop_resistance_at_resonance(double temperature, const CircuitModel& model, double phi0) {
  return loop_resistance(temperature, model, helmholtz_frequency(model, phi0).omega_H);
}

HydroResistance junction_resistance(double temperature, const CircuitModel& model) {
  const auto& he = model.constants().helium;
  const auto& g = model.geometry();
  const double s = he.entropy_density(temperature);
  const double al = g.line_cross_section;
  return HydroResistance(std::sqrt(kPi / (al * al * al)) * g.line_length * s * temperature /
                         (2.0 * he.rho * he.rho * he.c4));
}

HydroResistance diaphragm_resistance(const GyrometerGeometry& g, const PhysicalConstants& pc) {
  if (!(g.diaphragm_q > 0.0)) throw ValidationError("diaphragm_resistance: Q_d must be positive");
  const double ad_rho = g.diaphragm_area * pc.helium.rho;
  const double cd = ad_rho * ad_rho / g.spring_constant;
  return HydroResistance(1.0 / (cd * g.diaphragm_omega * g.diaphragm_q));
}

HelmholtzFrequency helmholtz_frequency(const CircuitModel& model, double phi0) {
  HelmholtzFrequency out;
  out.junction_inductance = josephson_inductance(phi0, model.geometry().critical_current, model.constants());
  const double inv = 1.0 / out.junction_inductance.value() + 1.0 / model.loop_inductance().value();
  if (!(inv > 0.0)) {
    std::ostringstream msg;
    msg << "helmholtz_frequency: effective inductance L_J(" << phi0 << ") || L_l is not positive "
        << "(cos(phi0) + 1/beta = " << std::cos(phi0) + 1.0 / model.beta() << ")";
    throw StabilityError(msg.str());
  }
  out.effective_inductance = HydroInductance(1.0 / inv);
  const double c = model.capacitance().value();
  out.omega_H = 1.0 / std::sqrt(out.effective_inductance.value() * c);
  out.omega_oo = 1.0 / std::sqrt(model.junction_inductance0().value() * c);
  return out;
}

QualityFactor quality_factor(const CircuitModel& model, double phi0, double temperature, bool include_fluid_losses) {
  QualityFactor q;
  q.resonance = helmholtz_frequency(model, phi0);
  const double w = q.resonance.omega_H;

  q.r_diaphragm = model.diaphragm_resistance();
  if (include_fluid_losses) {
    q.r_loop = loop_resistance(temperature, model, w);
    q.r_junction = junction_resistance(temperature, model);
  } else {
    model.constants().check_temperature(temperature);
  }

  using cd = std::complex<double>;
  q.z_junction = cd(q.r_junction.value(), w * q.resonance.junction_inductance.value());
  q.z_loop = cd(q.r_loop.value(), w * model.loop_inductance().value());
  q.z_parallel = q.z_junction * q.z_loop / (q.z_junction + q.z_loop);
  q.r_fluid = HydroResistance(q.z_parallel.real());
  q.r_total = q.r_diaphragm + q.r_fluid;
  q.Q_H = w * q.resonance.effective_inductance.value() / q.r_total.value();
  return q;
}

SeriesRlc series_rlc(const CircuitModel& model, double phi0, double temperature, bool include_fluid_losses) {
  const auto q = quality_factor(model, phi0, temperature, include_fluid_losses);
  return {q.resonance.effective_inductance, q.r_total, model.capacitance(), q.resonance.omega_H, q.Q_H};
}

double parallel_resistance_small_r(double r_junction, double x_junction, double r_loop, double x_loop) {
  const double xs = x_junction + x_loop, rs = r_junction + r_loop;
  return (r_junction * x_loop * x_loop + r_loop * x_junction * x_junction) / (xs * xs + rs * rs);
}

std::vector<std::pair<std::string, double>> lumped_report(const CircuitModel& model, const OperatingPoint& op) {
  const auto q = quality_factor(model, op.phi0, op.temperature);
  return {
      {"L_l", model.loop_inductance().value()},
      {"L_J0", model.junction_inductance0().value()},
      {"L_J_phi0", q.resonance.junction_inductance.value()},
      {"L_eff", q.resonance.effective_inductance.value()},
      {"C_d", model.capacitance().value()},
      {"beta", model.beta()},
      {"omega_H_rad_per_s", q.resonance.omega_H},
      {"f_H_Hz", q.resonance.omega_H / (2.0 * kPi)},
      {"omega_oo_rad_per_s", q.resonance.omega_oo},
      {"R_l", q.r_loop.value()},
      {"R_J", q.r_junction.value()},
      {"R_d", q.r_diaphragm.value()},
      {"R_fluid", q.r_fluid.value()},
      {"R_total", q.r_total.value()},
      {"Q_H", q.Q_H},
  };
}

}  // namespace gyro
