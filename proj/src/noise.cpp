#include "gyro/noise.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

double epsilon(double phi0, double beta) {
  const double margin = std::cos(phi0) + 1.0 / beta;
  if (!(margin > 0.0)) throw StabilityError("epsilon: cos(phi0) + 1/beta <= 0");
  const double s = std::sin(phi0);
  if (std::abs(s) < 1e-12) throw StabilityError("epsilon: sin(phi0) vanishes, no first-order phase sensitivity");
  return beta * std::pow(margin, 1.25) / s;
}

double NoiseReport::measurement_time(double signal, double target_rel_err) const {
  return gyro::measurement_time(sqrt_S_omega, signal, target_rel_err);
}

double measurement_time(double sqrt_S_omega, double signal, double target_rel_err) {
  if (!(signal > 0.0) || !(target_rel_err > 0.0))
    throw ValidationError("measurement_time: signal and target_rel_err must be positive");
  const double r = sqrt_S_omega / (signal * target_rel_err);
  return r * r;
}

NoiseReport rotation_noise_density(const CircuitModel& model, const OperatingPoint& op, bool include_fluid_losses) {
  op.validate(model.beta());
  const auto q = quality_factor(model, op.phi0, op.temperature, include_fluid_losses);
  const auto& pc = model.constants();

  NoiseReport r;
  r.epsilon = epsilon(op.phi0, model.beta());
  r.Q_H = q.Q_H;
  r.omega_H = q.resonance.omega_H;
  r.omega_oo = q.resonance.omega_oo;
  r.temperature = op.temperature;
  const double area = model.geometry().area;
  r.sqrt_S_omega = std::sqrt(pc.universal.k_B * op.temperature / r.Q_H * model.junction_inductance0().value() /
                             r.omega_oo) *
                   r.epsilon / (op.phiA * area);
  r.sqrt_S_tau = 2.0 * area / (pc.universal.c * pc.universal.c) * r.sqrt_S_omega;
  return r;
}

double position_resolution_required(const CircuitModel& model, double phi0, double temperature) {
  const auto q = quality_factor(model, phi0, temperature);
  const auto& pc = model.constants();
  const double current_density = std::sqrt(4.0 * pc.universal.k_B * temperature / q.r_total.value());
  return current_density / (q.resonance.omega_H * pc.helium.rho * model.geometry().diaphragm_area);
}

void SweepSpec::validate() const {
  auto check = [](const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ValidationError(std::string("sweep: ") + name + " is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0) || !std::isfinite(v[i]))
        throw ValidationError(std::string("sweep: ") + name + " entries must be finite and positive");
      if (i > 0 && !(v[i] > v[i - 1]))
        throw ValidationError(std::string("sweep: ") + name + " must be strictly increasing");
    }
  };
  check(temperatures, "temperatures");
  check(diaphragm_qs, "diaphragm quality factors");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::diaphragm: return "diaphragm";
    case Regime::fluid: return "fluid";
    case Regime::error: return "error";
  }
  return "error";
}

Regime regime_from_string(const std::string& s) {
  if (s == "diaphragm") return Regime::diaphragm;
  if (s == "fluid") return Regime::fluid;
  if (s == "error") return Regime::error;
  throw ValidationError("unknown regime '" + s + "'");
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const GyrometerGeometry& geometry,
                            const PhysicalConstants& constants, const OperatingPoint& op) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.temperatures.size() * spec.diaphragm_qs.size());
  for (double qd : spec.diaphragm_qs) {
    GyrometerGeometry g = geometry;
    g.diaphragm_q = qd;
    const CircuitModel model(g, constants);
    for (double t : spec.temperatures) {
      SweepRow row;
      row.temperature = t;
      row.diaphragm_q = qd;
      try {
        OperatingPoint p = op;
        p.temperature = t;
        const auto report = rotation_noise_density(model, p, spec.include_fluid_losses);
        const auto q = quality_factor(model, p.phi0, t, spec.include_fluid_losses);
        row.sqrt_S_omega = report.sqrt_S_omega;
        row.sqrt_S_tau = report.sqrt_S_tau;
        row.Q_H = report.Q_H;
        row.regime = q.r_fluid > q.r_diaphragm ? Regime::fluid : Regime::diaphragm;
      } catch (const DomainError& e) {
        row.regime = Regime::error;
        row.errata = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

// Errata text is free-form; keep the CSV single-line and comma-free.
std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("sweep csv: bad number '" + s + "'");
  }
  if (pos != s.size()) throw ValidationError("sweep csv: bad number '" + s + "'");
  return v;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& r : rows) {
    line.str({});
    line << r.temperature << ',' << r.diaphragm_q << ',';
    auto num = [&](double v) {
      if (std::isnan(v))
        line << "nan";
      else
        line << v;
    };
    num(r.sqrt_S_omega);
    line << ',';
    num(r.sqrt_S_tau);
    line << ',';
    num(r.Q_H);
    line << ',' << to_string(r.regime) << ',' << sanitize(r.errata);
    out << line.str() << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw ValidationError("sweep csv: missing or unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) throw ValidationError("sweep csv: expected 7 columns in '" + line + "'");
    SweepRow r;
    r.temperature = parse_double(cells[0]);
    r.diaphragm_q = parse_double(cells[1]);
    r.sqrt_S_omega = parse_double(cells[2]);
    r.sqrt_S_tau = parse_double(cells[3]);
    r.Q_H = parse_double(cells[4]);
    r.regime = regime_from_string(cells[5]);
    r.errata = cells[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gyro
