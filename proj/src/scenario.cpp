#include "gyro/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gyro/errors.hpp"

namespace gyro {

using json = nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reads keys from one JSON object and remembers which were consumed so that
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) throw ValidationError(where() + ": missing required key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(where(key) + ": must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t count(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ValidationError(where(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) { return has(key) ? count(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ValidationError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) throw ValidationError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) throw ValidationError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError(where(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Reader object(const std::string& key) {
    raw(key);
    return Reader(j_.at(key), where(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ValidationError(where(key) + ": unknown key");
    }
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_;
    return path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                          e.what() + ")");
  }
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string("cannot open ") + what + " '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GyrometerGeometry GeometryBlock::to_geometry() const {
  GyrometerGeometry g;
  g.area = area_m2;
  g.line_length = line_length_m;
  g.line_cross_section = line_cross_section_m2;
  g.diaphragm_area = diaphragm_area_m2;
  g.spring_constant = spring_constant_N_per_m;
  g.diaphragm_omega = kTwoPi * diaphragm_resonance_Hz;
  g.diaphragm_q = diaphragm_quality_factor;
  g.critical_current = critical_current_kg_per_s;
  return g;
}

GeometryBlock GeometryBlock::from_geometry(const GyrometerGeometry& g) {
  return {g.area, g.line_length, g.line_cross_section, g.diaphragm_area, g.spring_constant, g.diaphragm_omega / kTwoPi,
          g.diaphragm_q, g.critical_current};
}

std::vector<double> SweepBlock::temperatures() const {
  if (!grid) return temperatures_K;
  std::vector<double> out(grid->points);
  const double a = std::log(grid->min_K), b = std::log(grid->max_K);
  for (std::size_t i = 0; i < grid->points; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(grid->points - 1));
  }
  out.front() = grid->min_K;
  out.back() = grid->max_K;
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const json root = parse_text(text, origin);
  try {
    Reader r(root, origin);
    Scenario s;
    if (r.has("constants_ref")) s.constants_ref = r.string("constants_ref");

    {
      auto g = r.object("geometry");
      auto& b = s.geometry;
      b.area_m2 = g.number("area_m2");
      b.line_length_m = g.number("line_length_m");
      b.line_cross_section_m2 = g.number("line_cross_section_m2");
      b.diaphragm_area_m2 = g.number("diaphragm_area_m2");
      b.spring_constant_N_per_m = g.number("spring_constant_N_per_m");
      b.diaphragm_resonance_Hz = g.number("diaphragm_resonance_Hz");
      b.diaphragm_quality_factor = g.number("diaphragm_quality_factor");
      b.critical_current_kg_per_s = g.number("critical_current_kg_per_s");
      g.finish();
    }
    {
      auto o = r.object("orientation");
      s.orientation = {o.number("theta_deg"), o.number("chi_deg"), o.number("psi_deg")};
      o.finish();
    }
    if (r.has("ppn")) {
      auto p = r.object("ppn");
      s.ppn.gamma = p.number("gamma", 1.0);
      s.ppn.alpha1 = p.number("alpha1", 0.0);
      p.finish();
    }
    {
      auto o = r.object("operating");
      s.operating = {o.number("phi0_rad"), o.number("phiA_rad"), o.number("temperature_K")};
      o.finish();
    }
    if (r.has("sweep")) {
      auto w = r.object("sweep");
      SweepBlock sw;
      if (w.has("temperatures_K") == w.has("temperature_grid_K"))
        throw ValidationError(w.where() + ": give exactly one of 'temperatures_K' or 'temperature_grid_K'");
      if (w.has("temperatures_K")) {
        sw.temperatures_K = w.numbers("temperatures_K");
      } else {
        auto gr = w.object("temperature_grid_K");
        TemperatureGrid grid{gr.number("min"), gr.number("max"), gr.count("points")};
        gr.finish();
        if (!(grid.min_K > 0.0) || !(grid.max_K > grid.min_K) || grid.points < 2)
          throw ValidationError(gr.where() + ": need 0 < min < max and points >= 2");
        sw.grid = grid;
      }
      sw.diaphragm_quality_factors = w.numbers("diaphragm_quality_factors");
      w.finish();
      s.sweep = sw;
    }
    if (r.has("sim")) {
      auto m = r.object("sim");
      SimBlock b;
      b.dt_s = m.number("dt_s");
      b.duration_s = m.number("duration_s");
      b.seed = m.count("seed", b.seed);
      b.trials = m.count("trials", b.trials);
      b.noise_psd_scale = m.number("noise_psd_scale", b.noise_psd_scale);
      b.rotation_rad_per_s = m.number("rotation_rad_per_s", b.rotation_rad_per_s);
      b.trajectory_decimation = m.count("trajectory_decimation", b.trajectory_decimation);
      b.thermal_noise = m.boolean("thermal_noise", b.thermal_noise);
      m.finish();
      s.sim = b;
    }
    if (r.has("output")) {
      auto o = r.object("output");
      if (o.has("directory")) s.output.directory = o.string("directory");
      s.output.write_trajectory = o.boolean("write_trajectory", s.output.write_trajectory);
      o.finish();
    }
    r.finish();
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path, "scenario"), path.string()); }

std::string to_json(const Scenario& s) {
  json j;
  if (s.constants_ref) j["constants_ref"] = *s.constants_ref;
  const auto& g = s.geometry;
  j["geometry"] = {{"area_m2", g.area_m2},
                   {"line_length_m", g.line_length_m},
                   {"line_cross_section_m2", g.line_cross_section_m2},
                   {"diaphragm_area_m2", g.diaphragm_area_m2},
                   {"spring_constant_N_per_m", g.spring_constant_N_per_m},
                   {"diaphragm_resonance_Hz", g.diaphragm_resonance_Hz},
                   {"diaphragm_quality_factor", g.diaphragm_quality_factor},
                   {"critical_current_kg_per_s", g.critical_current_kg_per_s}};
  j["orientation"] = {{"theta_deg", s.orientation.theta_deg},
                      {"chi_deg", s.orientation.chi_deg},
                      {"psi_deg", s.orientation.psi_deg}};
  j["ppn"] = {{"gamma", s.ppn.gamma}, {"alpha1", s.ppn.alpha1}};
  j["operating"] = {{"phi0_rad", s.operating.phi0},
                    {"phiA_rad", s.operating.phiA},
                    {"temperature_K", s.operating.temperature}};
  if (s.sweep) {
    json w;
    if (s.sweep->grid) {
      w["temperature_grid_K"] = {{"min", s.sweep->grid->min_K}, {"max", s.sweep->grid->max_K},
                                 {"points", s.sweep->grid->points}};
    } else {
      w["temperatures_K"] = s.sweep->temperatures_K;
    }
    w["diaphragm_quality_factors"] = s.sweep->diaphragm_quality_factors;
    j["sweep"] = w;
  }
  if (s.sim) {
    const auto& m = *s.sim;
    j["sim"] = {{"dt_s", m.dt_s},
                {"duration_s", m.duration_s},
                {"seed", m.seed},
                {"trials", m.trials},
                {"noise_psd_scale", m.noise_psd_scale},
                {"rotation_rad_per_s", m.rotation_rad_per_s},
                {"trajectory_decimation", m.trajectory_decimation},
                {"thermal_noise", m.thermal_noise}};
  }
  j["output"] = {{"directory", s.output.directory}, {"write_trajectory", s.output.write_trajectory}};
  return j.dump(2) + "\n";
}

PhysicalConstants scenario_constants(const Scenario& s, const std::filesystem::path& base_dir) {
  if (!s.constants_ref) return load_default_constants();
  std::filesystem::path p(*s.constants_ref);
  if (p.is_relative()) p = base_dir / p;
  return load_constants(p);
}

void validate_scenario(const Scenario& s, const PhysicalConstants& pc) {
  const auto geometry = s.geometry.to_geometry();
  geometry.validate();
  s.orientation.to_orientation().validate();
  s.ppn.validate();
  const CircuitModel model(geometry, pc);
  s.operating.validate(model.beta());
  pc.check_temperature(s.operating.temperature);
  if (s.sweep) {
    SweepSpec spec{s.sweep->temperatures(), s.sweep->diaphragm_quality_factors, true};
    spec.validate();
  }
  if (s.sim) {
    if (s.sim->trials != 0 && s.sim->trials < 100)
      throw ValidationError("sim.trials: Monte Carlo needs at least 100 trials (or 0 for a single ringdown)");
    make_sim_config(s, pc).validate();
  }
}

SimConfig make_sim_config(const Scenario& s, const PhysicalConstants& pc) {
  if (!s.sim) throw ValidationError("scenario has no 'sim' block");
  const auto geometry = s.geometry.to_geometry();
  SimConfig c{CircuitModel(geometry, pc)};
  const auto& m = *s.sim;
  c.phi0 = s.operating.phi0;
  c.phiA = s.operating.phiA;
  c.temperature = s.operating.temperature;
  c.dt = m.dt_s;
  c.duration = m.duration_s;
  c.seed = m.seed;
  c.noise_psd_scale = m.noise_psd_scale;
  c.thermal_noise = m.thermal_noise;
  c.decimation = m.trajectory_decimation;
  c.rotation_phase = rotation_to_phase(m.rotation_rad_per_s, geometry.area, pc);
  return c;
}

DesignSpaceFile parse_design_space(const std::string& text, const std::string& origin) {
  const json root = parse_text(text, origin);
  try {
    Reader r(root, origin);
    DesignSpaceFile d;
    d.phiA_max = r.number("phiA_max_rad", d.phiA_max);
    d.max_evaluations = r.count("max_evaluations", d.max_evaluations);
    const auto& free = r.raw("free");
    if (!free.is_object()) throw ValidationError(r.where("free") + ": expected an object");
    for (const auto& [key, value] : free.items()) {
      const auto p = parameter_from_key(key);
      if (!p) throw ValidationError(r.where("free") + "." + key + ": unknown design parameter");
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
        throw ValidationError(r.where("free") + "." + key + ": expected [lo, hi]");
      Bounds b{value[0].get<double>(), value[1].get<double>()};
      if (*p == DesignParameter::diaphragm_omega) b = {kTwoPi * b.lo, kTwoPi * b.hi};
      d.free.emplace_back(*p, b);
    }
    r.finish();
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

DesignSpaceFile load_design_space(const std::filesystem::path& path) {
  return parse_design_space(read_file(path, "design-space file"), path.string());
}

void apply_design_point(Scenario& s, const DesignPoint& point) {
  const auto current = s.geometry.to_geometry();
  const auto updated = GeometryBlock::from_geometry(point.geometry);
  auto& g = s.geometry;
  auto take = [](double& raw, double now, double next_internal, double next_raw) {
    if (now != next_internal) raw = next_raw;
  };
  take(g.area_m2, current.area, point.geometry.area, updated.area_m2);
  take(g.line_length_m, current.line_length, point.geometry.line_length, updated.line_length_m);
  take(g.line_cross_section_m2, current.line_cross_section, point.geometry.line_cross_section,
       updated.line_cross_section_m2);
  take(g.diaphragm_area_m2, current.diaphragm_area, point.geometry.diaphragm_area, updated.diaphragm_area_m2);
  take(g.spring_constant_N_per_m, current.spring_constant, point.geometry.spring_constant,
       updated.spring_constant_N_per_m);
  take(g.diaphragm_resonance_Hz, current.diaphragm_omega, point.geometry.diaphragm_omega,
       updated.diaphragm_resonance_Hz);
  take(g.diaphragm_quality_factor, current.diaphragm_q, point.geometry.diaphragm_q, updated.diaphragm_quality_factor);
  take(g.critical_current_kg_per_s, current.critical_current, point.geometry.critical_current,
       updated.critical_current_kg_per_s);
  s.operating.phi0 = point.op.phi0;
  s.operating.phiA = point.op.phiA;
}

}  // namespace gyro
