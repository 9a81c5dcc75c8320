#include "gyro/physconst.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {

constexpr std::string_view kKeys[] = {
    "schema_version",
    "gravitational_constant_m3_per_kg_s2",
    "speed_of_light_m_per_s",
    "planck_constant_J_s",
    "boltzmann_constant_J_per_K",
    "earth_mass_kg",
    "earth_mean_radius_m",
    "earth_sidereal_rate_rad_per_s",
    "helium4_atomic_mass_kg",
    "helium4_density_kg_per_m3",
    "helium4_first_sound_m_per_s",
    "helium4_gruneisen",
    "phonon_regime_max_temperature_K",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_key(std::string_view key) {
  for (auto k : kKeys)
    if (k == key) return true;
  return false;
}

}  // namespace

double HeliumProperties::entropy_density(double temperature) const {
  if (!(temperature >= 0.0) || temperature > max_phonon_temperature) {
    std::ostringstream msg;
    msg << "entropy_density: temperature " << temperature << " K outside phonon regime [0, "
        << max_phonon_temperature << "] K";
    throw DomainError(msg.str());
  }
  return entropy_coefficient * temperature * temperature * temperature;
}

double PhysicalConstants::newtonian_potential_at_surface() const {
  return universal.G_N * earth.mass / earth.radius;
}

void PhysicalConstants::check_temperature(double temperature) const {
  if (!(temperature >= 0.0) || temperature > helium.max_phonon_temperature) {
    std::ostringstream msg;
    msg << "temperature " << temperature << " K outside phonon regime [0, "
        << helium.max_phonon_temperature << "] K";
    throw DomainError(msg.str());
  }
}

PhysicalConstants parse_constants(std::string_view text, const std::string& origin) {
  std::map<std::string, double, std::less<>> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto raw = trim(line.substr(eq + 1));
    if (!known_key(key))
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (values.count(key))
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");

    double v = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size())
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": bad number '" + std::string(raw) + "'");
    values.emplace(std::string(key), v);
  }

  for (auto k : kKeys)
    if (!values.count(k)) throw ValidationError(origin + ": missing key '" + std::string(k) + "'");

  PhysicalConstants pc;
  const double version = values.at("schema_version");
  if (version != kConstantsSchemaVersion)
    throw ValidationError(origin + ": unsupported schema_version " + std::to_string(version));
  pc.schema_version = kConstantsSchemaVersion;

  auto& u = pc.universal;
  u.G_N = values.at("gravitational_constant_m3_per_kg_s2");
  u.c = values.at("speed_of_light_m_per_s");
  u.h = values.at("planck_constant_J_s");
  u.hbar = u.h / (2.0 * std::numbers::pi);
  u.k_B = values.at("boltzmann_constant_J_per_K");

  auto& e = pc.earth;
  e.mass = values.at("earth_mass_kg");
  e.radius = values.at("earth_mean_radius_m");
  e.rotation_rate = values.at("earth_sidereal_rate_rad_per_s");

  auto& he = pc.helium;
  he.m4 = values.at("helium4_atomic_mass_kg");
  he.rho = values.at("helium4_density_kg_per_m3");
  he.c4 = values.at("helium4_first_sound_m_per_s");
  he.gruneisen = values.at("helium4_gruneisen");
  he.max_phonon_temperature = values.at("phonon_regime_max_temperature_K");

  for (const auto& [key, v] : values) {
    if (key == "schema_version") continue;
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(origin + ": '" + key + "' must be finite and positive");
  }

  he.kappa4 = u.h / he.m4;
  he.beta_c = 1.0 / (he.rho * he.c4 * he.c4);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  he.entropy_coefficient = 2.0 * pi2 * std::pow(u.k_B, 4) / (45.0 * std::pow(u.hbar, 3) * std::pow(he.c4, 3));

  // Sanity bound on the Earth data: U/c^2 should be about 6.9e-10.
  const double u_over_c2 = pc.newtonian_potential_at_surface() / (u.c * u.c);
  if (std::abs(u_over_c2 / 6.9e-10 - 1.0) > 0.05)
    throw ValidationError(origin + ": Earth parameters give U/c^2 = " + std::to_string(u_over_c2) +
                          ", expected 6.9e-10 within 5%");
  return pc;
}

PhysicalConstants load_constants(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open constants file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_constants(buf.str(), path.string());
}

std::filesystem::path default_constants_path() {
  if (const char* env = std::getenv("GYRO_CONSTANTS"); env && *env) return env;
  return GYRO_DEFAULT_CONSTANTS;
}

PhysicalConstants load_default_constants() { return load_constants(default_constants_path()); }

}  // namespace gyro
