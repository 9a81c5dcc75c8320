#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gyro {

struct UniversalConstants {
  double G_N = 0;   // m^3 kg^-1 s^-2
  double c = 0;     // m/s
  double h = 0;     // J s
  double hbar = 0;  // J s, derived as h / (2 pi)
  double k_B = 0;   // J/K
};

struct EarthParams {
  double mass = 0;           // kg
  double radius = 0;         // m, mean radius
  double rotation_rate = 0;  // rad/s, sidereal
};

// Superfluid 4He in the low-temperature phonon regime.
struct HeliumProperties {
  double m4 = 0;         // kg
  double kappa4 = 0;     // m^2/s, circulation quantum h/m4
  double rho = 0;        // kg/m^3
  double c4 = 0;         // m/s, first sound
  double beta_c = 0;     // 1/Pa, compressibility 1/(rho c4^2)
  double gruneisen = 0;  // dimensionless
  double max_phonon_temperature = 0;  // K, upper edge of the phonon-gas window

  // Debye phonon-gas entropy per volume, J K^-1 m^-3. Throws DomainError
  // outside [0, max_phonon_temperature].
  double entropy_density(double temperature) const;

  // Coefficient of T^3 in entropy_density: 2 pi^2 k_B^4 / (45 hbar^3 c4^3).
  double entropy_coefficient = 0;
};

struct PhysicalConstants {
  int schema_version = 0;
  UniversalConstants universal;
  EarthParams earth;
  HeliumProperties helium;

  // G M / R at the Earth surface, m^2/s^2.
  double newtonian_potential_at_surface() const;

  // Throws DomainError if temperature is outside the phonon window.
  void check_temperature(double temperature) const;
};

inline constexpr int kConstantsSchemaVersion = 1;

// Parses the key = value constants format. `origin` is used in error
// messages only.
PhysicalConstants parse_constants(std::string_view text, const std::string& origin = "<string>");
PhysicalConstants load_constants(const std::filesystem::path& path);

// $GYRO_CONSTANTS if set, otherwise the data file shipped with the build.
std::filesystem::path default_constants_path();
PhysicalConstants load_default_constants();

}  // namespace gyro
