#pragma once

#include <compare>

namespace gyro {

// Thin strong type for the lumped-circuit quantities. The circuit works in
// the mass-current convention: current in kg/s, potential in J/kg.
template <class Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value_(v) {}

  constexpr double value() const { return value_; }

  constexpr Quantity operator-() const { return Quantity(-value_); }
  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
  friend constexpr Quantity operator*(double s, Quantity q) { return Quantity(s * q.value_); }
  friend constexpr Quantity operator*(Quantity q, double s) { return Quantity(s * q.value_); }
  friend constexpr Quantity operator/(Quantity q, double s) { return Quantity(q.value_ / s); }
  friend constexpr double operator/(Quantity a, Quantity b) { return a.value_ / b.value_; }

  constexpr auto operator<=>(const Quantity&) const = default;

 private:
  double value_ = 0.0;
};

// (J/kg) / (kg/s^2), i.e. m^-1 in SI base units.
using HydroInductance = Quantity<struct HydroInductanceTag>;
// kg / (J/kg) = kg^2/J.
using HydroCapacitance = Quantity<struct HydroCapacitanceTag>;
// (J/kg) / (kg/s).
using HydroResistance = Quantity<struct HydroResistanceTag>;

// Parallel combination 1/(1/a + 1/b); either operand may be negative.
constexpr HydroInductance parallel(HydroInductance a, HydroInductance b) {
  return HydroInductance(1.0 / (1.0 / a.value() + 1.0 / b.value()));
}

}  // namespace gyro
