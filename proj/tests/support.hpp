#pragma once

#include <cmath>

#include "gyro/circuit.hpp"
#include "gyro/physconst.hpp"

namespace test {

inline const gyro::PhysicalConstants& constants() {
  static const gyro::PhysicalConstants pc = gyro::load_default_constants();
  return pc;
}

inline gyro::CircuitModel baseline_model(double diaphragm_q = 1e5) {
  auto g = gyro::GyrometerGeometry::baseline();
  g.diaphragm_q = diaphragm_q;
  return gyro::CircuitModel(g, constants());
}

inline double rel_err(double got, double want) { return std::abs(got / want - 1.0); }

}  // namespace test
