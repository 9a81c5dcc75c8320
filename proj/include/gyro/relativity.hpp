#pragma once

#include <Eigen/Core>
#include <vector>

#include "gyro/physconst.hpp"

namespace gyro {

using Vec3 = Eigen::Vector3d;

// Post-Newtonian parameters kept free in the phase budget. GR is (1, 0).
struct PpnParams {
  double gamma = 1.0;
  double alpha1 = 0.0;

  static PpnParams general_relativity() { return {}; }
  void validate() const;
  bool operator==(const PpnParams&) const = default;
};

// Attitude of the gyrometer, all angles in radians:
//   theta: between the Earth spin axis and the loop normal
//   chi:   between the Earth spin axis and the local radial (colatitude)
//   psi:   between the local radial and the loop normal
struct Orientation {
  double theta = 0.0;
  double chi = 0.0;
  double psi = 0.0;

  static Orientation from_degrees(double theta_deg, double chi_deg, double psi_deg);

  // Determinant of the Gram matrix of the three unit vectors; must be >= 0
  // for the triple to be realizable.
  double gram_determinant() const;
  void validate() const;
  bool operator==(const Orientation&) const = default;
};

// Unit vectors implied by an Orientation, expressed in an Earth-fixed frame
// with the spin axis along +z and the radial in the x-z plane. The loop
// normal is chosen so that spin . (radial x normal) >= 0; the angle triple
// alone does not fix that handedness.
struct FrameAxes {
  Vec3 spin_axis;
  Vec3 radial;
  Vec3 area_normal;

  static FrameAxes from_orientation(const Orientation& orient);
};

struct LabKinematics {
  Vec3 r;                // position from Earth centre, m
  Vec3 v;                // velocity in the PPN frame, m/s
  Vec3 a;                // proper acceleration, m/s^2
  Vec3 omega_earth_vec;  // rad/s

  // Laboratory at rest on the Earth surface at unit radial `radial`:
  // v = Omega x r, a = (GM/r^3) r + Omega x v.
  static LabKinematics earth_surface(const PhysicalConstants& pc, const Vec3& radial);
};

struct PrecessionRates {
  Vec3 frame_dragging;
  Vec3 geodetic;
  Vec3 thomas;
  double k_coeff = 0.0;  // (gamma/c^3)(v . grad U), 1/s

  Vec3 total() const { return frame_dragging + geodetic + thomas; }
};

PrecessionRates precession_rates(const LabKinematics& kin, const PpnParams& ppn, const PhysicalConstants& pc);

struct ProperTimes {
  double sagnac = 0, frame_dragging = 0, geodetic = 0, thomas = 0, total = 0;  // s
};

struct PhaseBudget {
  double sagnac = 0;
  double frame_dragging = 0;
  double geodetic = 0;
  double thomas = 0;             // thomas_normal_force + thomas_rotation
  double thomas_normal_force = 0;
  double thomas_rotation = 0;
  double total = 0;
  ProperTimes proper_time;
};

// Closed-form budget for a loop on the Earth surface.
PhaseBudget phase_budget(const Orientation& orient, double area, const PpnParams& ppn, const PhysicalConstants& pc);

enum class ContourMode {
  circle_vertices,  // vertices on the circle of area A; converges as 1/n^2
  area_matched,     // regular polygon whose own area is exactly A
};

// Vertices of a regular n-gon centred on the origin in the plane normal to
// `normal`, counter-clockwise about it.
std::vector<Vec3> circular_contour(const Vec3& normal, double area, int n_segments, ContourMode mode);

struct ContourPhaseBudget {
  PhaseBudget budget;
  double k_term = 0.0;  // phase contributed by the K R part of g; zero for a closed loop
};

// Numerical loop integral of the superfluid velocity and c g around a
// discretised circular loop. Independent of the closed-form angle
// expressions; shares only the precession vectors.
ContourPhaseBudget phase_budget_by_contour(const LabKinematics& kin, const Vec3& area_normal, double area,
                                           const PpnParams& ppn, const PhysicalConstants& pc, int n_segments,
                                           ContourMode mode = ContourMode::circle_vertices);
ContourPhaseBudget phase_budget_by_contour(const Orientation& orient, double area, const PpnParams& ppn,
                                           const PhysicalConstants& pc, int n_segments,
                                           ContourMode mode = ContourMode::circle_vertices);

// delta tau = hbar phi / (m4 c^2).
double proper_time_difference(double phase, const PhysicalConstants& pc);

struct OrientationSensitivity {
  double dphi_dtheta = 0;      // rad/rad
  double angle_tolerance = 0;  // rad; smallest tilt with |delta phi_S| = |phi_FD|
};

OrientationSensitivity orientation_sensitivity(const Orientation& orient, double area, const PpnParams& ppn,
                                               const PhysicalConstants& pc);

}  // namespace gyro
