#include "gyro/relativity.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerance on the Gram determinant; coplanar triples such as psi = theta - chi
// land on zero and round either way.
constexpr double kGramTolerance = 1e-12;

// cos with an exact zero for a right angle given in degrees, so that a
// horizontal loop normal carries no Sagnac term at all.
double cosine(double a) {
  if (std::abs(a - kPi / 2) <= 4.0 * std::numeric_limits<double>::epsilon()) return 0.0;
  return std::cos(a);
}

double angle_in_range(double a) { return std::isfinite(a) && a >= 0.0 && a <= kPi; }

Vec3 any_perpendicular(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

// Midpoint rule on each chord; exact for fields linear in position.
template <class Field>
double loop_integral(const std::vector<Vec3>& contour, Field&& field) {
  double sum = 0.0;
  const std::size_t n = contour.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& p0 = contour[k];
    const Vec3& p1 = contour[(k + 1) % n];
    sum += field(0.5 * (p0 + p1)).dot(p1 - p0);
  }
  return sum;
}

ProperTimes proper_times_of(const PhaseBudget& b, const PhysicalConstants& pc) {
  return {proper_time_difference(b.sagnac, pc), proper_time_difference(b.frame_dragging, pc),
          proper_time_difference(b.geodetic, pc), proper_time_difference(b.thomas, pc),
          proper_time_difference(b.total, pc)};
}

}  // namespace

void PpnParams::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(alpha1)) throw ValidationError("ppn: gamma and alpha1 must be finite");
}

Orientation Orientation::from_degrees(double theta_deg, double chi_deg, double psi_deg) {
  constexpr double k = kPi / 180.0;
  return {theta_deg * k, chi_deg * k, psi_deg * k};
}

double Orientation::gram_determinant() const {
  const double ct = cosine(theta), cc = cosine(chi), cp = cosine(psi);
  return 1.0 + 2.0 * ct * cc * cp - ct * ct - cc * cc - cp * cp;
}

void Orientation::validate() const {
  if (!angle_in_range(theta) || !angle_in_range(chi) || !angle_in_range(psi))
    throw ValidationError("orientation: theta, chi and psi must lie in [0, pi]");
  if (gram_determinant() < -kGramTolerance) {
    std::ostringstream msg;
    msg << "orientation: angles (theta, chi, psi) = (" << theta << ", " << chi << ", " << psi
        << ") rad are not realizable by three unit vectors (Gram determinant " << gram_determinant() << ")";
    throw ValidationError(msg.str());
  }
}

FrameAxes FrameAxes::from_orientation(const Orientation& orient) {
  orient.validate();
  FrameAxes axes;
  axes.spin_axis = Vec3::UnitZ();
  axes.radial = Vec3(std::sin(orient.chi), 0.0, cosine(orient.chi));

  const double st = std::sin(orient.theta), ct = cosine(orient.theta);
  const double denom = std::sin(orient.chi) * st;
  double cos_az = 1.0;
  if (std::abs(denom) > 1e-15)
    cos_az = std::clamp((cosine(orient.psi) - cosine(orient.chi) * ct) / denom, -1.0, 1.0);
  const double sin_az = std::sqrt(std::max(0.0, 1.0 - cos_az * cos_az));
  axes.area_normal = Vec3(st * cos_az, st * sin_az, ct);
  return axes;
}

LabKinematics LabKinematics::earth_surface(const PhysicalConstants& pc, const Vec3& radial) {
  LabKinematics kin;
  kin.omega_earth_vec = pc.earth.rotation_rate * Vec3::UnitZ();
  kin.r = pc.earth.radius * radial.normalized();
  kin.v = kin.omega_earth_vec.cross(kin.r);
  const double r = kin.r.norm();
  kin.a = pc.universal.G_N * pc.earth.mass / (r * r * r) * kin.r + kin.omega_earth_vec.cross(kin.v);
  return kin;
}

PrecessionRates precession_rates(const LabKinematics& kin, const PpnParams& ppn, const PhysicalConstants& pc) {
  const double r = kin.r.norm();
  if (!(r > 0.0)) throw StabilityError("precession_rates: |r| must be positive");

  const double c = pc.universal.c, c2 = c * c;
  const double gm = pc.universal.G_N * pc.earth.mass;
  const double r3 = r * r * r;
  const Vec3 rhat = kin.r / r;
  const Vec3& w = kin.omega_earth_vec;

  PrecessionRates out;
  const double fd = (1.0 + ppn.gamma + 0.25 * ppn.alpha1) * gm * pc.earth.radius * pc.earth.radius / (5.0 * c2 * r3);
  out.frame_dragging = fd * (3.0 * w.dot(rhat) * rhat - w);
  out.geodetic = 0.5 * (2.0 * ppn.gamma + 1.0) * gm / (c2 * r3) * kin.r.cross(kin.v);
  out.thomas = kin.a.cross(kin.v) / (2.0 * c2);

  // grad U = -GM r / r^3
  out.k_coeff = -ppn.gamma / (c2 * c) * gm * kin.v.dot(kin.r) / r3;
  return out;
}

PhaseBudget phase_budget(const Orientation& orient, double area, const PpnParams& ppn, const PhysicalConstants& pc) {
  orient.validate();
  ppn.validate();
  if (!(area > 0.0)) throw ValidationError("phase_budget: area must be positive");

  const double m = pc.helium.m4, hbar = pc.universal.hbar, c2 = pc.universal.c * pc.universal.c;
  const double omega = pc.earth.rotation_rate;
  const double flux = 2.0 * m * omega * area / hbar;
  const double u = pc.newtonian_potential_at_surface() / c2;

  const double ct = cosine(orient.theta), cc = cosine(orient.chi), cp = cosine(orient.psi);
  const double sc = std::sin(orient.chi);

  PhaseBudget b;
  b.sagnac = -flux * ct;
  b.frame_dragging = flux * u * (1.0 + ppn.gamma + 0.25 * ppn.alpha1) / 5.0 * (3.0 * cc * cp - ct);
  b.geodetic = flux * u * (2.0 * ppn.gamma + 1.0) / 2.0 * (ct - cc * cp);
  b.thomas_normal_force = flux * u * 0.5 * (ct - cc * cp);
  b.thomas_rotation =
      -m * omega * omega * omega * pc.earth.radius * pc.earth.radius * area / (hbar * c2) * sc * sc * ct;
  b.thomas = b.thomas_normal_force + b.thomas_rotation;
  b.total = b.sagnac + b.frame_dragging + b.geodetic + b.thomas;
  b.proper_time = proper_times_of(b, pc);
  return b;
}

std::vector<Vec3> circular_contour(const Vec3& normal, double area, int n_segments, ContourMode mode) {
  if (n_segments < 3) throw ValidationError("circular_contour: need at least 3 segments");
  if (!(area > 0.0)) throw ValidationError("circular_contour: area must be positive");

  const Vec3 n = normal.normalized();
  const Vec3 e1 = any_perpendicular(n);
  const Vec3 e2 = n.cross(e1);
  const double step = 2.0 * kPi / n_segments;
  const double radius = mode == ContourMode::area_matched ? std::sqrt(2.0 * area / (n_segments * std::sin(step)))
                                                          : std::sqrt(area / kPi);
  std::vector<Vec3> pts;
  pts.reserve(n_segments);
  for (int k = 0; k < n_segments; ++k) {
    const double t = step * k;
    pts.push_back(radius * (std::cos(t) * e1 + std::sin(t) * e2));
  }
  return pts;
}

ContourPhaseBudget phase_budget_by_contour(const LabKinematics& kin, const Vec3& area_normal, double area,
                                           const PpnParams& ppn, const PhysicalConstants& pc, int n_segments,
                                           ContourMode mode) {
  if (n_segments < 8) throw ValidationError("phase_budget_by_contour: n_segments must be >= 8");
  ppn.validate();

  const auto rates = precession_rates(kin, ppn, pc);
  const auto loop = circular_contour(area_normal, area, n_segments, mode);
  const double m = pc.helium.m4, hbar = pc.universal.hbar, c = pc.universal.c;

  // Solid-body superfluid velocity and the curl part of c g:
  //   phase = -(m/hbar) oint (Omega_earth x R) . dR + (m/hbar) oint (Omega_i x R) . dR
  auto rotational = [&](const Vec3& w) { return loop_integral(loop, [&](const Vec3& p) { return w.cross(p); }); };

  // Split the Thomas rate into the normal-force and rotational parts.
  const double r = kin.r.norm();
  const Vec3 a_normal = pc.universal.G_N * pc.earth.mass / (r * r * r) * kin.r;
  const Vec3 thomas_normal = a_normal.cross(kin.v) / (2.0 * c * c);
  const Vec3 thomas_rot = rates.thomas - thomas_normal;

  ContourPhaseBudget out;
  auto& b = out.budget;
  b.sagnac = -(m / hbar) * rotational(kin.omega_earth_vec);
  b.frame_dragging = (m / hbar) * rotational(rates.frame_dragging);
  b.geodetic = (m / hbar) * rotational(rates.geodetic);
  b.thomas_normal_force = (m / hbar) * rotational(thomas_normal);
  b.thomas_rotation = (m / hbar) * rotational(thomas_rot);
  b.thomas = b.thomas_normal_force + b.thomas_rotation;
  b.total = b.sagnac + b.frame_dragging + b.geodetic + b.thomas;
  b.proper_time = proper_times_of(b, pc);

  out.k_term = -(m * c / hbar) * rates.k_coeff * loop_integral(loop, [](const Vec3& p) { return p; });
  return out;
}

ContourPhaseBudget phase_budget_by_contour(const Orientation& orient, double area, const PpnParams& ppn,
                                           const PhysicalConstants& pc, int n_segments, ContourMode mode) {
  const auto axes = FrameAxes::from_orientation(orient);
  const auto kin = LabKinematics::earth_surface(pc, axes.radial);
  return phase_budget_by_contour(kin, axes.area_normal, area, ppn, pc, n_segments, mode);
}

double proper_time_difference(double phase, const PhysicalConstants& pc) {
  return pc.universal.hbar * phase / (pc.helium.m4 * pc.universal.c * pc.universal.c);
}

OrientationSensitivity orientation_sensitivity(const Orientation& orient, double area, const PpnParams& ppn,
                                               const PhysicalConstants& pc) {
  const auto budget = phase_budget(orient, area, ppn, pc);
  const double flux = 2.0 * pc.helium.m4 * pc.earth.rotation_rate * area / pc.universal.hbar;
  const double theta = orient.theta;

  OrientationSensitivity out;
  out.dphi_dtheta = flux * std::sin(theta);

  // |cos(theta +- d) - cos(theta)| = target, smallest d > 0. The change is
  // monotone in d until theta +- d reaches 0 or pi.
  const double target = std::abs(budget.frame_dragging) / flux;
  auto change = [&](double d, double dir) { return std::abs(2.0 * std::sin(theta + dir * d / 2.0) * std::sin(d / 2.0)); };
  double best = std::numeric_limits<double>::infinity();
  for (double dir : {+1.0, -1.0}) {
    const double d_max = dir > 0 ? kPi - theta : theta;
    if (d_max <= 0.0 || change(d_max, dir) < target) continue;
    double lo = 0.0, hi = d_max;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (change(mid, dir) < target ? lo : hi) = mid;
    }
    best = std::min(best, 0.5 * (lo + hi));
  }
  out.angle_tolerance = best;
  return out;
}

}  // namespace gyro
