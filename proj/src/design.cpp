#include "gyro/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ParamInfo {
  DesignParameter p;
  std::string_view key;
  bool log_scale;
};

constexpr ParamInfo kParams[] = {
    {DesignParameter::area, "area_m2", true},
    {DesignParameter::line_length, "line_length_m", true},
    {DesignParameter::line_cross_section, "line_cross_section_m2", true},
    {DesignParameter::diaphragm_area, "diaphragm_area_m2", true},
    {DesignParameter::spring_constant, "spring_constant_N_per_m", true},
    {DesignParameter::diaphragm_omega, "diaphragm_resonance_Hz", true},
    {DesignParameter::diaphragm_q, "diaphragm_quality_factor", true},
    {DesignParameter::critical_current, "critical_current_kg_per_s", true},
    {DesignParameter::phi0, "phi0_rad", false},
    {DesignParameter::phiA, "phiA_rad", false},
};

const ParamInfo& info(DesignParameter p) {
  for (const auto& i : kParams)
    if (i.p == p) return i;
  throw ValidationError("unknown design parameter");
}

// Maps the unit interval onto a free parameter's bounds.
struct Axis {
  DesignParameter p;
  Bounds b;
  bool log_scale;

  double to_value(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    if (b.lo == b.hi) return b.lo;
    if (log_scale) return std::exp(std::log(b.lo) + u * (std::log(b.hi) - std::log(b.lo)));
    return b.lo + u * (b.hi - b.lo);
  }
  double to_unit(double v) const {
    if (b.hi == b.lo) return 0.0;
    if (log_scale) return (std::log(v) - std::log(b.lo)) / (std::log(b.hi) - std::log(b.lo));
    return (v - b.lo) / (b.hi - b.lo);
  }
};

class Problem {
 public:
  Problem(const DesignSpace& space, const PhysicalConstants& pc) : space_(space), pc_(pc) {
    for (const auto& [p, b] : space.free) {
      const bool log_scale = info(p).log_scale && b.lo > 0.0;
      axes_.push_back({p, b, log_scale});
    }
  }

  std::size_t dim() const { return axes_.size(); }

  DesignPoint point(const std::vector<double>& u) const {
    DesignPoint pt = space_.baseline;
    for (std::size_t i = 0; i < axes_.size(); ++i) pt.set(axes_[i].p, axes_[i].to_value(u[i]));
    return pt;
  }

  std::vector<double> unit_of(const DesignPoint& pt) const {
    std::vector<double> u(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) u[i] = axes_[i].to_unit(pt.get(axes_[i].p));
    return u;
  }

  // log of the objective; monotone, better conditioned over decades.
  double operator()(const std::vector<double>& u) {
    ++evaluations;
    const double f = design_objective(point(u), pc_, space_.phiA_max);
    return std::isfinite(f) && f > 0.0 ? std::log(f) : kInf;
  }

  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t evaluations = 0;

 private:
  const DesignSpace& space_;
  const PhysicalConstants& pc_;
  std::vector<Axis> axes_;
};

struct Vertex {
  std::vector<double> u;
  double f;
};

void clamp_unit(std::vector<double>& u) {
  for (double& x : u) x = std::clamp(x, 0.0, 1.0);
}

Vertex nelder_mead(Problem& f, Vertex start, double step, std::size_t budget) {
  const std::size_t n = start.u.size();
  std::vector<Vertex> s{start};
  for (std::size_t i = 0; i < n; ++i) {
    Vertex v = start;
    v.u[i] += v.u[i] + step <= 1.0 ? step : -step;
    clamp_unit(v.u);
    v.f = f(v.u);
    s.push_back(std::move(v));
  }

  auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    clamp_unit(r);
    return r;
  };

  while (f.evaluations < budget) {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    double size = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(s[k].u[i] - s[0].u[i]));
    if (size < 1e-12 || (std::isfinite(s[n].f) && s[n].f - s[0].f < 1e-15)) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s[k].u[i] / static_cast<double>(n);

    const auto& worst = s[n];
    Vertex r{blend(centroid, worst.u, -1.0), 0.0};
    r.f = f(r.u);
    if (r.f < s[0].f) {
      Vertex e{blend(centroid, worst.u, -2.0), 0.0};
      e.f = f(e.u);
      s[n] = e.f < r.f ? std::move(e) : std::move(r);
    } else if (r.f < s[n - 1].f) {
      s[n] = std::move(r);
    } else {
      const bool outside = r.f < worst.f;
      Vertex c{blend(centroid, outside ? r.u : worst.u, 0.5), 0.0};
      c.f = f(c.u);
      if (c.f < std::min(worst.f, r.f)) {
        s[n] = std::move(c);
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          s[k].u = blend(s[0].u, s[k].u, 0.5);
          s[k].f = f(s[k].u);
        }
      }
    }
  }
  return *std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
}

}  // namespace

std::string_view parameter_key(DesignParameter p) { return info(p).key; }

std::optional<DesignParameter> parameter_from_key(std::string_view key) {
  for (const auto& i : kParams)
    if (i.key == key) return i.p;
  return std::nullopt;
}

double DesignPoint::get(DesignParameter p) const {
  switch (p) {
    case DesignParameter::area: return geometry.area;
    case DesignParameter::line_length: return geometry.line_length;
    case DesignParameter::line_cross_section: return geometry.line_cross_section;
    case DesignParameter::diaphragm_area: return geometry.diaphragm_area;
    case DesignParameter::spring_constant: return geometry.spring_constant;
    case DesignParameter::diaphragm_omega: return geometry.diaphragm_omega;
    case DesignParameter::diaphragm_q: return geometry.diaphragm_q;
    case DesignParameter::critical_current: return geometry.critical_current;
    case DesignParameter::phi0: return op.phi0;
    case DesignParameter::phiA: return op.phiA;
  }
  return 0.0;
}

void DesignPoint::set(DesignParameter p, double v) {
  switch (p) {
    case DesignParameter::area: geometry.area = v; break;
    case DesignParameter::line_length: geometry.line_length = v; break;
    case DesignParameter::line_cross_section: geometry.line_cross_section = v; break;
    case DesignParameter::diaphragm_area: geometry.diaphragm_area = v; break;
    case DesignParameter::spring_constant: geometry.spring_constant = v; break;
    case DesignParameter::diaphragm_omega: geometry.diaphragm_omega = v; break;
    case DesignParameter::diaphragm_q: geometry.diaphragm_q = v; break;
    case DesignParameter::critical_current: geometry.critical_current = v; break;
    case DesignParameter::phi0: op.phi0 = v; break;
    case DesignParameter::phiA: op.phiA = v; break;
  }
}

void DesignSpace::validate() const {
  if (!(phiA_max > 0.0) || !(phiA_max < std::numbers::pi / 2))
    throw ValidationError("design space: phiA_max must lie in (0, pi/2)");
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto& [p, b] = free[i];
    const auto key = std::string(parameter_key(p));
    for (std::size_t j = 0; j < i; ++j)
      if (free[j].first == p) throw ValidationError("design space: duplicate parameter " + key);
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw ValidationError("design space: bounds for " + key + " must be finite with lo <= hi");
    if (info(p).log_scale && !(b.lo > 0.0)) throw ValidationError("design space: bounds for " + key + " must be positive");
    const double v = baseline.get(p);
    if (v < b.lo || v > b.hi) throw ValidationError("design space: baseline " + key + " lies outside its bounds");
  }
}

std::vector<std::string> violated_constraints(const DesignPoint& pt, const PhysicalConstants& pc, double phiA_max) {
  std::vector<std::string> out;
  try {
    pt.geometry.validate();
  } catch (const ValidationError& e) {
    out.emplace_back(e.what());
    return out;
  }
  const CircuitModel model(pt.geometry, pc);
  const double beta = model.beta();
  if (!(beta > 0.0 && beta < 1.0)) out.emplace_back("0 < beta < 1");
  if (!(std::cos(pt.op.phi0) + 1.0 / beta > 0.0)) out.emplace_back("cos(phi0) + 1/beta > 0");
  if (!(std::sin(pt.op.phi0) > 0.0)) out.emplace_back("sin(phi0) > 0");
  if (!(pt.op.phiA > 0.0)) out.emplace_back("phiA > 0");
  if (!(pt.op.phiA <= phiA_max)) out.emplace_back("phiA <= phiA_max");
  if (!(pt.op.temperature >= 0.0 && pt.op.temperature <= pc.helium.max_phonon_temperature))
    out.emplace_back("temperature in phonon regime");
  return out;
}

double design_objective(const DesignPoint& pt, const PhysicalConstants& pc, double phiA_max) {
  if (!violated_constraints(pt, pc, phiA_max).empty()) return kInf;
  try {
    const CircuitModel model(pt.geometry, pc);
    return rotation_noise_density(model, pt.op).sqrt_S_omega;
  } catch (const DomainError&) {
    return kInf;
  }
}

DesignResult optimize_design(const DesignSpace& space, const PhysicalConstants& pc, std::uint64_t seed,
                             std::size_t max_evaluations) {
  space.validate();
  if (const auto bad = violated_constraints(space.baseline, pc, space.phiA_max); !bad.empty()) {
    std::string msg = "design space: baseline is infeasible, violated:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw InfeasibleError(msg);
  }

  Problem problem(space, pc);
  const std::size_t d = problem.dim();
  DesignResult result;
  result.baseline_objective = design_objective(space.baseline, pc, space.phiA_max);

  Vertex best{problem.unit_of(space.baseline), 0.0};
  best.f = problem(best.u);
  const double baseline_f = best.f;

  if (d > 0) {
    // Pre-pass: full grid when small, seeded random samples otherwise.
    const std::size_t budget = std::min<std::size_t>(512, max_evaluations / 4);
    const auto per_axis = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / d)));
    std::vector<std::vector<double>> candidates;
    if (per_axis >= 3) {
      std::vector<std::size_t> idx(d, 0);
      while (true) {
        std::vector<double> u(d);
        for (std::size_t i = 0; i < d; ++i) u[i] = static_cast<double>(idx[i]) / (per_axis - 1);
        candidates.push_back(std::move(u));
        std::size_t k = 0;
        while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == d) break;
      }
    } else {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t n = 0; n < budget; ++n) {
        std::vector<double> u(d);
        for (auto& x : u) x = unit(rng);
        candidates.push_back(std::move(u));
      }
    }
    for (auto& u : candidates) {
      const double f = problem(u);
      if (f < best.f) best = {std::move(u), f};
    }

    for (double step : {0.1, 0.02}) {
      if (problem.evaluations >= max_evaluations) break;
      const Vertex v = nelder_mead(problem, best, step, max_evaluations);
      if (v.f < best.f) best = v;
    }
  }

  // Keep the baseline bit-for-bit unless the search strictly improved on it.
  result.best = best.f < baseline_f ? problem.point(best.u) : space.baseline;
  result.evaluations = problem.evaluations;
  const CircuitModel model(result.best.geometry, pc);
  result.report = rotation_noise_density(model, result.best.op);
  result.objective = result.report.sqrt_S_omega;

  for (std::size_t i = 0; i < d; ++i) {
    const auto& axis = problem.axes()[i];
    const std::string key(parameter_key(axis.p));
    if (axis.b.lo == axis.b.hi) continue;
    if (best.u[i] <= 1e-6) result.active_constraints.push_back(key + " at lower bound");
    if (best.u[i] >= 1.0 - 1e-6) result.active_constraints.push_back(key + " at upper bound");
  }
  const double beta = model.beta();
  if (1.0 - beta < 1e-6) result.active_constraints.emplace_back("beta < 1");
  if (std::cos(result.best.op.phi0) + 1.0 / beta < 1e-6) result.active_constraints.emplace_back("cos(phi0) + 1/beta > 0");
  if (space.phiA_max - result.best.op.phiA < 1e-9 * space.phiA_max)
    result.active_constraints.emplace_back("phiA <= phiA_max");
  return result;
}

}  // namespace gyro
