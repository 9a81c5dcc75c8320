#include "gyro/commands.hpp"

#include <fstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<double> quality_factors(const Scenario& s) {
  if (s.sweep) return s.sweep->diaphragm_quality_factors;
  return {s.geometry.diaphragm_quality_factor};
}

Report budget_json(const PhaseBudget& b) {
  return {{"sagnac", b.sagnac},
          {"frame_dragging", b.frame_dragging},
          {"geodetic", b.geodetic},
          {"thomas", b.thomas},
          {"thomas_normal_force", b.thomas_normal_force},
          {"thomas_rotation", b.thomas_rotation},
          {"total", b.total}};
}

}  // namespace

double frame_dragging_signal(const Scenario& s, const PhysicalConstants& pc) {
  const auto axes = FrameAxes::from_orientation(s.orientation.to_orientation());
  const auto rates = precession_rates(LabKinematics::earth_surface(pc, axes.radial), s.ppn, pc);
  return rates.frame_dragging.dot(axes.area_normal);
}

Report cmd_phase_budget(const Scenario& s, const PhysicalConstants& pc) {
  const auto orient = s.orientation.to_orientation();
  const double area = s.geometry.area_m2;
  const auto budget = phase_budget(orient, area, s.ppn, pc);
  const auto axes = FrameAxes::from_orientation(orient);
  const auto kin = LabKinematics::earth_surface(pc, axes.radial);
  const auto rates = precession_rates(kin, s.ppn, pc);
  const auto& n = axes.area_normal;
  const auto tol = orientation_sensitivity(orient, area, s.ppn, pc);

  Report r;
  r["command"] = "phase-budget";
  r["area_m2"] = area;
  r["orientation_deg"] = {{"theta", s.orientation.theta_deg}, {"chi", s.orientation.chi_deg}, {"psi", s.orientation.psi_deg}};
  r["ppn"] = {{"gamma", s.ppn.gamma}, {"alpha1", s.ppn.alpha1}};
  r["phase_rad"] = budget_json(budget);
  r["rate_on_normal_rad_per_s"] = {{"earth_rotation", kin.omega_earth_vec.dot(n)},
                                   {"frame_dragging", rates.frame_dragging.dot(n)},
                                   {"geodetic", rates.geodetic.dot(n)},
                                   {"thomas", rates.thomas.dot(n)},
                                   {"relativistic_total", rates.total().dot(n)}};
  const auto& pt = budget.proper_time;
  r["proper_time_s"] = {{"sagnac", pt.sagnac},
                        {"frame_dragging", pt.frame_dragging},
                        {"geodetic", pt.geodetic},
                        {"thomas", pt.thomas},
                        {"total", pt.total}};
  r["orientation_tolerance"] = {{"dphi_dtheta_rad_per_rad", tol.dphi_dtheta},
                                {"angle_tolerance_rad", tol.angle_tolerance}};
  return r;
}

Report cmd_noise_sweep(const Scenario& s, const PhysicalConstants& pc, const std::filesystem::path& out_dir) {
  if (!s.sweep) throw ValidationError("noise-sweep needs a 'sweep' block in the scenario");
  const auto geometry = s.geometry.to_geometry();
  Report r;
  r["command"] = "noise-sweep";
  for (const bool solid : {true, false}) {
    const SweepSpec spec{s.sweep->temperatures(), s.sweep->diaphragm_quality_factors, solid};
    const auto rows = sweep(spec, geometry, pc, s.operating);
    const auto path = out_dir / (solid ? "noise_sweep_solid.csv" : "noise_sweep_dashed.csv");
    auto out = open_output(path);
    write_sweep_csv(out, rows);
    std::size_t errors = 0;
    for (const auto& row : rows) errors += row.regime == Regime::error;
    r[solid ? "solid" : "dashed"] = {{"file", path.string()}, {"rows", rows.size()}, {"error_rows", errors}};
  }
  return r;
}

Report cmd_plan(const Scenario& s, const PhysicalConstants& pc, double target_rel_err) {
  if (!(target_rel_err > 0.0)) throw ValidationError("target relative error must be positive");
  const double signal = std::abs(frame_dragging_signal(s, pc));
  const auto tol = orientation_sensitivity(s.orientation.to_orientation(), s.geometry.area_m2, s.ppn, pc);

  Report r;
  r["command"] = "plan";
  r["signal_rad_per_s"] = signal;
  r["target_rel_err"] = target_rel_err;
  r["temperature_K"] = s.operating.temperature;
  r["angle_tolerance_rad"] = tol.angle_tolerance;
  Report rows = Report::array();
  for (const double qd : quality_factors(s)) {
    auto g = s.geometry.to_geometry();
    g.diaphragm_q = qd;
    const CircuitModel model(g, pc);
    const auto noise = rotation_noise_density(model, s.operating);
    rows.push_back({{"Q_d", qd},
                    {"Q_H", noise.Q_H},
                    {"sqrtS_omega_rad_per_s_rtHz", noise.sqrt_S_omega},
                    {"sqrtS_tau_s_per_rtHz", noise.sqrt_S_tau},
                    {"measurement_time_s", noise.measurement_time(signal, target_rel_err)},
                    {"position_resolution_m_per_rtHz",
                     position_resolution_required(model, s.operating.phi0, s.operating.temperature)}});
  }
  r["rows"] = rows;
  return r;
}

Report cmd_simulate(const Scenario& s, const PhysicalConstants& pc, const std::filesystem::path& out_dir) {
  const SimConfig config = make_sim_config(s, pc);
  config.validate();
  const auto cal = calibrate_ringdown(config);
  const auto rec = ringdown_experiment(config, cal);

  Report r;
  r["command"] = "simulate";
  r["seed"] = config.seed;
  r["calibration"] = {{"impulse_phase_kick_rad", cal.kick},
                      {"omega_ref_rad_per_s", cal.omega_ref},
                      {"amplitude2_ref", cal.a_ref2},
                      {"kappa_rad_per_s", cal.kappa}};
  r["ringdown"] = {{"omega_hat_rad_per_s", rec.omega_hat},
                   {"se_omega_rad_per_s", rec.se_omega},
                   {"decay_rate_per_s", rec.lambda},
                   {"se_decay_rate_per_s", rec.se_lambda},
                   {"omega_compensated_rad_per_s", rec.omega_compensated},
                   {"phi0_hat_rad", rec.phi0_hat},
                   {"rotation_hat_rad_per_s", rec.rotation_hat},
                   {"rotation_injected_rad_per_s", s.sim->rotation_rad_per_s}};
  if (s.output.write_trajectory) {
    Trajectory tr;
    if (config.decimation == 1) {
      tr = rec.trajectory;
    } else {
      for (std::size_t i = 0; i < rec.trajectory.t.size(); i += config.decimation) {
        tr.t.push_back(rec.trajectory.t[i]);
        tr.x.push_back(rec.trajectory.x[i]);
        tr.phi_J.push_back(rec.trajectory.phi_J[i]);
      }
    }
    const auto path = out_dir / "trajectory.csv";
    auto out = open_output(path);
    write_trajectory_csv(out, tr);
    r["trajectory_file"] = path.string();
  }
  if (s.sim->trials > 0) {
    const auto mc = monte_carlo_sensitivity(config, s.sim->trials);
    r["monte_carlo"] = {{"trials", mc.trials},
                        {"failed", mc.failed},
                        {"trial_duration_s", mc.trial_duration},
                        {"sqrtS_omega_rad_per_s_rtHz", mc.sqrt_S_omega},
                        {"ci95_low", mc.ci_low},
                        {"ci95_high", mc.ci_high},
                        {"analytic_sqrtS_omega_rad_per_s_rtHz", mc.analytic_sqrt_S_omega},
                        {"ratio_to_analytic", mc.analytic_sqrt_S_omega > 0 ? mc.sqrt_S_omega / mc.analytic_sqrt_S_omega
                                                                           : std::numeric_limits<double>::quiet_NaN()},
                        {"mean_rotation_rad_per_s", mc.mean_rotation}};
  }
  return r;
}

Report cmd_optimize(const Scenario& s, const PhysicalConstants& pc, const DesignSpaceFile& file, std::uint64_t seed,
                    const std::filesystem::path& out_dir) {
  DesignSpace space;
  space.baseline = {s.geometry.to_geometry(), s.operating};
  space.free = file.free;
  space.phiA_max = file.phiA_max;
  const auto result = optimize_design(space, pc, seed, file.max_evaluations);

  Scenario optimized = s;
  apply_design_point(optimized, result.best);
  const std::string text = to_json(optimized);
  validate_scenario(parse_scenario(text, "optimized scenario"), pc);
  const auto path = out_dir / "optimized_scenario.json";
  auto out = open_output(path);
  out << text;

  Report r;
  r["command"] = "optimize";
  r["objective"] = "sqrtS_omega_rad_per_s_rtHz";
  r["baseline_value"] = result.baseline_objective;
  r["optimized_value"] = result.objective;
  r["improvement_factor"] = result.baseline_objective / result.objective;
  r["evaluations"] = result.evaluations;
  Report params = Report::object();
  for (const auto& [p, b] : space.free) {
    double v = result.best.get(p);
    if (p == DesignParameter::diaphragm_omega) v = optimized.geometry.diaphragm_resonance_Hz;
    params[std::string(parameter_key(p))] = v;
  }
  r["free_parameters"] = params;
  r["active_constraints"] = result.active_constraints;
  r["scenario_file"] = path.string();
  return r;
}

}  // namespace gyro
