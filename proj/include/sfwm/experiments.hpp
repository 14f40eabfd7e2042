#pragma once

// Orchestration of the canned experiments: derived constants with validity
// checks, chirp scans, g2-vs-chirp tables, the three-case interference dip, and
// the report container the CLI renders to stdout/CSV/SVG.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sfwm/coherence.hpp"
#include "sfwm/config.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/hom.hpp"
#include "sfwm/io.hpp"
#include "sfwm/spectral.hpp"

namespace sfwm {

// Everything the physics needs, computed once from a config. delta is signed
// (signal minus idler center frequency); the bandwidth positivity and
// approximation-validity checks run against these values.
struct DerivedParams {
  double beta2 = 0.0, beta3 = 0.0;       // of the source fiber at the pump wavelength
  double sigma_p = 0.0;                  // pump, rad/ps
  double sigma_s = 0.0, sigma_i = 0.0;   // filters, rad/ps
  double delta = 0.0;                    // rad/ps
  PhaseMatchCoeffs coeffs;
  double dk_center = 0.0;                // phase mismatch at band centers, rad/km
  double grid_span = 0.0;                // rad/ps, per axis
  int grid_n = 0;
};

inline double default_grid_span(double sigma_p, double sigma_s, double sigma_i) {
  // The pump ridge needs ~7.5 sigma_p before the filtered product decays below
  // the 1e-4 boundary gate; wide filters need their own 6 sigma.
  return std::max({7.5 * sigma_p, 6.0 * sigma_s, 6.0 * sigma_i});
}

inline DerivedParams derive_params(const ExperimentConfig& cfg,
                                   std::vector<std::string>* warnings = nullptr) {
  DerivedParams d;
  d.beta2 = cfg.source_fiber.beta2_ps2_km;
  d.beta3 = cfg.source_fiber.beta3_ps3_km;
  d.sigma_p = sigma_from_fwhm(cfg.pump_center_nm, cfg.pump_fwhm_nm);
  d.sigma_s = sigma_from_fwhm(cfg.signal_center_nm, cfg.signal_fwhm_nm);
  d.sigma_i = sigma_from_fwhm(cfg.idler_center_nm, cfg.idler_fwhm_nm);
  d.delta = 2.0 * M_PI * kSpeedOfLightNmPerPs *
            (1.0 / cfg.signal_center_nm - 1.0 / cfg.idler_center_nm);
  d.coeffs = phase_match_coeffs(cfg.source_fiber, d.delta);
  d.dk_center = phase_mismatch(cfg.source_fiber, d.delta, 0.0, 0.0);
  d.grid_n = cfg.grid_n;
  d.grid_span = cfg.grid_span_rad_ps.value_or(default_grid_span(d.sigma_p, d.sigma_s, d.sigma_i));

  if (warnings) {
    const auto warn = [&](const std::string& msg) { warnings->push_back(msg); };
    if (cfg.source_fiber.zero_dispersion_wavelength_nm &&
        cfg.pump_center_nm < *cfg.source_fiber.zero_dispersion_wavelength_nm)
      warn("pump sits below the zero-dispersion wavelength: beta2 > 0 (normal dispersion), "
           "the anomalous-dispersion phase-matching picture does not apply");
    if (d.coeffs.a_idler_rad_ps <= 0.0 || d.coeffs.b_signal_rad_ps <= 0.0)
      warn("phase-matching bandwidths not both positive (A = " +
           format_double(d.coeffs.a_idler_rad_ps) + ", B = " +
           format_double(d.coeffs.b_signal_rad_ps) + " rad/ps)");
    else {
      if (d.coeffs.a_idler_rad_ps < 4.0 * d.sigma_p || d.coeffs.b_signal_rad_ps < 4.0 * d.sigma_p)
        warn("phase-matching bandwidth not >> pump width; the Gaussian-model factorization "
             "degrades");
      if (d.sigma_s > d.coeffs.b_signal_rad_ps / 4.0)
        warn("signal filter is not narrow against the phase-matching bandwidth");
    }
    const double half_phase = std::abs(d.dk_center) * cfg.source_fiber.length_km / 2.0;
    if (half_phase > 0.2 * M_PI)
      warn("central phase mismatch times L/2 is " + format_double(half_phase) +
           " rad; the near-phase-matched approximation is strained");
  }
  return d;
}

inline PulseSpec pump_pulse(const ExperimentConfig& cfg, const DerivedParams& d) {
  return {cfg.pump_center_nm, d.sigma_p, cfg.pump_initial_chirp};
}

inline SpectralGrid default_grid(const DerivedParams& d) {
  return SpectralGrid::symmetric(d.grid_n, d.grid_span);
}

enum class JsaModel { gaussian, sinc };

inline Jsa build_model_jsa(const ExperimentConfig& cfg, const DerivedParams& d, JsaModel model,
                           const SpectralGrid& grid) {
  const PulseSpec pump = pump_pulse(cfg, d);
  if (model == JsaModel::gaussian) return build_jsa_gaussian(pump, d.coeffs, grid);
  return build_jsa_sinc(pump, cfg.source_fiber, d.delta, grid);
}

// A run's printable outcome: echo lines, labeled tables, warnings. Tables carry
// pre-rendered cells so CSV emission is byte-deterministic.
struct RunReport {
  std::string experiment;
  std::vector<std::string> info;
  std::vector<std::string> warnings;
  CsvTable table;
  std::vector<SvgSeries> series;  // optional plot payload
  std::string x_label, y_label;

  void echo_derived(const DerivedParams& d) {
    info.push_back("beta2 = " + format_double(d.beta2) + " ps^2/km, beta3 = " +
                   format_double(d.beta3) + " ps^3/km");
    info.push_back("sigma_p = " + format_double(d.sigma_p) + " rad/ps, sigma_s = " +
                   format_double(d.sigma_s) + " rad/ps, sigma_i = " + format_double(d.sigma_i) +
                   " rad/ps");
    info.push_back("delta = " + format_double(d.delta) + " rad/ps, A(idler) = " +
                   format_double(d.coeffs.a_idler_rad_ps) + " rad/ps, B(signal) = " +
                   format_double(d.coeffs.b_signal_rad_ps) + " rad/ps");
    info.push_back("central phase mismatch = " + format_double(d.dk_center) + " rad/km, grid " +
                   std::to_string(d.grid_n) + "^2, span +-" + format_double(d.grid_span) +
                   " rad/ps");
  }
};

inline std::vector<FiberSpec> chirp_scan_chain(const ExperimentConfig& cfg, double length_km) {
  if (cfg.chirp_scan_fiber.empty())
    throw ValidationError(cfg.origin + ": no [chirp_scan] section configured");
  FiberSpec fiber = cfg.fibers.at(cfg.chirp_scan_fiber);
  fiber.length_km = length_km;
  return {fiber};
}

// Pump chirp after each configured fiber length, with both duration
// conventions: the sigma-based chirped duration and what an autocorrelator
// would report for the same spectrum.
inline RunReport run_chirp(const ExperimentConfig& cfg) {
  RunReport report;
  report.experiment = "chirp";
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  report.table.columns = {"length_km", "chirp", "sqrt_1_plus_c2", "duration_ps",
                          "autocorrelator_ps"};
  for (double z : cfg.chirp_scan_lengths_km) {
    const auto chain = chirp_scan_chain(cfg, z);
    const double c = accumulate_chirp(cfg.pump_initial_chirp, d.sigma_p, chain);
    const PulseSpec pulse{cfg.pump_center_nm, d.sigma_p, c};
    report.table.rows.push_back({format_double(z), format_double(c),
                                 format_double(std::sqrt(1.0 + c * c)),
                                 format_double(pulse_duration(pulse)),
                                 format_double(autocorrelator_duration(
                                     cfg.pump_center_nm, cfg.pump_fwhm_nm, c))});
  }
  report.x_label = "fiber length (km)";
  report.y_label = "sqrt(1 + C^2)";
  SvgSeries s{"pump chirp", {}};
  for (const auto& row : report.table.rows)
    s.points.emplace_back(parse_double(row[0]), parse_double(row[2]));
  report.series.push_back(std::move(s));
  return report;
}

// Broadening factor per fiber length: the chirp-accumulation scan reduced to
// the quantity the measurement plots.
inline RunReport run_fig2a(const ExperimentConfig& cfg, const std::vector<double>& lengths_km) {
  RunReport report;
  report.experiment = "fig2a";
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  report.table.columns = {"length_km", "sqrt_1_plus_cp2"};
  for (double z : lengths_km) {
    const double c = accumulate_chirp(cfg.pump_initial_chirp, d.sigma_p, chirp_scan_chain(cfg, z));
    report.table.rows.push_back({format_double(z), format_double(std::sqrt(1.0 + c * c))});
  }
  report.x_label = "fiber length (km)";
  report.y_label = "sqrt(1 + C_p^2)";
  SvgSeries s{"sqrt(1 + C_p^2)", {}};
  for (const auto& row : report.table.rows)
    s.points.emplace_back(parse_double(row[0]), parse_double(row[1]));
  report.series.push_back(std::move(s));
  return report;
}

inline std::vector<double> chirp_scan_chirps(const ExperimentConfig& cfg, const DerivedParams& d) {
  std::vector<double> chirps;
  for (double z : cfg.chirp_scan_lengths_km)
    chirps.push_back(accumulate_chirp(cfg.pump_initial_chirp, d.sigma_p, chirp_scan_chain(cfg, z)));
  return chirps;
}

// g2 of the filtered signal beam against pump chirp: closed form next to the
// grid quadrature on the Gaussian-model amplitude.
inline RunReport run_fig2b(const ExperimentConfig& cfg, const std::vector<double>& chirp_values) {
  RunReport report;
  report.experiment = "fig2b";
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  report.table.columns = {"sqrt_1_plus_cp2", "g2_closed_form", "g2_numerical"};
  const SpectralGrid grid = default_grid(d);
  const FilterSpec filter{d.sigma_s, 0.0};
  ExperimentConfig point = cfg;
  for (double c : chirp_values) {
    point.pump_initial_chirp = c;
    const Jsa jsa = build_model_jsa(point, d, JsaModel::gaussian, grid);
    const double closed = g2_closed_form(d.sigma_s, d.sigma_p, c);
    const double numerical = g2_numerical(jsa, filter).g2;
    report.table.rows.push_back({format_double(std::sqrt(1.0 + c * c)), format_double(closed),
                                 format_double(numerical)});
  }
  report.x_label = "sqrt(1 + C_p^2)";
  report.y_label = "g2";
  SvgSeries closed{"closed form", {}}, numerical{"numerical", {}};
  for (const auto& row : report.table.rows) {
    closed.points.emplace_back(parse_double(row[0]), parse_double(row[1]));
    numerical.points.emplace_back(parse_double(row[0]), parse_double(row[2]));
  }
  report.series.push_back(std::move(closed));
  report.series.push_back(std::move(numerical));
  return report;
}

// Free-form g2: all three routes at the configured point, or swept over the
// configured sweep variable.
inline RunReport run_g2(const ExperimentConfig& cfg) {
  RunReport report;
  report.experiment = "g2";
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  const SpectralGrid grid = default_grid(d);
  const FilterSpec filter{d.sigma_s, 0.0};

  std::vector<std::pair<std::string, double>> points;  // (sweep label, pump chirp)
  if (cfg.sweep && cfg.sweep->variable == "pump_chirp") {
    for (double v : cfg.sweep->values) points.emplace_back(format_double(v), v);
  } else if (cfg.sweep && cfg.sweep->variable == "smf_length_km") {
    for (double v : cfg.sweep->values)
      points.emplace_back(format_double(v), accumulate_chirp(cfg.pump_initial_chirp, d.sigma_p,
                                                             chirp_scan_chain(cfg, v)));
  } else {
    points.emplace_back(format_double(cfg.pump_initial_chirp), cfg.pump_initial_chirp);
  }
  const std::string sweep_col = cfg.sweep ? cfg.sweep->variable : "pump_chirp";
  report.table.columns = {sweep_col,      "g2_closed_form", "g2_numerical",
                          "g2_schmidt",   "schmidt_number", "purity"};
  ExperimentConfig point_cfg = cfg;
  for (const auto& [label, chirp] : points) {
    point_cfg.pump_initial_chirp = chirp;
    const Jsa jsa = build_model_jsa(point_cfg, d, JsaModel::gaussian, grid);
    const CoherenceResult numerical = g2_numerical(jsa, filter);
    const CoherenceResult schmidt = schmidt_decompose(jsa, filter);
    report.table.rows.push_back({label, format_double(g2_closed_form(d.sigma_s, d.sigma_p, chirp)),
                                 format_double(numerical.g2), format_double(schmidt.g2),
                                 format_double(schmidt.schmidt_number),
                                 format_double(schmidt.purity)});
  }
  report.x_label = sweep_col;
  report.y_label = "g2";
  return report;
}

struct HomCaseResult {
  std::string label;
  double chirp1 = 0.0, chirp2 = 0.0;
  double s_factor = 0.0, visibility = 0.0, fwhm_ps = 0.0, g2 = 0.0;
  std::vector<std::pair<double, double>> analytic;
  std::vector<std::pair<double, double>> numerical;
};

// The three-case interference dip. Both arms share the source amplitude (same
// pump, same fiber); each arm's transmission chain sets its beam chirp. The g2
// inside the analytic curve comes from the quadrature route on the same
// amplitude, so the two curves in each case share their input physics. The
// Gaussian model is the default here: its curves are exactly even in delay,
// matching the analytic form (the exact-sinc amplitude carries a small genuine
// asymmetry and stays available through jsa-dump for comparison).
inline std::vector<HomCaseResult> run_hom_cases(const ExperimentConfig& cfg,
                                                const DerivedParams& d,
                                                const std::vector<HomCase>& cases) {
  const SpectralGrid grid = default_grid(d);
  const Jsa jsa = build_model_jsa(cfg, d, JsaModel::gaussian, grid);
  const double g2 = g2_numerical(jsa, {d.sigma_s, 0.0}).g2;
  const double pump_dur = pulse_duration(pump_pulse(cfg, d));
  const auto delays = delay_scan(cfg.hom_delay_span_ps, cfg.hom_delay_step_ps);

  std::vector<HomCaseResult> results;
  for (const HomCase& hom_case : cases) {
    HomCaseResult r;
    r.label = hom_case.label;
    r.g2 = g2;
    r.chirp1 = accumulate_chirp(0.0, d.sigma_s, hom_case.arm1);
    r.chirp2 = accumulate_chirp(0.0, d.sigma_s, hom_case.arm2);
    const FilterSpec f1{d.sigma_s, r.chirp1}, f2{d.sigma_s, r.chirp2};
    HomConfig hc{f1, f2, pump_dur, g2, cfg.hom_eta, cfg.hom_reflectance,
                 1.0 - cfg.hom_reflectance, cfg.hom_delay_span_ps, cfg.hom_delay_step_ps};
    r.s_factor = mode_matching_s(hc);
    r.visibility = visibility(g2, r.s_factor);
    r.fwhm_ps = fwhm(d.sigma_s, g2, r.s_factor);
    const HomNumericalKernel kernel(jsa, jsa, f1, f2);
    for (double dt : delays) {
      r.analytic.emplace_back(dt, coincidence_at(dt, d.sigma_s, g2, r.s_factor, cfg.hom_eta,
                                                 cfg.hom_reflectance, 1.0 - cfg.hom_reflectance));
      r.numerical.emplace_back(dt, kernel.at(dt, cfg.hom_eta, cfg.hom_reflectance));
    }
    results.push_back(std::move(r));
  }
  return results;
}

inline RunReport hom_report(const ExperimentConfig& cfg, const std::string& experiment,
                            const std::vector<HomCase>& cases) {
  RunReport report;
  report.experiment = experiment;
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  report.table.columns = {"delta_tau_ps", "normalized_coincidence", "case_label"};
  for (const HomCaseResult& r : run_hom_cases(cfg, d, cases)) {
    report.info.push_back(r.label + ": arm chirps " + format_double(r.chirp1) + " / " +
                          format_double(r.chirp2) + ", g2 = " + format_double(r.g2) +
                          ", S = " + format_double(r.s_factor) + ", V = " +
                          format_double(r.visibility) + ", dip FWHM = " +
                          format_double(r.fwhm_ps) + " ps");
    SvgSeries analytic{r.label, {}}, numerical{r.label + "-numerical", {}};
    for (const auto& [dt, v] : r.analytic) {
      report.table.rows.push_back({format_double(dt), format_double(v), r.label});
      analytic.points.emplace_back(dt, v);
    }
    for (const auto& [dt, v] : r.numerical) {
      report.table.rows.push_back({format_double(dt), format_double(v), r.label + "-numerical"});
      numerical.points.emplace_back(dt, v);
    }
    report.series.push_back(std::move(analytic));
    report.series.push_back(std::move(numerical));
  }
  report.x_label = "delay (ps)";
  report.y_label = "normalized coincidence";
  return report;
}

inline RunReport run_fig4(const ExperimentConfig& cfg) {
  if (cfg.hom_cases.empty())
    throw ValidationError(cfg.origin + ": no [hom_case.*] sections configured");
  return hom_report(cfg, "fig4", cfg.hom_cases);
}

// Single-case scan with explicit arm chirps (what-if tool around the same
// machinery; chirps are applied directly instead of via fiber chains).
inline RunReport run_hom_scan(const ExperimentConfig& cfg, double chirp1, double chirp2) {
  RunReport report;
  report.experiment = "hom-scan";
  const DerivedParams d = derive_params(cfg, &report.warnings);
  report.echo_derived(d);
  const SpectralGrid grid = default_grid(d);
  const Jsa jsa = build_model_jsa(cfg, d, JsaModel::gaussian, grid);
  const double g2 = g2_numerical(jsa, {d.sigma_s, 0.0}).g2;
  const double pump_dur = pulse_duration(pump_pulse(cfg, d));
  const FilterSpec f1{d.sigma_s, chirp1}, f2{d.sigma_s, chirp2};
  HomConfig hc{f1, f2, pump_dur, g2, cfg.hom_eta, cfg.hom_reflectance,
               1.0 - cfg.hom_reflectance, cfg.hom_delay_span_ps, cfg.hom_delay_step_ps};
  const double s = mode_matching_s(hc);
  report.info.push_back("arm chirps " + format_double(chirp1) + " / " + format_double(chirp2) +
                        ", g2 = " + format_double(g2) + ", S = " + format_double(s) + ", V = " +
                        format_double(visibility(g2, s)) + ", dip FWHM = " +
                        format_double(fwhm(d.sigma_s, g2, s)) + " ps");
  report.table.columns = {"delta_tau_ps", "normalized_coincidence", "case_label"};
  const HomNumericalKernel kernel(jsa, jsa, f1, f2);
  SvgSeries analytic{"analytic", {}}, numerical{"numerical", {}};
  for (double dt : delay_scan(cfg.hom_delay_span_ps, cfg.hom_delay_step_ps)) {
    const double a = coincidence_at(dt, d.sigma_s, g2, s, cfg.hom_eta, cfg.hom_reflectance,
                                    1.0 - cfg.hom_reflectance);
    const double n = kernel.at(dt, cfg.hom_eta, cfg.hom_reflectance);
    report.table.rows.push_back({format_double(dt), format_double(a), "analytic"});
    report.table.rows.push_back({format_double(dt), format_double(n), "numerical"});
    analytic.points.emplace_back(dt, a);
    numerical.points.emplace_back(dt, n);
  }
  report.series.push_back(std::move(analytic));
  report.series.push_back(std::move(numerical));
  report.x_label = "delay (ps)";
  report.y_label = "normalized coincidence";
  return report;
}

// The raw amplitude for external study. Warns (not errors) when the unfiltered
// matrix still carries weight at the boundary; only the filtered quadratures
// enforce the hard truncation gate.
inline Jsa run_jsa_dump(const ExperimentConfig& cfg, JsaModel model, RunReport* report) {
  const DerivedParams d = derive_params(cfg, report ? &report->warnings : nullptr);
  const SpectralGrid grid = default_grid(d);
  const Jsa jsa = build_model_jsa(cfg, d, model, grid);
  if (report) {
    report->experiment = "jsa-dump";
    report->echo_derived(d);
    const double edge = boundary_ratio(jsa.amplitude);
    if (edge > 1e-4)
      report->warnings.push_back("unfiltered amplitude is " + format_double(edge) +
                                 " of peak at the grid boundary; quadratures apply their "
                                 "filters before gating on truncation");
  }
  return jsa;
}

}  // namespace sfwm
