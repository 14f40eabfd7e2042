#pragma once

// Experiment configuration: a small INI-style reader (sections, key = value,
// full-line comments) plus the typed config it populates. Keys carry explicit
// unit suffixes; that convention is load-bearing, unit slips are the dominant
// failure mode in this domain.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

class IniFile {
public:
  static IniFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
  }

  static IniFile parse_text(const std::string& text, const std::string& origin = "<builtin>") {
    IniFile ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ValidationError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty())
          throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty section name");
        ini.sections_[section];
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      if (section.empty())
        throw ValidationError(origin + ":" + std::to_string(lineno) + ": key outside any section");
      ini.sections_[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return ini;
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  double get_double(const std::string& section, const std::string& key) const {
    const std::string raw = require(section, key);
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw ValidationError(origin_ + ": field " + section + "." + key + " = '" + raw +
                            "' is not a number");
    }
  }

  double get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  int get_int(const std::string& section, const std::string& key) const {
    const double v = get_double(section, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ValidationError(origin_ + ": field " + section + "." + key + " must be an integer");
    return i;
  }

  std::vector<double> get_double_list(const std::string& section, const std::string& key) const {
    const std::string raw = require(section, key);
    std::vector<double> values;
    std::istringstream in(raw);
    std::string token;
    while (in >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ValidationError(origin_ + ": field " + section + "." + key + ": '" + token +
                              "' is not a number");
      }
    }
    return values;
  }

  std::vector<std::string> section_names(const std::string& prefix) const {
    std::vector<std::string> names;
    for (const auto& [name, _] : sections_)
      if (name.rfind(prefix, 0) == 0) names.push_back(name);
    return names;
  }

  const std::string& origin() const { return origin_; }

  std::string require(const std::string& section, const std::string& key) const {
    const auto v = get(section, key);
    if (!v)
      throw ValidationError(origin_ + ": missing required field " + section + "." + key);
    return *v;
  }

private:
  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// One arm of the interference experiment or the chirp-scan chain: named fiber
// segments with lengths resolved against the [fiber.*] table.
struct HomCase {
  std::string label;
  std::vector<FiberSpec> arm1;
  std::vector<FiberSpec> arm2;
};

struct SweepSpec {
  std::string variable;  // pump_chirp | smf_length_km
  std::vector<double> values;
};

struct ExperimentConfig {
  // pump laser
  double pump_center_nm = 0.0;
  double pump_fwhm_nm = 0.0;
  double pump_initial_chirp = 0.0;

  // pair-generating fiber
  FiberSpec source_fiber;

  // detection filters
  double signal_center_nm = 0.0;
  double signal_fwhm_nm = 0.0;
  double idler_center_nm = 0.0;
  double idler_fwhm_nm = 0.0;

  // named transmission fibers and the chirp-scan set
  std::map<std::string, FiberSpec> fibers;
  std::string chirp_scan_fiber;
  std::vector<double> chirp_scan_lengths_km;

  // grid
  int grid_n = 512;
  std::optional<double> grid_span_rad_ps;

  // interferometer
  double hom_eta = 1.0;
  double hom_reflectance = 0.5;
  double hom_delay_span_ps = 40.0;
  double hom_delay_step_ps = 0.5;
  std::vector<HomCase> hom_cases;

  std::optional<SweepSpec> sweep;

  std::string origin;
};

namespace detail {

inline std::vector<FiberSpec> parse_chain(const ExperimentConfig& cfg, const std::string& raw,
                                          const std::string& field) {
  std::vector<FiberSpec> chain;
  std::string normalized = raw;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
      throw ValidationError(cfg.origin + ": field " + field + ": segment '" + token +
                            "' must be fiber:length_km");
    const std::string name = token.substr(0, colon);
    const auto fiber = cfg.fibers.find(name);
    if (fiber == cfg.fibers.end())
      throw ValidationError(cfg.origin + ": field " + field + ": unknown fiber '" + name +
                            "' (declare a [fiber." + name + "] section)");
    FiberSpec segment = fiber->second;
    try {
      segment.length_km = std::stod(token.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError(cfg.origin + ": field " + field + ": bad length in '" + token + "'");
    }
    segment.validate();
    chain.push_back(segment);
  }
  return chain;
}

}  // namespace detail

inline ExperimentConfig config_from_ini(const IniFile& ini) {
  // Collect every missing required field before failing, so an empty file
  // reports the full schema instead of one key at a time.
  static const std::vector<std::pair<std::string, std::string>> required = {
      {"pump", "center_wavelength_nm"},   {"pump", "fwhm_nm"},
      {"source_fiber", "length_km"},      {"signal_filter", "center_wavelength_nm"},
      {"signal_filter", "fwhm_nm"},       {"idler_filter", "center_wavelength_nm"},
      {"idler_filter", "fwhm_nm"},
  };
  std::string missing;
  for (const auto& [section, key] : required)
    if (!ini.has(section, key)) missing += (missing.empty() ? "" : ", ") + section + "." + key;
  if (!missing.empty())
    throw ValidationError(ini.origin() + ": missing required fields: " + missing);

  ExperimentConfig cfg;
  cfg.origin = ini.origin();
  cfg.pump_center_nm = ini.get_double("pump", "center_wavelength_nm");
  cfg.pump_fwhm_nm = ini.get_double("pump", "fwhm_nm");
  cfg.pump_initial_chirp = ini.get_double_or("pump", "initial_chirp", 0.0);
  if (cfg.pump_center_nm <= 0.0 || cfg.pump_fwhm_nm <= 0.0)
    throw ValidationError(cfg.origin + ": pump wavelength and FWHM must be positive");

  cfg.source_fiber.name = "source";
  cfg.source_fiber.length_km = ini.get_double("source_fiber", "length_km");
  if (ini.has("source_fiber", "zero_dispersion_wavelength_nm") &&
      ini.has("source_fiber", "dispersion_slope_ps_nm2_km")) {
    cfg.source_fiber.zero_dispersion_wavelength_nm =
        ini.get_double("source_fiber", "zero_dispersion_wavelength_nm");
    cfg.source_fiber.dispersion_slope_ps_nm2_km =
        ini.get_double("source_fiber", "dispersion_slope_ps_nm2_km");
    cfg.source_fiber.reference_wavelength_nm = cfg.pump_center_nm;
    const Beta beta = derive_beta(cfg.pump_center_nm,
                                  *cfg.source_fiber.zero_dispersion_wavelength_nm,
                                  *cfg.source_fiber.dispersion_slope_ps_nm2_km);
    cfg.source_fiber.beta2_ps2_km = beta.beta2_ps2_km;
    cfg.source_fiber.beta3_ps3_km = beta.beta3_ps3_km;
  } else if (ini.has("source_fiber", "beta2_ps2_km") && ini.has("source_fiber", "beta3_ps3_km")) {
    cfg.source_fiber.beta2_ps2_km = ini.get_double("source_fiber", "beta2_ps2_km");
    cfg.source_fiber.beta3_ps3_km = ini.get_double("source_fiber", "beta3_ps3_km");
  } else {
    throw ValidationError(cfg.origin +
                          ": source_fiber needs zero_dispersion_wavelength_nm + "
                          "dispersion_slope_ps_nm2_km, or beta2_ps2_km + beta3_ps3_km");
  }
  if (ini.has("source_fiber", "gamma_per_w_km"))
    cfg.source_fiber.gamma_per_w_km = ini.get_double("source_fiber", "gamma_per_w_km");
  if (ini.has("source_fiber", "peak_power_w"))
    cfg.source_fiber.peak_power_w = ini.get_double("source_fiber", "peak_power_w");
  cfg.source_fiber.validate();

  cfg.signal_center_nm = ini.get_double("signal_filter", "center_wavelength_nm");
  cfg.signal_fwhm_nm = ini.get_double("signal_filter", "fwhm_nm");
  cfg.idler_center_nm = ini.get_double("idler_filter", "center_wavelength_nm");
  cfg.idler_fwhm_nm = ini.get_double("idler_filter", "fwhm_nm");
  for (double v : {cfg.signal_center_nm, cfg.signal_fwhm_nm, cfg.idler_center_nm, cfg.idler_fwhm_nm})
    if (v <= 0.0)
      throw ValidationError(cfg.origin + ": filter wavelengths and FWHMs must be positive");

  for (const std::string& section : ini.section_names("fiber.")) {
    FiberSpec fiber;
    fiber.name = section.substr(6);
    if (fiber.name.empty()) throw ValidationError(cfg.origin + ": [fiber.] needs a name");
    fiber.beta2_ps2_km = ini.get_double(section, "beta2_ps2_km");
    fiber.beta3_ps3_km = ini.get_double_or(section, "beta3_ps3_km", 0.0);
    cfg.fibers[fiber.name] = fiber;
  }

  if (ini.has("chirp_scan", "lengths_km")) {
    cfg.chirp_scan_fiber = ini.require("chirp_scan", "fiber");
    if (!cfg.fibers.count(cfg.chirp_scan_fiber))
      throw ValidationError(cfg.origin + ": field chirp_scan.fiber: unknown fiber '" +
                            cfg.chirp_scan_fiber + "'");
    cfg.chirp_scan_lengths_km = ini.get_double_list("chirp_scan", "lengths_km");
    for (double z : cfg.chirp_scan_lengths_km)
      if (z < 0.0) throw ValidationError(cfg.origin + ": chirp_scan lengths must be >= 0");
  }

  cfg.grid_n = ini.has("grid", "n") ? ini.get_int("grid", "n") : 512;
  if (cfg.grid_n < 16) throw ValidationError(cfg.origin + ": grid.n must be at least 16");
  if (ini.has("grid", "span_rad_ps")) {
    cfg.grid_span_rad_ps = ini.get_double("grid", "span_rad_ps");
    if (*cfg.grid_span_rad_ps <= 0.0)
      throw ValidationError(cfg.origin + ": grid.span_rad_ps must be positive");
  }

  cfg.hom_eta = ini.get_double_or("hom", "eta", 1.0);
  cfg.hom_reflectance = ini.get_double_or("hom", "reflectance", 0.5);
  cfg.hom_delay_span_ps = ini.get_double_or("hom", "delay_span_ps", 40.0);
  cfg.hom_delay_step_ps = ini.get_double_or("hom", "delay_step_ps", 0.5);
  if (cfg.hom_reflectance <= 0.0 || cfg.hom_reflectance >= 1.0)
    throw ValidationError(cfg.origin + ": hom.reflectance must lie in (0, 1)");

  for (const std::string& section : ini.section_names("hom_case.")) {
    HomCase hom_case;
    hom_case.label = ini.get(section, "label").value_or(section.substr(9));
    hom_case.arm1 = detail::parse_chain(cfg, ini.get(section, "arm1").value_or(""), section + ".arm1");
    hom_case.arm2 = detail::parse_chain(cfg, ini.get(section, "arm2").value_or(""), section + ".arm2");
    cfg.hom_cases.push_back(std::move(hom_case));
  }

  if (ini.has("sweep", "variable")) {
    SweepSpec sweep;
    sweep.variable = ini.require("sweep", "variable");
    if (sweep.variable != "pump_chirp" && sweep.variable != "smf_length_km")
      throw ValidationError(cfg.origin + ": field sweep.variable: '" + sweep.variable +
                            "' is not in the schema (pump_chirp, smf_length_km)");
    sweep.values = ini.get_double_list("sweep", "values");
    if (sweep.values.empty())
      throw ValidationError(cfg.origin + ": sweep.values must not be empty");
    if (sweep.variable == "smf_length_km" && cfg.chirp_scan_fiber.empty())
      throw ValidationError(cfg.origin + ": sweep over smf_length_km needs a [chirp_scan] fiber");
    cfg.sweep = std::move(sweep);
  }

  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  return config_from_ini(IniFile::parse_file(path));
}

// Reference configuration: 300 m dispersion-shifted source fiber pumped at
// 1538.9 nm (1 nm FWHM), 0.4 nm filters at 1546.9 / 1530.9 nm, standard and
// dispersion-compensating transmission fiber for the chirp cases.
inline const char* preset_text() {
  return R"(# Reference configuration for the pulse-pumped four-wave-mixing simulator.

[pump]
center_wavelength_nm = 1538.9
fwhm_nm = 1.0
# Chirp of the laser before any transmission fiber. No measured value is
# available (the pump is known not to be transform limited); this placeholder
# magnitude makes the closed-form g2 of the filtered signal beam equal the
# measured 1.94, and the sign keeps accumulation in standard fiber monotone.
initial_chirp = -0.8253373047532897

[source_fiber]
length_km = 0.3
zero_dispersion_wavelength_nm = 1538.0
dispersion_slope_ps_nm2_km = 0.075
gamma_per_w_km = 0.0
peak_power_w = 0.0

[signal_filter]
center_wavelength_nm = 1546.9
fwhm_nm = 0.4

[idler_filter]
center_wavelength_nm = 1530.9
fwhm_nm = 0.4

[fiber.smf]
beta2_ps2_km = -20.0

[fiber.dcf]
beta2_ps2_km = 100.0

[chirp_scan]
fiber = smf
lengths_km = 0.0 0.4 0.6 0.8 1.0 1.2 1.4

[grid]
n = 512

[hom]
eta = 1.0
reflectance = 0.5
delay_span_ps = 40.0
delay_step_ps = 0.5

[hom_case.1]
label = case1-matched-bare
arm1 =
arm2 =

[hom_case.2]
label = case2-matched-smf
arm1 = smf:1.5
arm2 = smf:1.5

[hom_case.3]
label = case3-mismatched
arm1 = smf:1.4
arm2 = dcf:0.28
)";
}

inline ExperimentConfig preset_config() {
  return config_from_ini(IniFile::parse_text(preset_text(), "<builtin preset>"));
}

}  // namespace sfwm
