// Command-line front end: loads an experiment config (or the built-in preset),
// runs one of the canned experiments, prints the report, and optionally writes
// CSV/SVG artifacts under --out.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sfwm/experiments.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  int grid_n = 0;  // 0 = keep config value
  std::string format = "csv";
};

sfwm::ExperimentConfig load(const GlobalOptions& opt) {
  sfwm::ExperimentConfig cfg =
      opt.config_path.empty() ? sfwm::preset_config() : sfwm::load_config(opt.config_path);
  if (const char* env = std::getenv("SFWM_GRID_N"); env && *env && opt.grid_n == 0) {
    try {
      cfg.grid_n = std::stoi(env);
    } catch (const std::exception&) {
      throw sfwm::ValidationError(std::string("SFWM_GRID_N is not an integer: ") + env);
    }
    if (cfg.grid_n < 16) throw sfwm::ValidationError("SFWM_GRID_N must be >= 16");
  }
  if (opt.grid_n != 0) {
    if (opt.grid_n < 16) throw sfwm::ValidationError("--grid must be >= 16");
    cfg.grid_n = opt.grid_n;
  }
  return cfg;
}

void emit(const sfwm::RunReport& report, const GlobalOptions& opt) {
  for (const auto& line : report.info) std::cout << line << "\n";
  for (const auto& warning : report.warnings) std::cout << "warning: " << warning << "\n";
  if (!report.table.columns.empty()) {
    std::cout << "\n";
    for (size_t i = 0; i < report.table.columns.size(); ++i)
      std::cout << (i ? "," : "") << report.table.columns[i];
    std::cout << "\n";
    for (const auto& row : report.table.rows) {
      for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
      std::cout << "\n";
    }
  }
  if (opt.out_dir.empty()) return;
  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path base = std::filesystem::path(opt.out_dir) / report.experiment;
  if ((opt.format == "csv" || opt.format == "both") && !report.table.columns.empty()) {
    const auto path = base.string() + ".csv";
    sfwm::write_csv(path, report.table);
    std::cout << "wrote " << path << "\n";
  }
  if ((opt.format == "svg" || opt.format == "both") && !report.series.empty()) {
    const auto path = base.string() + ".svg";
    sfwm::write_svg(path, report.experiment, report.x_label, report.y_label, report.series);
    std::cout << "wrote " << path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulse-pumped photon-pair source: chirp, g2, and two-photon interference"};
  app.require_subcommand(1);

  GlobalOptions opt;
  app.add_option("--config", opt.config_path, "INI config (defaults to the built-in preset)");
  app.add_option("--out", opt.out_dir, "directory for CSV/SVG artifacts");
  app.add_option("--grid", opt.grid_n, "override grid size per axis (>= 16)");
  app.add_option("--format", opt.format, "artifact format")
      ->check(CLI::IsMember({"csv", "svg", "both"}));

  auto* chirp = app.add_subcommand("chirp", "pump chirp and duration along the scan fiber");
  std::optional<double> invert_ps;
  chirp->add_option("--invert", invert_ps,
                    "autocorrelator FWHM (ps) to invert into |chirp| at the pump settings");

  auto* g2 = app.add_subcommand("g2", "g2 at the configured point or over the configured sweep");
  auto* fig2a = app.add_subcommand("fig2a", "pulse broadening factor vs fiber length");
  auto* fig2b = app.add_subcommand("fig2b", "g2 vs pump chirp, closed form and numerical");
  auto* fig4 = app.add_subcommand("fig4", "two-photon interference dips for the configured cases");

  auto* hom_scan = app.add_subcommand("hom-scan", "single interference dip with explicit chirps");
  double c1 = 0.0, c2 = 0.0;
  hom_scan->add_option("--c1", c1, "beam 1 chirp parameter");
  hom_scan->add_option("--c2", c2, "beam 2 chirp parameter");

  auto* jsa_dump = app.add_subcommand("jsa-dump", "write the joint spectral amplitude grid");
  std::string model = "gaussian";
  jsa_dump->add_option("--model", model, "amplitude model")
      ->check(CLI::IsMember({"gaussian", "sinc"}));

  // Let "sfwm fig2a --out dir" work: unmatched subcommand options fall back to
  // the global set above.
  for (CLI::App* sub : {chirp, g2, fig2a, fig2b, fig4, hom_scan, jsa_dump}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help exits 0; every usage error maps onto the config-error code 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const sfwm::ExperimentConfig cfg = load(opt);
    if (chirp->parsed()) {
      sfwm::RunReport report = sfwm::run_chirp(cfg);
      if (invert_ps) {
        const double c = sfwm::chirp_from_measured_duration(cfg.pump_center_nm, cfg.pump_fwhm_nm,
                                                            *invert_ps);
        report.info.push_back("measured " + sfwm::format_double(*invert_ps) +
                              " ps implies |chirp| = " + sfwm::format_double(c));
      }
      emit(report, opt);
    } else if (g2->parsed()) {
      emit(sfwm::run_g2(cfg), opt);
    } else if (fig2a->parsed()) {
      emit(sfwm::run_fig2a(cfg, cfg.chirp_scan_lengths_km), opt);
    } else if (fig2b->parsed()) {
      const sfwm::DerivedParams d = sfwm::derive_params(cfg);
      emit(sfwm::run_fig2b(cfg, sfwm::chirp_scan_chirps(cfg, d)), opt);
    } else if (fig4->parsed()) {
      emit(sfwm::run_fig4(cfg), opt);
    } else if (hom_scan->parsed()) {
      emit(sfwm::run_hom_scan(cfg, c1, c2), opt);
    } else if (jsa_dump->parsed()) {
      sfwm::RunReport report;
      const sfwm::Jsa jsa = sfwm::run_jsa_dump(
          cfg, model == "sinc" ? sfwm::JsaModel::sinc : sfwm::JsaModel::gaussian, &report);
      emit(report, opt);
      const std::string dir = opt.out_dir.empty() ? "." : opt.out_dir;
      std::filesystem::create_directories(dir);
      const auto path = (std::filesystem::path(dir) / ("jsa_" + model + ".txt")).string();
      sfwm::write_jsa(path, jsa);
      std::cout << "wrote " << path << "\n";
    }
  } catch (const sfwm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sfwm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
