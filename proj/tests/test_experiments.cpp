#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "sfwm/experiments.hpp"

using namespace sfwm;

namespace {

constexpr double kSigmaP = 0.47767998638948156;
constexpr double kSigmaS = 0.18910079623778128;

double cell(const RunReport& r, int row, int col) { return parse_double(r.table.rows[row][col]); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SFWM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(DeriveParams, PresetOperatingPoint) {
  const ExperimentConfig cfg = preset_config();
  std::vector<std::string> warnings;
  const DerivedParams d = derive_params(cfg, &warnings);
  EXPECT_NEAR(d.sigma_p, kSigmaP, 1e-12 * kSigmaP);
  EXPECT_NEAR(d.sigma_s, kSigmaS, 1e-12 * kSigmaS);
  // Shorter idler wavelength, slightly wider in angular frequency.
  const double ratio = (1546.9 / 1530.9) * (1546.9 / 1530.9);
  EXPECT_NEAR(d.sigma_i, kSigmaS * ratio, 1e-12 * d.sigma_i);
  EXPECT_NEAR(d.delta, -12.726573540922045, 1e-12 * 12.8);
  EXPECT_NEAR(d.coeffs.a_idler_rad_ps, 5.770252153933865, 1e-12 * 5.8);
  EXPECT_NEAR(d.coeffs.b_signal_rad_ps, 3.6506144515873227, 1e-12 * 3.7);
  EXPECT_NEAR(d.grid_span, 7.5 * kSigmaP, 1e-12 * d.grid_span);
  EXPECT_EQ(d.grid_n, 512);
  EXPECT_TRUE(warnings.empty());
}

TEST(DeriveParams, WarnsOnStrainedRegimes) {
  ExperimentConfig cfg = preset_config();
  cfg.pump_center_nm = 1537.0;  // below the zero-dispersion wavelength
  const Beta b = derive_beta(1537.0, 1538.0, 0.075);
  cfg.source_fiber.beta2_ps2_km = b.beta2_ps2_km;
  cfg.source_fiber.beta3_ps3_km = b.beta3_ps3_km;
  cfg.source_fiber.reference_wavelength_nm = 1537.0;
  std::vector<std::string> warnings;
  derive_params(cfg, &warnings);
  EXPECT_FALSE(warnings.empty());
}

TEST(RunChirp, ColumnsAreMutuallyConsistent) {
  const ExperimentConfig cfg = preset_config();
  const RunReport r = run_chirp(cfg);
  ASSERT_EQ(r.table.rows.size(), 7u);
  EXPECT_EQ(cell(r, 0, 1), cfg.pump_initial_chirp);  // zero length keeps the laser chirp
  const double t0 = 2.0874209923230294;              // transform-limited autocorrelator read
  for (int row = 0; row < 7; ++row) {
    const double c = cell(r, row, 1);
    const double broadening = cell(r, row, 2);
    EXPECT_NEAR(broadening, std::sqrt(1.0 + c * c), 1e-12 * broadening);
    EXPECT_NEAR(cell(r, row, 3) * kSigmaP, broadening, 1e-9 * broadening);
    EXPECT_NEAR(cell(r, row, 4), t0 * broadening, 1e-9 * cell(r, row, 4));
  }
}

TEST(RunFig2a, BroadeningTableReferenceValues) {
  const ExperimentConfig cfg = preset_config();
  const RunReport r = run_fig2a(cfg, cfg.chirp_scan_lengths_km);
  const double expected[7][2] = {
      {0.0, 1.2966038973477694}, {0.4, 2.8331153663904596}, {0.6, 3.701129081928741},
      {0.8, 4.586530185944507},  {1.0, 5.480898710587721},  {1.2, 6.380464800351509},
      {1.4, 7.283302844519625}};
  ASSERT_EQ(r.table.rows.size(), 7u);
  for (int row = 0; row < 7; ++row) {
    EXPECT_EQ(cell(r, row, 0), expected[row][0]);
    EXPECT_NEAR(cell(r, row, 1), expected[row][1], 1e-12 * expected[row][1]);
  }
  ASSERT_EQ(r.series.size(), 1u);
  EXPECT_EQ(r.series[0].points.size(), 7u);
}

TEST(RunFig2b, ClosedFormAndQuadratureTrackEachOther) {
  const ExperimentConfig cfg = preset_config();
  const DerivedParams d = derive_params(cfg);
  const RunReport r = run_fig2b(cfg, chirp_scan_chirps(cfg, d));
  ASSERT_EQ(r.table.rows.size(), 7u);
  EXPECT_NEAR(cell(r, 0, 1), 1.94, 1e-12 * 1.94);
  EXPECT_NEAR(cell(r, 0, 2), 1.9393541618691916, 1e-9);
  EXPECT_NEAR(cell(r, 1, 1), 1.7835145816014473, 1e-12 * 1.8);
  EXPECT_NEAR(cell(r, 1, 2), 1.784802258435613, 1e-9);
  EXPECT_NEAR(cell(r, 6, 1), 1.4403700979179124, 1e-12 * 1.5);
  EXPECT_NEAR(cell(r, 6, 2), 1.4427063094834205, 1e-9);
  for (int row = 1; row < 7; ++row) {
    EXPECT_GT(cell(r, row, 0), cell(r, row - 1, 0));  // broadening grows
    EXPECT_LT(cell(r, row, 1), cell(r, row - 1, 1));  // both g2 columns fall
    EXPECT_LT(cell(r, row, 2), cell(r, row - 1, 2));
    EXPECT_NEAR(cell(r, row, 2), cell(r, row, 1), 0.005 * cell(r, row, 1));
  }
}

TEST(RunG2, SinglePointReportsAllRoutes) {
  ExperimentConfig cfg = preset_config();
  cfg.grid_n = 256;
  const RunReport r = run_g2(cfg);
  ASSERT_EQ(r.table.rows.size(), 1u);
  const double closed = cell(r, 0, 1), quad = cell(r, 0, 2), schmidt = cell(r, 0, 3);
  const double mode_count = cell(r, 0, 4), purity = cell(r, 0, 5);
  EXPECT_NEAR(closed, 1.94, 1e-12 * 1.94);
  EXPECT_NEAR(quad, schmidt, 1e-9);
  EXPECT_NEAR(schmidt, 1.0 + purity, 1e-12);
  EXPECT_NEAR(mode_count * purity, 1.0, 1e-12);
}

TEST(RunG2, SweepOverPumpChirp) {
  ExperimentConfig cfg = preset_config();
  cfg.grid_n = 256;
  cfg.sweep = SweepSpec{"pump_chirp", {0.0, 2.0, 4.0}};
  const RunReport r = run_g2(cfg);
  ASSERT_EQ(r.table.rows.size(), 3u);
  EXPECT_EQ(r.table.columns[0], "pump_chirp");
  EXPECT_NEAR(cell(r, 0, 1), 1.9629828299300076, 1e-12 * 2.0);
  EXPECT_LT(cell(r, 1, 2), cell(r, 0, 2));
  EXPECT_LT(cell(r, 2, 2), cell(r, 1, 2));
}

TEST(RunHomCases, PresetInterferenceSummary) {
  const ExperimentConfig cfg = preset_config();
  const DerivedParams d = derive_params(cfg);
  const auto results = run_hom_cases(cfg, d, cfg.hom_cases);
  ASSERT_EQ(results.size(), 3u);

  EXPECT_EQ(results[0].chirp1, 0.0);
  EXPECT_EQ(results[0].s_factor, 1.0);
  EXPECT_NEAR(results[1].chirp1, -1.0727733341328862, 1e-12 * 1.1);
  EXPECT_EQ(results[1].chirp1, results[1].chirp2);
  EXPECT_EQ(results[1].s_factor, 1.0);
  EXPECT_NEAR(results[2].chirp1, -1.0012551118573605, 1e-12 * 1.1);
  EXPECT_NEAR(results[2].chirp2, 1.0012551118573605, 1e-12 * 1.1);
  EXPECT_NEAR(results[2].s_factor, 0.7281987808089702, 1e-12);

  EXPECT_NEAR(results[0].g2, 1.9393541618691916, 1e-9);
  EXPECT_NEAR(results[0].visibility, 0.3195784210201599, 1e-9);
  EXPECT_NEAR(results[0].fwhm_ps, 13.256687007025787, 1e-7);
  EXPECT_NEAR(results[2].visibility, 0.23271661655973616, 1e-9);
  EXPECT_NEAR(results[2].fwhm_ps, 18.204764078702077, 1e-7);

  ASSERT_EQ(results[0].numerical.size(), 161u);
  EXPECT_NEAR(results[0].numerical[80].second, 1.0, 1e-9);      // full dip at zero delay
  EXPECT_NEAR(results[2].numerical[80].second, 1.127491, 2e-5); // partial dip
  EXPECT_NEAR(results[2].numerical[0].second, 1.469677, 2e-5);  // asymptote at -40 ps
}

TEST(RunFig4, ReportShapeAndLabels) {
  ExperimentConfig cfg = preset_config();
  cfg.grid_n = 256;
  const RunReport r = run_fig4(cfg);
  EXPECT_EQ(r.experiment, "fig4");
  EXPECT_EQ(r.table.columns[2], "case_label");
  EXPECT_EQ(r.table.rows.size(), 3u * 2u * 161u);
  EXPECT_EQ(r.series.size(), 6u);
  EXPECT_EQ(r.series[1].label, "case1-matched-bare-numerical");
  EXPECT_EQ(r.info.size(), 4u + 3u);  // derived echo plus one line per case

  cfg.hom_cases.clear();
  EXPECT_THROW(run_fig4(cfg), ValidationError);
}

TEST(RunHomScan, ExplicitChirpsMatchTheCaseMachinery) {
  ExperimentConfig cfg = preset_config();
  cfg.grid_n = 256;
  cfg.hom_delay_span_ps = 10.0;
  cfg.hom_delay_step_ps = 1.0;
  const RunReport r = run_hom_scan(cfg, 0.0, 0.0);
  ASSERT_EQ(r.table.rows.size(), 2u * 21u);
  // Matched chirps: analytic and numerical rows agree at the grid level.
  for (std::size_t k = 0; k < 21; ++k) {
    const double analytic = cell(r, static_cast<int>(2 * k), 1);
    const double numerical = cell(r, static_cast<int>(2 * k + 1), 1);
    EXPECT_NEAR(numerical, analytic, 2e-3 * analytic);
  }
}

TEST(RunJsaDump, WarnsOnRawBoundaryWeight) {
  ExperimentConfig cfg = preset_config();
  cfg.grid_n = 64;
  RunReport report;
  const Jsa jsa = run_jsa_dump(cfg, JsaModel::gaussian, &report);
  EXPECT_EQ(report.experiment, "jsa-dump");
  EXPECT_EQ(jsa.amplitude.rows(), 64);
  // The unfiltered pump ridge runs along the whole anti-diagonal, so the raw
  // dump necessarily carries boundary weight and must say so.
  EXPECT_FALSE(report.warnings.empty());
}

TEST(Cli, ExitCodesFollowTheErrorTaxonomy) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("chirp"), 0);
  EXPECT_EQ(run_cli("definitely-not-a-subcommand"), 1);
  EXPECT_EQ(run_cli("g2 --config /nonexistent/path.ini"), 1);
  EXPECT_EQ(run_cli("g2 --grid 7"), 1);

  // A numerically unusable configuration (grid severely truncating the
  // filtered amplitude) exits with the dedicated code 2.
  const auto bad = std::filesystem::temp_directory_path() / "sfwm_truncated.ini";
  std::ofstream out(bad);
  out << "[pump]\ncenter_wavelength_nm = 1538.9\nfwhm_nm = 1.0\n"
      << "[source_fiber]\nlength_km = 0.3\nzero_dispersion_wavelength_nm = 1538.0\n"
      << "dispersion_slope_ps_nm2_km = 0.075\n"
      << "[signal_filter]\ncenter_wavelength_nm = 1546.9\nfwhm_nm = 0.4\n"
      << "[idler_filter]\ncenter_wavelength_nm = 1530.9\nfwhm_nm = 0.4\n"
      << "[grid]\nn = 64\nspan_rad_ps = 2.0\n";
  out.close();
  EXPECT_EQ(run_cli("g2 --config " + bad.string()), 2);
  std::filesystem::remove(bad);
}

TEST(Cli, WritesArtifactsUnderOut) {
  const auto dir = std::filesystem::temp_directory_path() / "sfwm_cli_out";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(run_cli("fig2a --format both --out " + dir.string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "fig2a.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "fig2a.svg"));
  const CsvTable t = read_csv((dir / "fig2a.csv").string());
  ASSERT_EQ(t.columns.size(), 2u);
  EXPECT_EQ(t.columns[1], "sqrt_1_plus_cp2");
  EXPECT_EQ(t.rows.size(), 7u);
  // Byte determinism across runs.
  const auto first = [&] {
    std::ifstream in(dir / "fig2a.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  ASSERT_EQ(run_cli("fig2a --format both --out " + dir.string()), 0);
  std::ifstream in2(dir / "fig2a.csv", std::ios::binary);
  std::stringstream ss2;
  ss2 << in2.rdbuf();
  EXPECT_EQ(ss2.str(), first);
  std::filesystem::remove_all(dir);
}
