#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "sfwm/spectral.hpp"

using namespace sfwm;

namespace {

constexpr double kSigmaP = 0.47767998638948156;
constexpr double kDelta = -12.726573540922045;  // rad/ps, signal minus idler center

FiberSpec source_fiber() {
  FiberSpec f;
  f.name = "dsf";
  f.length_km = 0.3;
  f.beta2_ps2_km = -0.08486409824901849;
  f.beta3_ps3_km = 0.11855004397724456;
  return f;
}

}  // namespace

TEST(SpectralGrid, SymmetricConstruction) {
  const SpectralGrid g = SpectralGrid::symmetric(9, 4.0);
  EXPECT_EQ(g.n_idler(), 9);
  EXPECT_EQ(g.n_signal(), 9);
  EXPECT_DOUBLE_EQ(g.d_idler(), 1.0);
  EXPECT_DOUBLE_EQ(g.idler(0), -4.0);
  EXPECT_DOUBLE_EQ(g.span_signal(), 4.0);
  EXPECT_NO_THROW(g.validate());
}

TEST(SpectralGrid, AxesCanDiffer) {
  const SpectralGrid g = SpectralGrid::symmetric(9, 4.0, 17, 2.0);
  EXPECT_EQ(g.n_idler(), 9);
  EXPECT_EQ(g.n_signal(), 17);
  EXPECT_DOUBLE_EQ(g.d_signal(), 0.25);
  EXPECT_NO_THROW(g.validate());
}

TEST(SpectralGrid, TrapezoidWeights) {
  const SpectralGrid g = SpectralGrid::symmetric(9, 4.0);
  const Eigen::VectorXd w = g.idler_weights();
  EXPECT_DOUBLE_EQ(w(0), 0.5);
  EXPECT_DOUBLE_EQ(w(8), 0.5);
  EXPECT_DOUBLE_EQ(w(4), 1.0);
  EXPECT_NEAR(w.sum(), 8.0, 1e-14);  // integrates 1 over [-4, 4]
}

TEST(SpectralGrid, ValidateCatchesBrokenAxes) {
  EXPECT_THROW(SpectralGrid::symmetric(1, 4.0), ValidationError);
  EXPECT_THROW(SpectralGrid::symmetric(9, 0.0), ValidationError);
  SpectralGrid g = SpectralGrid::symmetric(9, 4.0);
  g.idler(3) += 1e-6;  // non-uniform
  EXPECT_THROW(g.validate(), ValidationError);
  SpectralGrid h = SpectralGrid::symmetric(9, 4.0);
  h.signal.array() += 0.5;  // uniform but asymmetric
  EXPECT_THROW(h.validate(), ValidationError);
}

TEST(PhaseMismatch, LinearSlopesMatchBandwidthCoefficients) {
  // The mismatch is linear in each detuning; its slopes are exactly what the
  // 6.44-fit bandwidths encode: 2 L dK/dOmega_s = 6.44 / B, idler likewise.
  const FiberSpec f = source_fiber();
  const PhaseMatchCoeffs c = phase_match_coeffs(f, kDelta);
  const double k0 = phase_mismatch(f, kDelta, 0.0, 0.0);
  const double slope_s = phase_mismatch(f, kDelta, 1.0, 0.0) - k0;
  const double slope_i = phase_mismatch(f, kDelta, 0.0, 1.0) - k0;
  EXPECT_NEAR(2.0 * f.length_km * slope_s, 6.44 / c.b_signal_rad_ps, 1e-12 * 2.0);
  EXPECT_NEAR(2.0 * f.length_km * slope_i, 6.44 / c.a_idler_rad_ps, 1e-12 * 2.0);
}

TEST(PhaseMismatch, NonlinearTermShiftsByTwiceGammaP) {
  FiberSpec f = source_fiber();
  const double base = phase_mismatch(f, kDelta, 0.2, -0.1);
  f.gamma_per_w_km = 10.0;
  f.peak_power_w = 0.5;
  EXPECT_DOUBLE_EQ(phase_mismatch(f, kDelta, 0.2, -0.1), base + 10.0);
}

TEST(PhaseMatchCoeffs, ReferenceValues) {
  const PhaseMatchCoeffs c = phase_match_coeffs(source_fiber(), kDelta);
  EXPECT_NEAR(c.a_idler_rad_ps, 5.770252153933865, 1e-12 * 5.8);
  EXPECT_NEAR(c.b_signal_rad_ps, 3.6506144515873227, 1e-12 * 3.7);
  EXPECT_EQ(c.delta_rad_ps, kDelta);
}

TEST(PhaseMatchCoeffs, DeltaSignSwapsTheBandwidths) {
  const PhaseMatchCoeffs neg = phase_match_coeffs(source_fiber(), kDelta);
  const PhaseMatchCoeffs pos = phase_match_coeffs(source_fiber(), -kDelta);
  EXPECT_NEAR(pos.a_idler_rad_ps, neg.b_signal_rad_ps, 1e-12 * 3.7);
  EXPECT_NEAR(pos.b_signal_rad_ps, neg.a_idler_rad_ps, 1e-12 * 5.8);
}

TEST(PhaseMatchCoeffs, SingularConfigurationsThrow) {
  FiberSpec f = source_fiber();
  f.length_km = 0.0;
  EXPECT_THROW(phase_match_coeffs(f, kDelta), ValidationError);
  FiberSpec g = source_fiber();
  g.beta3_ps3_km = 0.0;
  EXPECT_THROW(phase_match_coeffs(g, 0.0), ValidationError);
}

TEST(Sinc, SeriesBranchIsContinuous) {
  EXPECT_EQ(detail::sinc(0.0), 1.0);
  for (double x : {0.99999e-4, 1.00001e-4, -0.99999e-4, -1.00001e-4}) {
    const double exact = std::sin(x) / x;
    EXPECT_NEAR(detail::sinc(x), exact, 1e-15);
  }
  EXPECT_LT(std::abs(detail::sinc(M_PI)), 1e-16);
  EXPECT_NEAR(detail::sinc(1.0), std::sin(1.0), 1e-15);
}

TEST(BuildJsaGaussian, ValueLayoutIsIdlerRowsSignalColumns) {
  // Deliberately unequal bandwidths so a row/column transposition would show.
  const PulseSpec pump{1538.9, kSigmaP, 0.7};
  const PhaseMatchCoeffs coeffs{2.0, 7.0, kDelta};
  const SpectralGrid grid = SpectralGrid::symmetric(33, 2.0, 49, 1.5);
  const Jsa jsa = build_jsa_gaussian(pump, coeffs, grid);
  ASSERT_EQ(jsa.amplitude.rows(), 33);
  ASSERT_EQ(jsa.amplitude.cols(), 49);
  const int ic = 16, sc = 24;  // center indices
  EXPECT_NEAR(std::abs(jsa.amplitude(ic, sc)), 1.0, 1e-15);
  // One step along the idler axis must use the idler bandwidth (2.0).
  const double oi = grid.idler(ic + 4);
  const std::complex<double> expected =
      detail::pump_envelope(oi, pump.sigma_rad_ps, pump.chirp) *
      std::exp(-0.5 * (oi / 2.0) * (oi / 2.0));
  EXPECT_NEAR(std::abs(jsa.amplitude(ic + 4, sc) - expected), 0.0, 1e-15);
}

TEST(BuildJsaGaussian, ChirpIsPurePhase) {
  const PhaseMatchCoeffs coeffs{5.770252153933865, 3.6506144515873227, kDelta};
  const SpectralGrid grid = SpectralGrid::symmetric(64, 3.6);
  const Jsa flat = build_jsa_gaussian({1538.9, kSigmaP, 0.0}, coeffs, grid);
  const Jsa chirped = build_jsa_gaussian({1538.9, kSigmaP, 4.0}, coeffs, grid);
  EXPECT_LT((jsi(flat) - jsi(chirped)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT((flat.amplitude - chirped.amplitude).cwiseAbs().maxCoeff(), 0.1);
}

TEST(BuildJsaGaussian, RejectsBadInputs) {
  const SpectralGrid grid = SpectralGrid::symmetric(32, 3.6);
  EXPECT_THROW(build_jsa_gaussian({1538.9, kSigmaP, 0.0}, {-1.0, 3.6, kDelta}, grid),
               ValidationError);
  // Grid too narrow for the pump ridge.
  const SpectralGrid narrow = SpectralGrid::symmetric(32, 0.8 * kSigmaP);
  EXPECT_THROW(build_jsa_gaussian({1538.9, kSigmaP, 0.0},
                                  {5.770252153933865, 3.6506144515873227, kDelta}, narrow),
               ValidationError);
}

TEST(BuildJsaSinc, VanishingLengthLimitIsThePumpEnvelope) {
  // With L -> 0 the sinc factor is 1 everywhere, as is the Gaussian
  // phase-matching factor for huge bandwidths: the two builders must agree.
  FiberSpec f = source_fiber();
  f.length_km = 1e-9;
  const PulseSpec pump{1538.9, kSigmaP, -0.8};
  const SpectralGrid grid = SpectralGrid::symmetric(48, 3.6);
  const Jsa sinc_jsa = build_jsa_sinc(pump, f, kDelta, grid);
  const Jsa gauss_jsa = build_jsa_gaussian(pump, {1e12, 1e12, kDelta}, grid);
  EXPECT_LT((sinc_jsa.amplitude - gauss_jsa.amplitude).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildJsaSinc, RejectsNonPositiveLength) {
  FiberSpec f = source_fiber();
  f.length_km = 0.0;
  EXPECT_THROW(build_jsa_sinc({1538.9, kSigmaP, 0.0}, f, kDelta,
                              SpectralGrid::symmetric(32, 3.6)),
               ValidationError);
}

TEST(FilterAmplitude, ModulusAndPhase) {
  const FilterSpec flat{0.5, 0.0};
  EXPECT_NEAR(std::abs(filter_amplitude(flat, 0.5)), std::exp(-0.5), 1e-15);
  EXPECT_EQ(std::arg(filter_amplitude(flat, 0.5)), 0.0);
  const FilterSpec chirped{0.5, 2.0};
  EXPECT_NEAR(std::abs(filter_amplitude(chirped, 0.5)), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(std::arg(filter_amplitude(chirped, 0.5)), -1.0, 1e-15);
  EXPECT_THROW(filter_amplitude({0.0, 0.0}, 0.1), ValidationError);
}

TEST(BoundaryRatio, EdgeOverPeak) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 5);
  m(2, 2) = {0.0, 2.0};
  m(0, 3) = {0.003, -0.004};  // modulus 0.005 on the top edge
  m(4, 4) = {0.001, 0.0};
  EXPECT_NEAR(boundary_ratio(m), 0.0025, 1e-15);
  EXPECT_THROW(boundary_ratio(Eigen::MatrixXcd::Zero(4, 4)), NumericalError);
}
