#pragma once

// Joint spectral amplitude construction on discretized detuning grids: the
// phase-mismatch expansion, its Gaussian approximation, chirped Gaussian filters.
// Matrices are indexed [idler, signal]; detunings are relative to the respective
// center frequencies, in rad/ps.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

// Uniform symmetric detuning axes. Rows of a JSA matrix walk the idler axis,
// columns the signal axis.
struct SpectralGrid {
  Eigen::VectorXd idler;
  Eigen::VectorXd signal;

  static SpectralGrid symmetric(int n_idler, double span_idler, int n_signal, double span_signal) {
    if (n_idler < 2 || n_signal < 2)
      throw ValidationError("grid: need at least 2 points per axis");
    if (span_idler <= 0.0 || span_signal <= 0.0)
      throw ValidationError("grid: spans must be positive");
    SpectralGrid g;
    g.idler = Eigen::VectorXd::LinSpaced(n_idler, -span_idler, span_idler);
    g.signal = Eigen::VectorXd::LinSpaced(n_signal, -span_signal, span_signal);
    return g;
  }
  static SpectralGrid symmetric(int n, double span) { return symmetric(n, span, n, span); }

  int n_idler() const { return static_cast<int>(idler.size()); }
  int n_signal() const { return static_cast<int>(signal.size()); }
  double d_idler() const { return idler(1) - idler(0); }
  double d_signal() const { return signal(1) - signal(0); }
  double span_idler() const { return idler(n_idler() - 1); }
  double span_signal() const { return signal(n_signal() - 1); }

  // Trapezoid quadrature weights (dOmega, halved at the two ends).
  Eigen::VectorXd idler_weights() const { return trapezoid(idler); }
  Eigen::VectorXd signal_weights() const { return trapezoid(signal); }

  void validate() const {
    check_axis(idler, "idler");
    check_axis(signal, "signal");
  }

private:
  static Eigen::VectorXd trapezoid(const Eigen::VectorXd& axis) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(axis.size(), axis(1) - axis(0));
    w(0) *= 0.5;
    w(axis.size() - 1) *= 0.5;
    return w;
  }
  static void check_axis(const Eigen::VectorXd& axis, const char* which) {
    if (axis.size() < 2) throw ValidationError(std::string("grid: ") + which + " axis too short");
    const double d = axis(1) - axis(0);
    if (d <= 0.0) throw ValidationError(std::string("grid: ") + which + " axis not increasing");
    for (int k = 1; k < axis.size(); ++k)
      if (std::abs(axis(k) - axis(k - 1) - d) > 1e-12 * d)
        throw ValidationError(std::string("grid: ") + which + " axis not uniform");
    if (std::abs(axis(0) + axis(axis.size() - 1)) > 1e-12 * axis(axis.size() - 1))
      throw ValidationError(std::string("grid: ") + which + " axis not symmetric about 0");
  }
};

struct Jsa {
  SpectralGrid grid;
  Eigen::MatrixXcd amplitude;  // [idler, signal], unnormalized
};

// Phase-matching bandwidths of the Gaussian-approximated sinc, and the signed
// pump-to-band detuning Delta = omega_s0 - omega_i0 they came from.
struct PhaseMatchCoeffs {
  double a_idler_rad_ps = 0.0;   // divides the idler detuning
  double b_signal_rad_ps = 0.0;  // divides the signal detuning
  double delta_rad_ps = 0.0;
};

// Delta K = 2 gamma P + (beta2/4) Delta^2 + (beta2/2) Delta (Omega_s - Omega_i)
//           + (beta3/8) Delta^2 (Omega_s + Omega_i), in rad/km.
// The nonlinear term contributes 0 when gamma or peak power is absent.
inline double phase_mismatch(const FiberSpec& fiber, double delta, double omega_s, double omega_i) {
  return 2.0 * fiber.gamma_times_power() +
         fiber.beta2_ps2_km / 4.0 * delta * delta +
         fiber.beta2_ps2_km / 2.0 * delta * (omega_s - omega_i) +
         fiber.beta3_ps3_km / 8.0 * delta * delta * (omega_s + omega_i);
}

// A = 6.44 / [L (beta3 Delta^2/4 - beta2 Delta)], B with the opposite beta2 sign.
// Written exactly as the linearized-sinc fit gives them; signs of Delta and beta2
// decide which of the two comes out larger, and positivity is checked where the
// values are consumed, not assumed here.
inline PhaseMatchCoeffs phase_match_coeffs(const FiberSpec& fiber, double delta) {
  const double common = fiber.beta3_ps3_km * delta * delta / 4.0;
  const double da = fiber.length_km * (common - fiber.beta2_ps2_km * delta);
  const double db = fiber.length_km * (common + fiber.beta2_ps2_km * delta);
  if (da == 0.0 || db == 0.0)
    throw ValidationError("phase_match_coeffs: singular configuration (zero denominator)");
  return {6.44 / da, 6.44 / db, delta};
}

namespace detail {

inline void require_pump_coverage(const PulseSpec& pump, const SpectralGrid& grid) {
  pump.validate();
  grid.validate();
  const double diag = grid.span_idler() + grid.span_signal();
  if (diag < 4.0 * pump.sigma_rad_ps)
    throw ValidationError("build_jsa: grid too narrow, covers only +-" + std::to_string(diag) +
                          " rad/ps of the (idler+signal) sum, need +-4 sigma_p = " +
                          std::to_string(4.0 * pump.sigma_rad_ps));
}

// Common pump factor exp(-(1 + i C_p)(Omega_i + Omega_s)^2 / (4 sigma_p^2)),
// evaluated as polar(envelope, phase) to keep the modulus exactly chirp-free.
inline std::complex<double> pump_envelope(double sum, double sigma, double chirp) {
  const double x = sum * sum / (4.0 * sigma * sigma);
  return std::polar(std::exp(-x), -chirp * x);
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace detail

// Gaussian-model JSA: pump envelope times exp(-1/2 (Omega_i/A + Omega_s/B)^2).
inline Jsa build_jsa_gaussian(const PulseSpec& pump, const PhaseMatchCoeffs& coeffs,
                              const SpectralGrid& grid) {
  detail::require_pump_coverage(pump, grid);
  if (coeffs.a_idler_rad_ps <= 0.0 || coeffs.b_signal_rad_ps <= 0.0)
    throw ValidationError("build_jsa_gaussian: phase-matching bandwidths must be positive");
  Jsa jsa{grid, Eigen::MatrixXcd(grid.n_idler(), grid.n_signal())};
  for (int s = 0; s < grid.n_signal(); ++s) {
    const double os = grid.signal(s);
    for (int i = 0; i < grid.n_idler(); ++i) {
      const double oi = grid.idler(i);
      const double pm = oi / coeffs.a_idler_rad_ps + os / coeffs.b_signal_rad_ps;
      jsa.amplitude(i, s) =
          detail::pump_envelope(oi + os, pump.sigma_rad_ps, pump.chirp) * std::exp(-0.5 * pm * pm);
    }
  }
  return jsa;
}

// Exact-sinc JSA: pump envelope times sinc(DeltaK L / 2) with DeltaK from
// phase_mismatch. The series branch of sinc handles the near-zero ridge.
inline Jsa build_jsa_sinc(const PulseSpec& pump, const FiberSpec& fiber, double delta,
                          const SpectralGrid& grid) {
  detail::require_pump_coverage(pump, grid);
  fiber.validate();
  if (fiber.length_km <= 0.0)
    throw ValidationError("build_jsa_sinc: fiber length must be positive");
  Jsa jsa{grid, Eigen::MatrixXcd(grid.n_idler(), grid.n_signal())};
  for (int s = 0; s < grid.n_signal(); ++s) {
    const double os = grid.signal(s);
    for (int i = 0; i < grid.n_idler(); ++i) {
      const double oi = grid.idler(i);
      const double arg = phase_mismatch(fiber, delta, os, oi) * fiber.length_km / 2.0;
      jsa.amplitude(i, s) =
          detail::pump_envelope(oi + os, pump.sigma_rad_ps, pump.chirp) * detail::sinc(arg);
    }
  }
  return jsa;
}

// |F|^2. Blind to every spectral phase, pump chirp included.
inline Eigen::MatrixXd jsi(const Jsa& jsa) { return jsa.amplitude.cwiseAbs2(); }

// Gaussian filter amplitude exp(-Omega^2 (1 + i C') / (2 sigma^2)); the chirp C'
// of the filtered beam rides along as pure phase.
struct FilterSpec {
  double sigma_rad_ps = 0.0;
  double chirp = 0.0;

  void validate() const {
    if (sigma_rad_ps <= 0.0) throw ValidationError("filter: sigma must be positive");
  }
};

inline std::complex<double> filter_amplitude(const FilterSpec& filter, double omega) {
  filter.validate();
  const double x = omega * omega / (2.0 * filter.sigma_rad_ps * filter.sigma_rad_ps);
  return std::polar(std::exp(-x), -filter.chirp * x);
}

// Largest edge modulus over the largest modulus; the truncation diagnostic used
// by every quadrature consumer.
inline double boundary_ratio(const Eigen::MatrixXcd& m) {
  const double peak = m.cwiseAbs().maxCoeff();
  if (peak <= 0.0) throw NumericalError("boundary_ratio: matrix is identically zero");
  const Eigen::Index rows = m.rows(), cols = m.cols();
  double edge = m.row(0).cwiseAbs().maxCoeff();
  edge = std::max(edge, m.row(rows - 1).cwiseAbs().maxCoeff());
  edge = std::max(edge, m.col(0).cwiseAbs().maxCoeff());
  edge = std::max(edge, m.col(cols - 1).cwiseAbs().maxCoeff());
  return edge / peak;
}

}  // namespace sfwm
