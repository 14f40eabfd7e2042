#pragma once

// Two-source Hong-Ou-Mandel interferometer for thermal beams: the analytic
// normalized coincidence curve with its mode-matching factor, dip width and
// visibility, and an independent grid-quadrature oracle built from the same
// joint spectral amplitudes.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "sfwm/coherence.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/spectral.hpp"

namespace sfwm {

struct HomConfig {
  FilterSpec filter1;       // chirp C1' of beam 1; sigma shared with filter2
  FilterSpec filter2;       // chirp C2' of beam 2
  double pump_duration_ps = 0.0;
  double g2 = 0.0;          // of each interfering beam, assumed equal
  double eta = 1.0;         // amplitude ratio between the two inputs
  double reflectance = 0.5;
  double transmittance = 0.5;
  double delay_span_ps = 40.0;
  double delay_step_ps = 0.5;

  void validate() const {
    filter1.validate();
    filter2.validate();
    const double ds = std::abs(filter1.sigma_rad_ps - filter2.sigma_rad_ps);
    if (ds > 1e-12 * filter1.sigma_rad_ps)
      throw ValidationError("hom: the two beams must share one filter bandwidth");
    if (std::abs(reflectance + transmittance - 1.0) > 1e-12)
      throw ValidationError("hom: splitter must be lossless (R + T = 1)");
    if (reflectance < 0.0 || transmittance < 0.0)
      throw ValidationError("hom: splitter coefficients must be non-negative");
    if (eta < 0.0) throw ValidationError("hom: amplitude ratio eta must be >= 0");
    if (!(g2 > 1.0) || g2 > 2.0) throw ValidationError("hom: g2 must lie in (1, 2]");
    if (pump_duration_ps < 0.0) throw ValidationError("hom: pump duration must be >= 0");
    if (delay_step_ps <= 0.0 || delay_span_ps <= 0.0)
      throw ValidationError("hom: delay scan must have positive span and step");
  }
};

struct HomResult {
  double s_factor = 0.0;
  double visibility = 0.0;
  double fwhm_ps = 0.0;
  std::vector<std::pair<double, double>> curve;  // (delay ps, N12' / (N1' N2'))
};

// S = sqrt[(tau_s^2 + dTp^2/2) / (tau_s^2 + tau_s^2 (C1'-C2')^2/4 + dTp^2/2)]
// with tau_s = 1/sigma_s: the temporal-mode overlap penalty of unequal beam
// chirps. Equals 1 iff the chirps match.
inline double mode_matching_s(const HomConfig& config) {
  config.validate();
  const double tau_s = 1.0 / config.filter1.sigma_rad_ps;
  const double dc = config.filter1.chirp - config.filter2.chirp;
  const double t2 = tau_s * tau_s;
  const double p2 = config.pump_duration_ps * config.pump_duration_ps / 2.0;
  return std::sqrt((t2 + p2) / (t2 + t2 * dc * dc / 4.0 + p2));
}

// xi(dt) = exp(-dt^2 sigma_s^2 (g2-1)^2 S^2 / 2), the dip profile.
inline double dip_envelope(double delta_tau_ps, double sigma_s, double g2, double s) {
  if (sigma_s <= 0.0) throw ValidationError("dip_envelope: sigma must be positive");
  const double w = delta_tau_ps * sigma_s * (g2 - 1.0) * s;
  return std::exp(-w * w / 2.0);
}

// Delta tau = 2 sqrt(2 ln 2) / [(g2 - 1) sigma_s S].
inline double fwhm(double sigma_s, double g2, double s) {
  if (sigma_s <= 0.0) throw ValidationError("fwhm: sigma must be positive");
  if (!(g2 > 1.0)) throw ValidationError("fwhm: no dip for g2 <= 1");
  if (!(s > 0.0)) throw ValidationError("fwhm: mode matching factor must be positive");
  return 2.0 * std::sqrt(2.0 * std::log(2.0)) / ((g2 - 1.0) * sigma_s * s);
}

// V = (g2 - 1) S / (g2 + 1), the balanced-splitter equal-power visibility;
// capped at 1/3 by the thermal bound g2 <= 2.
inline double visibility(double g2, double s) {
  if (!(g2 > 1.0) || g2 > 2.0) throw ValidationError("visibility: g2 must lie in (1, 2]");
  if (!(s > 0.0) || s > 1.0) throw ValidationError("visibility: S must lie in (0, 1]");
  return (g2 - 1.0) * s / (g2 + 1.0);
}

// Normalized coincidence, analytic form:
//   1 + TR (1 + eta^4)(g2 - 1) / [(eta^2 T + R)(eta^2 R + T)]
//       * [1 - S 2 eta^2 xi(dt) / (1 + eta^4)].
inline double coincidence_at(double delta_tau_ps, double sigma_s, double g2, double s,
                             double eta, double r, double t) {
  const double e2 = eta * eta;
  const double prefactor =
      t * r * (1.0 + e2 * e2) * (g2 - 1.0) / ((e2 * t + r) * (e2 * r + t));
  const double dip = s * 2.0 * e2 * dip_envelope(delta_tau_ps, sigma_s, g2, s) / (1.0 + e2 * e2);
  return 1.0 + prefactor * (1.0 - dip);
}

inline std::vector<double> delay_scan(double span_ps, double step_ps) {
  std::vector<double> delays;
  const int half = static_cast<int>(std::round(span_ps / step_ps));
  delays.reserve(2 * half + 1);
  for (int k = -half; k <= half; ++k) delays.push_back(k * step_ps);
  return delays;
}

inline HomResult coincidence_curve(const HomConfig& config) {
  config.validate();
  HomResult result;
  result.s_factor = mode_matching_s(config);
  result.visibility = visibility(config.g2, result.s_factor);
  result.fwhm_ps = fwhm(config.filter1.sigma_rad_ps, config.g2, result.s_factor);
  for (double dt : delay_scan(config.delay_span_ps, config.delay_step_ps))
    result.curve.emplace_back(
        dt, coincidence_at(dt, config.filter1.sigma_rad_ps, config.g2, result.s_factor,
                           config.eta, config.reflectance, config.transmittance));
  return result;
}

// Quadrature oracle. The interferometer sees two chaotic beams with reduced
// kernels rho_k = M_k^dagger M_k (M_k the weighted filtered JSA of arm k); the
// Gaussian moment factorization of the fourth-order moment gives, with
// P_k = tr rho_k, Q_k = sum |rho_k|^2 and the delay carried by beam 1 as a
// phase e^{i Omega_s dt}:
//   N12'/(N1' N2') = [eta^4 TR (P1^2 + Q1) + TR (P2^2 + Q2)
//                     + eta^2 (T^2 + R^2) P1 P2 - 2 eta^2 TR X(dt)]
//                    / [(eta^2 T P1 + R P2)(eta^2 R P1 + T P2)]
//   X(dt) = sum_{s,s'} rho_1(s,s') rho_2*(s,s') e^{i (Omega_s - Omega_s') dt},
// real by Hermiticity. Cross kernel and traces are cached so a delay scan costs
// one matrix-vector product per point.
class HomNumericalKernel {
public:
  HomNumericalKernel(const Jsa& jsa1, const Jsa& jsa2, const FilterSpec& filter1,
                     const FilterSpec& filter2) {
    if (jsa1.grid.n_idler() != jsa2.grid.n_idler() ||
        jsa1.grid.n_signal() != jsa2.grid.n_signal() ||
        (jsa1.grid.idler.array() != jsa2.grid.idler.array()).any() ||
        (jsa1.grid.signal.array() != jsa2.grid.signal.array()).any())
      throw ValidationError("hom_numerical: the two amplitudes must share one grid");
    const Eigen::MatrixXcd rho1 =
        detail::reduced_kernel(detail::weighted_filtered(jsa1, filter1));
    const Eigen::MatrixXcd rho2 =
        detail::reduced_kernel(detail::weighted_filtered(jsa2, filter2));
    signal_ = jsa1.grid.signal;
    p1_ = rho1.trace().real();
    p2_ = rho2.trace().real();
    if (!(p1_ > 0.0) || !(p2_ > 0.0))
      throw NumericalError("hom_numerical: reduced kernel has non-positive trace");
    q1_ = rho1.squaredNorm();
    q2_ = rho2.squaredNorm();
    cross_ = rho1.cwiseProduct(rho2.conjugate());
  }

  double purity1() const { return q1_ / (p1_ * p1_); }
  double purity2() const { return q2_ / (p2_ * p2_); }

  double at(double delta_tau_ps, double eta, double r) const {
    const double t = 1.0 - r;
    if (r < 0.0 || r > 1.0) throw ValidationError("hom_numerical: R must lie in [0, 1]");
    if (eta < 0.0) throw ValidationError("hom_numerical: eta must be >= 0");
    const Eigen::VectorXcd u = (signal_.array().cast<std::complex<double>>() *
                                std::complex<double>(0.0, -delta_tau_ps))
                                   .exp()
                                   .matrix();
    const double x = (u.adjoint() * cross_ * u)(0, 0).real();
    const double e2 = eta * eta;
    const double num = e2 * e2 * t * r * (p1_ * p1_ + q1_) + t * r * (p2_ * p2_ + q2_) +
                       e2 * (t * t + r * r) * p1_ * p2_ - 2.0 * e2 * t * r * x;
    const double den = (e2 * t * p1_ + r * p2_) * (e2 * r * p1_ + t * p2_);
    return num / den;
  }

private:
  Eigen::VectorXd signal_;
  Eigen::MatrixXcd cross_;
  double p1_ = 0.0, p2_ = 0.0, q1_ = 0.0, q2_ = 0.0;
};

inline double hom_numerical(const Jsa& jsa1, const Jsa& jsa2, const FilterSpec& filter1,
                            const FilterSpec& filter2, double delta_tau_ps, double eta,
                            double r) {
  return HomNumericalKernel(jsa1, jsa2, filter1, filter2).at(delta_tau_ps, eta, r);
}

}  // namespace sfwm
