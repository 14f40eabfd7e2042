#pragma once

// Intensity correlation g2 of a filtered beam by three independent routes:
// closed form, direct quadrature of the fourth-order field moment, and Schmidt
// (mode) decomposition. Plus the finite-phase-matching generalization and the
// single/multi-mode thermal photon statistics the g2 values correspond to.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "sfwm/errors.hpp"
#include "sfwm/spectral.hpp"

namespace sfwm {

struct CoherenceResult {
  double g2 = 0.0;              // in (1, 2]
  double schmidt_number = 0.0;  // effective mode count K = 1/purity
  double purity = 0.0;          // sum of squared Schmidt weights
  Eigen::VectorXd schmidt_weights;  // descending, sum 1; empty for the pure quadrature route
};

// g2 = 1 + 1/sqrt(1 + (sigma_s^2 / 2 sigma_p^2)(1 + C_p^2)).
// The infinite-phase-matching-bandwidth limit of the Gaussian model.
inline double g2_closed_form(double sigma_s, double sigma_p, double c_p) {
  if (sigma_s <= 0.0 || sigma_p <= 0.0)
    throw ValidationError("g2_closed_form: bandwidths must be positive");
  const double x = sigma_s * sigma_s / (2.0 * sigma_p * sigma_p) * (1.0 + c_p * c_p);
  return 1.0 + 1.0 / std::sqrt(1.0 + x);
}

namespace detail {

// f(Omega_s) F(Omega_i, Omega_s) scaled by sqrt of the trapezoid weights on both
// axes, so that plain matrix algebra on the result is the grid quadrature.
// Gates on truncation: the *filtered* product must decay below 1e-4 of its peak
// at every grid edge, otherwise the quadrature silently loses tails.
inline Eigen::MatrixXcd weighted_filtered(const Jsa& jsa, const FilterSpec& filter) {
  filter.validate();
  jsa.grid.validate();
  const int ni = jsa.grid.n_idler(), ns = jsa.grid.n_signal();
  if (jsa.amplitude.rows() != ni || jsa.amplitude.cols() != ns)
    throw ValidationError("weighted_filtered: amplitude shape disagrees with grid");
  Eigen::VectorXcd f(ns);
  for (int s = 0; s < ns; ++s) f(s) = filter_amplitude(filter, jsa.grid.signal(s));
  Eigen::MatrixXcd m = jsa.amplitude * f.asDiagonal();
  if (!m.allFinite()) throw NumericalError("weighted_filtered: non-finite filtered amplitude");
  const double edge = boundary_ratio(m);
  if (edge > 1e-4)
    throw NumericalError(
        "weighted_filtered: filtered amplitude is " + std::to_string(edge) +
        " of peak at the grid boundary (limit 1e-4); grid " + std::to_string(ni) + "x" +
        std::to_string(ns) + ", spans +-" + std::to_string(jsa.grid.span_idler()) + ", +-" +
        std::to_string(jsa.grid.span_signal()) + " rad/ps - widen the grid");
  const Eigen::VectorXd wi = jsa.grid.idler_weights().cwiseSqrt();
  const Eigen::VectorXd ws = jsa.grid.signal_weights().cwiseSqrt();
  return wi.asDiagonal() * m * ws.asDiagonal();
}

// Reduced signal-beam kernel rho(s, s') = sum_i M*(i, s) M(i, s'), the object
// whose trace powers are the normalized field moments.
inline Eigen::MatrixXcd reduced_kernel(const Eigen::MatrixXcd& weighted) {
  return weighted.adjoint() * weighted;
}

}  // namespace detail

// Quadrature route: g2 = 1 + sum |rho|^2 / (tr rho)^2 over the reduced kernel of
// the filtered JSA. Identical to the quadruple detuning integral of the
// fourth-order moment, evaluated in O(n^3) as matrix products.
inline CoherenceResult g2_numerical(const Jsa& jsa, const FilterSpec& filter) {
  const Eigen::MatrixXcd rho = detail::reduced_kernel(detail::weighted_filtered(jsa, filter));
  const double tr = rho.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr))
    throw NumericalError("g2_numerical: reduced kernel has non-positive trace");
  const double purity = rho.squaredNorm() / (tr * tr);
  CoherenceResult r;
  r.purity = purity;
  r.schmidt_number = 1.0 / purity;
  r.g2 = 1.0 + purity;
  return r;
}

// Mode decomposition route: eigenvalues of the reduced kernel are the squared
// Schmidt coefficients. Weights below 1e-12 of the leading one are decomposition
// noise and are dropped before forming the mode count.
inline CoherenceResult schmidt_decompose(const Jsa& jsa, const FilterSpec& filter) {
  const Eigen::MatrixXcd rho = detail::reduced_kernel(detail::weighted_filtered(jsa, filter));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("schmidt_decompose: eigendecomposition failed on a " +
                         std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                         " kernel");
  Eigen::VectorXd ev = es.eigenvalues().reverse();  // descending
  ev = ev.cwiseMax(0.0);
  const double total = ev.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalError("schmidt_decompose: degenerate weight spectrum");
  int kept = 0;
  while (kept < ev.size() && ev(kept) >= 1e-12 * ev(0)) ++kept;
  CoherenceResult r;
  r.schmidt_weights = ev.head(kept) / total;
  r.purity = r.schmidt_weights.squaredNorm();
  r.schmidt_number = 1.0 / r.purity;
  r.g2 = 1.0 + r.purity;
  return r;
}

enum class Side { signal, idler };

// Finite-phase-matching-bandwidth g2 for either beam, with the process order
// parameter a = 1 (three-wave, one pump photon) or a = 2 (four-wave, two pump
// photons). The asymmetric nesting between numerator and denominator is
// intentional, not a typo; its
// anchor is the a_band, b_band -> infinity limit, which reduces to
// g2_closed_form with sigma^2/(a sigma_p^2) in place of sigma^2/(2 sigma_p^2).
inline double g2_general(Side side, double sigma_filter, double sigma_p, double c_p,
                         double a_band, double b_band, int a) {
  if (sigma_filter <= 0.0 || sigma_p <= 0.0 || a_band <= 0.0 || b_band <= 0.0)
    throw ValidationError("g2_general: bandwidths must be positive");
  if (a != 1 && a != 2) throw ValidationError("g2_general: process order a must be 1 or 2");
  if (side == Side::idler) std::swap(a_band, b_band);
  const double s2 = sigma_filter * sigma_filter;
  const double p2 = a * sigma_p * sigma_p;
  const double q = p2 / (a_band * a_band);
  const double inv_diff = 1.0 / a_band - 1.0 / b_band;
  const double num = std::sqrt(1.0 + q + s2 * inv_diff * inv_diff);
  const double den = std::sqrt(1.0 + q + s2 / (a_band * a_band) +
                               s2 / (b_band * b_band) * (1.0 + q) + s2 / p2 * (1.0 + c_p * c_p));
  return 1.0 + num / den;
}

enum class ThermalMode {
  single_mode,       // Bose-Einstein number distribution, g2 = 2
  highly_multimode,  // Poissonian limit of many independent modes, g2 -> 1
};

// P(n) for the two limiting photon-number statistics of a thermal beam.
// Evaluated in log space so large n stays finite.
inline double photon_statistics(double nbar, ThermalMode mode, int n) {
  if (nbar < 0.0) throw ValidationError("photon_statistics: mean photon number must be >= 0");
  if (n < 0) throw ValidationError("photon_statistics: photon count must be >= 0");
  if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
  if (mode == ThermalMode::single_mode)
    return std::exp(n * std::log(nbar) - (n + 1) * std::log1p(nbar));
  return std::exp(-nbar + n * std::log(nbar) - std::lgamma(n + 1.0));
}

}  // namespace sfwm
