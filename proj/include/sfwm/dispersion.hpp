#pragma once

// Fiber dispersion bookkeeping: beta coefficients, chirp accumulation along fiber
// chains, pulse-duration conversions. Everything is a pure function over value types.
//
// Unit system throughout the library: time ps, angular frequency rad/ps, fiber
// length km, wavelength nm, beta2 ps^2/km, beta3 ps^3/km. Keeps magnitudes near
// unity so products like beta2*z*sigma^2 lose no precision.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfwm/errors.hpp"

namespace sfwm {

inline constexpr double kSpeedOfLightNmPerPs = 2.99792458e5;

struct Beta {
  double beta2_ps2_km = 0.0;
  double beta3_ps3_km = 0.0;
};

// beta2 = -(lambda^2 / 2 pi c) * slope * (lambda - lambda0)
// beta3 = (lambda^2 / 2 pi c)^2 * slope
// Valid near the zero-dispersion wavelength lambda0, where the dispersion is
// characterized by its slope alone. beta2 < 0 when lambda > lambda0.
inline Beta derive_beta(double lambda_nm, double lambda_zero_nm, double slope_ps_nm2_km) {
  if (lambda_nm <= 0.0 || lambda_zero_nm <= 0.0)
    throw ValidationError("derive_beta: wavelengths must be positive");
  if (slope_ps_nm2_km <= 0.0)
    throw ValidationError("derive_beta: dispersion slope must be positive");
  const double f = lambda_nm * lambda_nm / (2.0 * M_PI * kSpeedOfLightNmPerPs);
  return {-f * slope_ps_nm2_km * (lambda_nm - lambda_zero_nm), f * f * slope_ps_nm2_km};
}

// One fiber segment. beta2/beta3 may be given directly (e.g. catalogue values for
// transmission fiber) or derived from lambda0 + slope at a reference wavelength.
struct FiberSpec {
  std::string name;
  double length_km = 0.0;
  double beta2_ps2_km = 0.0;
  double beta3_ps3_km = 0.0;
  std::optional<double> zero_dispersion_wavelength_nm;
  std::optional<double> dispersion_slope_ps_nm2_km;
  std::optional<double> reference_wavelength_nm;  // where the betas were evaluated
  std::optional<double> gamma_per_w_km;
  std::optional<double> peak_power_w;

  double gamma_times_power() const {
    return gamma_per_w_km.value_or(0.0) * peak_power_w.value_or(0.0);
  }

  void validate() const {
    if (length_km < 0.0)
      throw ValidationError("fiber '" + name + "': length must be >= 0");
    if (zero_dispersion_wavelength_nm && dispersion_slope_ps_nm2_km && reference_wavelength_nm) {
      const Beta d = derive_beta(*reference_wavelength_nm, *zero_dispersion_wavelength_nm,
                                 *dispersion_slope_ps_nm2_km);
      const auto consistent = [](double stored, double derived) {
        const double scale = std::max(std::abs(stored), std::abs(derived));
        return std::abs(stored - derived) <= 1e-12 * (scale > 0.0 ? scale : 1.0);
      };
      if (!consistent(beta2_ps2_km, d.beta2_ps2_km) || !consistent(beta3_ps3_km, d.beta3_ps3_km))
        throw ValidationError("fiber '" + name + "': stored betas disagree with slope-derived values");
    }
  }
};

// Gaussian pulsed field, amplitude spectrum exp(-Omega^2 (1 + iC) / (2 sigma^2)).
// sigma is the 1/e amplitude half-width in rad/ps; C is the signed linear chirp.
struct PulseSpec {
  double center_wavelength_nm = 0.0;
  double sigma_rad_ps = 0.0;
  double chirp = 0.0;

  void validate() const {
    if (sigma_rad_ps <= 0.0) throw ValidationError("pulse: sigma must be positive");
    if (center_wavelength_nm <= 0.0) throw ValidationError("pulse: wavelength must be positive");
  }
};

// Intensity-FWHM (in nm) to the sigma of the amplitude convention above:
// sigma = 2 pi c dl / lambda^2 / (2 sqrt(ln 2)). The single conversion point for
// every filter/pump width in the library.
inline double sigma_from_fwhm(double center_nm, double fwhm_nm) {
  if (center_nm <= 0.0 || fwhm_nm <= 0.0)
    throw ValidationError("sigma_from_fwhm: wavelength and FWHM must be positive");
  if (fwhm_nm >= center_nm)
    throw ValidationError("sigma_from_fwhm: FWHM must be small against the center wavelength");
  return 2.0 * M_PI * kSpeedOfLightNmPerPs * fwhm_nm / (center_nm * center_nm) /
         (2.0 * std::sqrt(std::log(2.0)));
}

// C grows by beta2*z*sigma^2 per segment; linear propagation leaves the spectrum
// (hence sigma) untouched, so contributions are additive along the chain.
inline double accumulate_chirp(double initial_chirp, double sigma_rad_ps,
                               std::span<const FiberSpec> chain) {
  if (sigma_rad_ps <= 0.0) throw ValidationError("accumulate_chirp: sigma must be positive");
  double c = initial_chirp;
  for (const FiberSpec& f : chain) {
    f.validate();
    c += f.beta2_ps2_km * f.length_km * sigma_rad_ps * sigma_rad_ps;
  }
  return c;
}

// Chirped duration sqrt(1 + C^2) / sigma (T0 = 1/sigma transform-limited).
inline double pulse_duration(const PulseSpec& pulse) {
  pulse.validate();
  return std::sqrt(1.0 + pulse.chirp * pulse.chirp) / pulse.sigma_rad_ps;
}

// What an intensity autocorrelator reports for a Gaussian pulse of the given
// spectral FWHM and chirp: 0.44 lambda^2 sqrt(1 + C^2) / (2 sqrt(ln 2) c dl).
// The 0.44 time-bandwidth constant is used as conventionally quoted, with no
// autocorrelation deconvolution factor.
inline double autocorrelator_duration(double center_nm, double fwhm_nm, double chirp) {
  if (center_nm <= 0.0 || fwhm_nm <= 0.0)
    throw ValidationError("autocorrelator_duration: wavelength and FWHM must be positive");
  return 0.44 * center_nm * center_nm * std::sqrt(1.0 + chirp * chirp) /
         (2.0 * std::sqrt(std::log(2.0)) * kSpeedOfLightNmPerPs * fwhm_nm);
}

// Invert autocorrelator_duration for |C|. Durations below the transform limit
// are unreachable by a linearly chirped Gaussian.
inline double chirp_from_measured_duration(double center_nm, double fwhm_nm,
                                           double measured_duration_ps) {
  const double limit = autocorrelator_duration(center_nm, fwhm_nm, 0.0);
  const double s = measured_duration_ps / limit;
  if (s < 1.0 - 1e-12)
    throw ValidationError("chirp_from_measured_duration: measured duration " +
                          std::to_string(measured_duration_ps) +
                          " ps is below the transform limit " + std::to_string(limit) + " ps");
  return std::sqrt(std::max(0.0, s * s - 1.0));
}

}  // namespace sfwm
