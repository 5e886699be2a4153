#pragma once

// Internal unit system used throughout the library:
//   lengths                 um
//   times                   fs
//   angular frequencies     rad/fs
//   transverse momenta      1/um
//   group-velocity disp.    fs^2/um
// Lab-facing inputs (crystal length in mm, GVD in fs^2/mm, wavelengths in nm)
// are converted once at the boundary with the helpers below.

#include <numbers>

namespace spdc::units {

inline constexpr double pi = std::numbers::pi;

/// Speed of light in um/fs.
inline constexpr double c = 0.299792458;

inline constexpr double um_per_mm = 1000.0;
inline constexpr double um_per_nm = 1e-3;
inline constexpr double fs_per_ps = 1000.0;

constexpr double mm_to_um(double mm) { return mm * um_per_mm; }
constexpr double um_to_mm(double um) { return um / um_per_mm; }
constexpr double nm_to_um(double nm) { return nm * um_per_nm; }
constexpr double um_to_nm(double um) { return um / um_per_nm; }
constexpr double ps_to_fs(double ps) { return ps * fs_per_ps; }

/// fs^2/mm -> fs^2/um
constexpr double gvd_per_mm_to_per_um(double gvd) { return gvd / um_per_mm; }
constexpr double gvd_per_um_to_per_mm(double gvd) { return gvd * um_per_mm; }

/// Angular frequency (rad/fs) of light with vacuum wavelength `lambda_um`.
constexpr double angular_frequency(double lambda_um) { return 2.0 * pi * c / lambda_um; }

/// Exact detuning Omega = 2 pi c (1/lambda - 1/lambda_center), no linearization.
constexpr double detuning(double lambda_um, double center_um) {
  return 2.0 * pi * c * (1.0 / lambda_um - 1.0 / center_um);
}

/// Inverse of detuning().
constexpr double wavelength_from_detuning(double omega, double center_um) {
  return 1.0 / (omega / (2.0 * pi * c) + 1.0 / center_um);
}

}  // namespace spdc::units
