#pragma once

// Physical inputs and every derived constant used downstream.
// All fields are in the internal unit system (see units.hpp).

#include <optional>
#include <string>
#include <string_view>

namespace spdc {

enum class SpdcType { TypeI, TypeII };
enum class PulseRegime { Short, Long };

std::string_view to_string(SpdcType t);
std::string_view to_string(PulseRegime r);

/// Gaussian pump, in space and in frequency.
struct PumpSpec {
  double lambda_p = 0.0;  ///< central wavelength, um
  double w_p = 0.0;       ///< beam waist, um
  double tau = 0.0;       ///< pulse duration, fs

  void validate() const;
  bool operator==(const PumpSpec&) const = default;
};

/// Nonlinear crystal. Group velocities are stored as divisors of c, i.e.
/// v_g = c / vg_divisor (1.708 means c/1.708).
struct CrystalSpec {
  SpdcType type = SpdcType::TypeI;
  double length = 0.0;            ///< um
  std::optional<double> n_p;      ///< pump refractive index
  std::optional<double> k_p;      ///< pump wavenumber, 1/um (takes precedence over n_p)
  double vg_divisor_p = 1.0;
  double vg_divisor_s = 1.0;
  double vg_divisor_i = 1.0;
  double gvd_p = 0.0;             ///< fs^2/um
  double gvd_s = 0.0;             ///< fs^2/um
  double gvd_i = 0.0;             ///< fs^2/um

  void validate() const;
  bool operator==(const CrystalSpec&) const = default;

  double inv_vg_p() const;  ///< fs/um
  double inv_vg_s() const;
  double inv_vg_i() const;
};

/// Explicit control of the pulse-regime factors of the four-Gaussian models.
struct RegimeOverride {
  std::optional<PulseRegime> regime;
  std::optional<double> alpha;
  std::optional<double> beta;

  bool operator==(const RegimeOverride&) const = default;
};

/// Quantities computed from a pump and a crystal.
struct DerivedParams {
  SpdcType type = SpdcType::TypeI;
  double length = 0.0;        ///< um
  double lambda_p = 0.0;      ///< um
  double w_p = 0.0;           ///< um
  double tau = 0.0;           ///< fs

  double k_p = 0.0;           ///< 1/um
  double omega_0 = 0.0;       ///< central pump angular frequency, rad/fs
  double inv_vg_p = 0.0;      ///< fs/um
  double inv_vg_s = 0.0;
  double inv_vg_i = 0.0;
  double delta_inv_vg = 0.0;  ///< 1/v_gp - 1/v_gs, fs/um
  double gvd_s = 0.0;         ///< fs^2/um
  double gvd_i = 0.0;
  double beta_disp = 0.0;     ///< GVD_s / 2, fs^2/um

  // Spectral-width model of the four-Gaussian approximation.
  double A_fed = 0.0;         ///< (1/v_gp - 1/v_gs)^-1, um/fs
  double eta = 0.0;
  double B_fed = 0.0;
  double gamma = 0.0;
  double a_tau = 0.0;         ///< rad/fs
  double b_tau = 0.0;         ///< rad/fs

  double sigma_q = 0.0;       ///< momentum correlation width, um
  double sigma_x = 0.0;       ///< position correlation width, um

  PulseRegime regime = PulseRegime::Long;
  double alpha = 1.0;         ///< type-I sum-frequency factor
  double beta_t2 = 1.0;       ///< type-II sum-frequency factor

  bool operator==(const DerivedParams&) const = default;
};

/// Substitution constant matching the spatial sinc to a Gaussian.
inline constexpr double kGaussianSubstituteA = 8.0 / 3.0;
/// Interpolation exponent of the spectral-width model.
inline constexpr double kWidthGamma = 2.21;

inline constexpr double kAlphaShort = 0.4;
inline constexpr double kAlphaLong = 1.0;
inline constexpr double kBetaShort = 0.1;
inline constexpr double kBetaLong = 1.0;

/// eta < 1 selects the short-pulse regime.
PulseRegime regime_for_eta(double eta);

/// Computes all derived constants. Throws ValidationError for invalid specs
/// and for equal pump/signal group velocities ("degenerate group velocities").
DerivedParams derive_params(const PumpSpec& pump, const CrystalSpec& crystal,
                            const RegimeOverride& regime_override = {});

namespace widths {
/// a(tau) and b(tau) from the interpolated spectral-width model.
double a_tau(double A_fed, double lambda_p, double length, double eta, double omega_0);
double b_tau(double B_fed, double lambda_p, double length, double eta, double omega_0);
}  // namespace widths

namespace presets {

/// Type-II BBO, L = 0.5 mm, group indices (1.708, 1.626, 1.684),
/// GVD (180, 61.7, 75.1) fs^2/mm. The pump index is not part of the preset.
CrystalSpec bbo_fig5();

/// Type-I LiIO3 geometry, L = 5 mm. Index, group velocities and GVDs are
/// not part of the preset and must be supplied by the caller.
CrystalSpec liio3_fig1();

/// Names accepted by `crystal_preset`.
inline constexpr std::string_view kBboFig5 = "BBO-Fig5";
inline constexpr std::string_view kLiIO3Fig1 = "LiIO3-Fig1";

/// Fields a preset leaves for the user to fill (dotted config names).
struct PresetInfo {
  CrystalSpec crystal;
  bool supplies_dispersion = false;
};

std::optional<PresetInfo> crystal_preset(std::string_view name);

}  // namespace presets

}  // namespace spdc
