#pragma once

// Biphoton amplitudes (pump envelope x phase matching) for the three model
// families, their normalization, and evaluation on 2D grids.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/params.hpp"
#include "spdc/phase_matching.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

enum class ModelKind { General, DoubleSinc, FourGaussian };

std::string_view to_string(ModelKind k);
std::optional<ModelKind> model_kind_from_string(std::string_view s);

/// Which spectral terms of the mismatch the sinc models keep.
enum class KernelMode { FullSinc, QuadraticOnly };

std::string_view to_string(KernelMode m);
std::optional<KernelMode> kernel_mode_from_string(std::string_view s);

/// Linear change of spectral variables (X, Y) -> (Omega_s, Omega_i), with the
/// quadrature envelope of |kernel|^2 along X.
///   type I:  X = Omega_s + Omega_i, Y = Omega_s - Omega_i
///   type II: X = Omega_s + Omega_i, Y = sqrt(GVD_s) Omega_s - sqrt(GVD_i) Omega_i
struct SpectralFrame {
  double s_x = 0.5, s_y = 0.5;   ///< Omega_s = s_x X + s_y Y
  double i_x = 0.5, i_y = -0.5;  ///< Omega_i = i_x X + i_y Y
  double jacobian = 0.5;         ///< dOmega_s dOmega_i = jacobian dX dY

  SpectralPoint point(double x, double y) const { return {s_x * x + s_y * y, i_x * x + i_y * y}; }
};

class BiphotonModel {
 public:
  BiphotonModel(ModelKind kind, const PumpSpec& pump, const CrystalSpec& crystal,
                const RegimeOverride& regime_override = {}, const Guards& guards = {});

  /// Recomputes the derived constants from pump and crystal and compares
  /// them with `derived`; throws ValidationError on mismatch.
  BiphotonModel(ModelKind kind, const PumpSpec& pump, const CrystalSpec& crystal, const DerivedParams& derived,
                const RegimeOverride& regime_override = {}, const Guards& guards = {});

  ModelKind kind() const { return kind_; }
  SpdcType type() const { return derived_.type; }
  const PumpSpec& pump() const { return pump_; }
  const CrystalSpec& crystal() const { return crystal_; }
  const DerivedParams& derived() const { return derived_; }
  const RegimeOverride& regime_override() const { return override_; }
  const Guards& guards() const { return guards_; }

  /// Unnormalized amplitude. Real and nonnegative for the Gaussian model,
  /// real for the sinc models. Throws DomainError outside the guards.
  std::complex<double> amplitude(const TransversePoint& qs, const TransversePoint& qi,
                                 const SpectralPoint& w) const;

  // Factorized form used by the integrators (no guard checks):
  //   amplitude = pump_transverse(|q_s + q_i|^2) * pump_spectral(Omega_s + Omega_i)
  //               * pmf_factor(|q_s - q_i|^2, Omega_s, Omega_i)

  /// exp(-w_p^2 |q_s + q_i|^2)
  double pump_transverse(double u2) const;
  /// Pump spectral envelope: exp(-tau^2 X^2 / (8 ln 2)) for the sinc models,
  /// exp(-alpha X^2 / (2 a^2)) (type I) or exp(-beta X^2 / (2 a^2)) (type II)
  /// for the Gaussian model.
  double pump_spectral(double omega_sum) const;
  /// Every non-pump factor.
  double pmf_factor(double v2, double omega_s, double omega_i, KernelMode mode = KernelMode::FullSinc) const;
  /// pump_spectral * pmf_factor
  double mode_kernel(double v2, double omega_s, double omega_i, KernelMode mode = KernelMode::FullSinc) const;

  SpectralFrame spectral_frame() const;

  /// Gauss-Hermite scale of the |kernel|^2 envelope along the sum axis.
  double sum_axis_scale() const;
  /// Gauss-Hermite scale along the difference axis (Gaussian model only).
  double difference_axis_scale() const;
  /// Half-width of a box along the difference axis outside of which the
  /// sinc argument exceeds `margin` for every |q_s - q_i|^2 <= v2_max and
  /// |X| <= x_max. Sinc models only.
  double difference_box(double v2_max, double x_max, double margin, KernelMode mode) const;

  /// True for models whose amplitude is a product of Gaussians.
  bool is_gaussian() const { return kind_ == ModelKind::FourGaussian; }

 private:
  double sinc_argument(double v2, double omega_s, double omega_i, KernelMode mode) const;

  ModelKind kind_;
  PumpSpec pump_;
  CrystalSpec crystal_;
  RegimeOverride override_;
  Guards guards_;
  DerivedParams derived_;
};

/// exp(-(x_s + x_i)^2/(16 w_p^2)) exp(-(x_s - x_i)^2/(16 sigma_x^2)) times the
/// spectral Gaussians of the type-I four-Gaussian model. Positions in um.
/// Throws ValidationError unless the model is a type-I four-Gaussian model.
double position_amplitude_type1_4g(double x_s, double x_i, const SpectralPoint& w, const BiphotonModel& model);

/// Position-space four-Gaussian amplitude for either type.
double position_amplitude_4g(double x_s, double x_i, const SpectralPoint& w, const BiphotonModel& model);

struct NormalizationSpec {
  int transverse_order = 48;  ///< along |q_s - q_i|^2
  int sum_order = 32;         ///< along Omega_s + Omega_i
  int difference_order = 128; ///< along the difference axis
  double tolerance = 1e-6;
  int max_refinements = 4;
  int threads = 1;
  /// Extra factor applied to the amplitude before normalizing.
  double amplitude_scale = 1.0;
};

struct Normalization {
  double constant = 0.0;                 ///< N such that the integral of |N Phi|^2 is 1
  std::optional<double> closed_form;     ///< Gaussian model only
  IntegrationReport report;              ///< of the integral of |Phi|^2
};

/// Normalization constant by quadrature. The transverse sum coordinate is
/// integrated in closed form (the pump is its only dependence). The Gaussian
/// model is normalized over all of space; the sinc models, which are not
/// square integrable in q, over the guard window |q_s - q_i| <= 2 q_max,
/// |Omega_s - Omega_i| <= 2 omega_fraction omega_0.
/// Throws ConvergenceError when refinement does not reach the tolerance or
/// when any order is below 2.
Normalization normalize(const BiphotonModel& model, const NormalizationSpec& spec = {});

/// Closed-form normalization constant of the Gaussian model.
double normalization_closed_form(const BiphotonModel& model);

enum class GridVariable { LambdaS, LambdaI, OmegaS, OmegaI, QSx, QIx, XS, XI };

std::string_view to_string(GridVariable v);
std::optional<GridVariable> grid_variable_from_string(std::string_view s);

enum class GridQuantity { Amplitude, Intensity };

struct GridAxis {
  GridVariable variable = GridVariable::LambdaS;
  double min = 0.0;  ///< um for wavelengths and positions, rad/fs, 1/um
  double max = 0.0;
  int points = 0;

  std::vector<double> values() const;
};

struct GridSpec {
  GridAxis first;
  GridAxis second;

  // Coordinates not on an axis. Wavelengths default to degeneracy (2 lambda_p).
  std::optional<double> lambda_s;
  std::optional<double> lambda_i;
  double q_sx = 0.0, q_sy = 0.0;
  double q_ix = 0.0, q_iy = 0.0;
  double x_s = 0.0, x_i = 0.0;

  GridQuantity quantity = GridQuantity::Intensity;
  int threads = 1;

  void validate() const;
};

struct GridPoint {
  TransversePoint qs, qi;
  SpectralPoint w;
  double x_s = 0.0, x_i = 0.0;
};

/// Full coordinates of the grid node (first, second). Unset wavelengths sit
/// at lambda_center.
GridPoint grid_point(const GridSpec& grid, double lambda_center, double first, double second);
bool is_position_grid(const GridSpec& grid);

/// Row-major field: values[i * second.size() + j] at (first[i], second[j]).
struct GridField {
  GridVariable first_variable = GridVariable::LambdaS;
  GridVariable second_variable = GridVariable::LambdaI;
  std::vector<double> first;
  std::vector<double> second;
  std::vector<double> values;
  GridQuantity quantity = GridQuantity::Intensity;

  double at(std::size_t i, std::size_t j) const { return values[i * second.size() + j]; }
};

/// Evaluates |Phi| or |Phi|^2 on the grid. Position axes require the Gaussian
/// model and cannot be mixed with momentum axes. Rows are evaluated in
/// parallel; the result does not depend on the worker count.
GridField jsa_grid(const BiphotonModel& model, const GridSpec& grid);

struct JsaStats {
  double centroid[2] = {0.0, 0.0};
  double covariance[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  /// Angle of the major principal axis measured counter-clockwise from the
  /// first axis, in (-pi/2, pi/2]. NaN when isotropic.
  double tilt = 0.0;
  /// tilt - pi/4 wrapped into (-pi/2, pi/2]: 0 on the diagonal, pi/2 on the
  /// anti-diagonal. NaN when isotropic.
  double tilt_from_diagonal = 0.0;
  double axis_ratio = 1.0;  ///< sqrt(lambda_max / lambda_min)
  bool isotropic = false;
};

/// Field-weighted centroid, covariance and principal axes. The field is used
/// as the weight as given (pass intensities for intensity weighting).
/// Throws ValidationError for negative or identically zero fields.
JsaStats jsa_stats(const GridField& field);
JsaStats jsa_stats(const std::vector<double>& first, const std::vector<double>& second,
                   const std::vector<double>& values);

}  // namespace spdc
