#pragma once

// Longitudinal phase mismatch and phase-matching functions (PMFs).
//
// Sign convention: Delta k_z = k_p - k_s - k_i. The transverse term enters
// with a minus sign and the quadratic dispersion term with a plus sign, so
// that a transverse offset can always be compensated spectrally. Every PMF
// is even in Delta k_z, so |Phi| does not depend on the overall sign.

#include <string_view>

#include "spdc/params.hpp"

namespace spdc {

/// Transverse momentum (1/um), Cartesian.
struct TransversePoint {
  double qx = 0.0;
  double qy = 0.0;

  static TransversePoint polar(double q, double phi);
  double norm2() const { return qx * qx + qy * qy; }
  double norm() const;
  double azimuth() const;
};

/// Detunings of signal and idler from their central frequencies (rad/fs).
struct SpectralPoint {
  double omega_s = 0.0;
  double omega_i = 0.0;

  double sum() const { return omega_s + omega_i; }
  double diff() const { return omega_s - omega_i; }
};

/// Validity window of the paraxial and narrowband expansions. Points outside
/// raise DomainError; they are never clamped.
struct Guards {
  double q_max = 0.5;           ///< 1/um, applied to |q_s| and |q_i|
  double omega_fraction = 0.2;  ///< |Omega| <= omega_fraction * omega_0

  void check(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
             const DerivedParams& d) const;
};

enum class PmfKind { GeneralSinc, DoubleSinc, GaussianSubstitute };
std::string_view to_string(PmfKind k);

/// sin(x)/x, with a Taylor series for |x| < 1e-4.
double sinc(double x);

/// Type-I mismatch, 1/um:
///   -|q_s - q_i|^2 / (2 k_p) + (GVD_s/4)(W_s - W_i)^2 - (1/v_gp - 1/v_gs)(W_s + W_i)
double delta_kz_type1(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                      const DerivedParams& d, const Guards& guards = {});

/// Type-II mismatch, 1/um:
///   -|q_s - q_i|^2 / (2 k_p) + (sqrt(GVD_s) W_s - sqrt(GVD_i) W_i)^2 / 2
///   - (W_s + W_i)/v_gp + W_s/v_gs + W_i/v_gi
/// Throws ValidationError when either GVD is negative.
double delta_kz_type2(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                      const DerivedParams& d, const Guards& guards = {});

/// sinc(delta_kz * L / 2). `length` in um.
double pmf_sinc(double delta_kz, double length);

/// Theta(q) * Theta~(W) with the type-I spectral factor.
double pmf_double_sinc_type1(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                             const DerivedParams& d, double length, const Guards& guards = {});

/// Theta(q) * Theta~(W) with the type-II spectral factor.
double pmf_double_sinc_type2(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                             const DerivedParams& d, double length, const Guards& guards = {});

/// exp(-A (L / 4 k_p) q_rel_sq), A = 8/3. Throws ValidationError for q_rel_sq < 0.
double gaussian_spatial_substitute(double q_rel_sq, const DerivedParams& d, double length);

/// Dispatches on kind and on d.type. GaussianSubstitute replaces only the
/// spatial factor of the double-sinc product by its Gaussian.
double pmf(PmfKind kind, const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
           const DerivedParams& d, double length, const Guards& guards = {});

/// Unchecked building blocks, in terms of v2 = |q_s - q_i|^2. Used by the
/// integrators, which sample outside the guard window by construction.
namespace kernel {

inline double spatial_mismatch(double v2, double k_p) { return -v2 / (2.0 * k_p); }

/// Spectral part of delta_kz for d.type.
double spectral_mismatch(double omega_s, double omega_i, const DerivedParams& d);

/// Spectral part with only the quadratic dispersion term kept.
double spectral_mismatch_quadratic(double omega_s, double omega_i, const DerivedParams& d);

/// Coefficient c such that the quadratic dispersion term is c * (W_s - W_i)^2
/// along the difference direction.
double quadratic_diff_coefficient(const DerivedParams& d);

}  // namespace kernel

}  // namespace spdc
