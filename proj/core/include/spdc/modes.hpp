#pragma once

// Laguerre-Gaussian collection modes in transverse-momentum space.

#include <complex>

namespace spdc {

/// Collection mode: OAM index ell (signed), radial index p, waist w0 (um).
struct CollectionSpec {
  int ell = 0;
  int p_rad = 0;
  double w0 = 0.0;

  void validate() const;
  bool operator==(const CollectionSpec&) const = default;
};

/// Associated Laguerre polynomial L_p^a(y) by the three-term recurrence.
/// Throws ValidationError for negative indices.
double laguerre_assoc(int p_rad, int a, double y);

/// log(n!) for n >= 0. Exact table below 13, lgamma above.
double log_factorial(int n);

/// LG_p^ell(q, phi) =
///   sqrt(p! w0^2 / (4 pi (|ell|+p)!)) 2^(|ell|/2 + 1/2) (q w0 / 2)^|ell|
///   L_p^|ell|(w0^2 q^2 / 2) exp(-w0^2 q^2 / 4) exp(i ell phi)
/// Normalized to one over the transverse-momentum plane.
std::complex<double> lg_mode(double q, double phi, const CollectionSpec& spec);

/// |LG_p^ell(q)|^2 as a function of q^2 only (the azimuthal phase drops out).
double lg_intensity(double q2, const CollectionSpec& spec);

}  // namespace spdc
