#include "spdc/phase_matching.hpp"

#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

TransversePoint TransversePoint::polar(double q, double phi) { return {q * std::cos(phi), q * std::sin(phi)}; }

double TransversePoint::norm() const { return std::hypot(qx, qy); }

double TransversePoint::azimuth() const { return std::atan2(qy, qx); }

std::string_view to_string(PmfKind k) {
  switch (k) {
    case PmfKind::GeneralSinc: return "general_sinc";
    case PmfKind::DoubleSinc: return "double_sinc";
    case PmfKind::GaussianSubstitute: return "gaussian_substitute";
  }
  return "?";
}

void Guards::check(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                   const DerivedParams& d) const {
  auto fail = [](const char* what, double value, double bound) {
    std::ostringstream os;
    os << what << " = " << value << " exceeds bound " << bound;
    throw DomainError(os.str());
  };
  if (!(qs.norm() <= q_max)) fail("paraxial guard |q_s|", qs.norm(), q_max);
  if (!(qi.norm() <= q_max)) fail("paraxial guard |q_i|", qi.norm(), q_max);
  const double omega_max = omega_fraction * d.omega_0;
  if (!(std::abs(w.omega_s) <= omega_max)) fail("narrowband guard |Omega_s|", std::abs(w.omega_s), omega_max);
  if (!(std::abs(w.omega_i) <= omega_max)) fail("narrowband guard |Omega_i|", std::abs(w.omega_i), omega_max);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace kernel {

namespace {

void require_nonnegative_gvd(const DerivedParams& d) {
  if (d.gvd_s < 0.0) throw ValidationError("negative GVD has no real square root", "crystal.gvd_s");
  if (d.gvd_i < 0.0) throw ValidationError("negative GVD has no real square root", "crystal.gvd_i");
}

double type2_quadratic(double omega_s, double omega_i, const DerivedParams& d) {
  const double x = std::sqrt(d.gvd_s) * omega_s - std::sqrt(d.gvd_i) * omega_i;
  return 0.5 * x * x;
}

}  // namespace

double spectral_mismatch(double omega_s, double omega_i, const DerivedParams& d) {
  if (d.type == SpdcType::TypeI) {
    const double diff = omega_s - omega_i;
    return 0.25 * d.gvd_s * diff * diff - d.delta_inv_vg * (omega_s + omega_i);
  }
  require_nonnegative_gvd(d);
  return type2_quadratic(omega_s, omega_i, d) - (omega_s + omega_i) * d.inv_vg_p + omega_s * d.inv_vg_s +
         omega_i * d.inv_vg_i;
}

double spectral_mismatch_quadratic(double omega_s, double omega_i, const DerivedParams& d) {
  if (d.type == SpdcType::TypeI) {
    const double diff = omega_s - omega_i;
    return 0.25 * d.gvd_s * diff * diff;
  }
  require_nonnegative_gvd(d);
  return type2_quadratic(omega_s, omega_i, d);
}

double quadratic_diff_coefficient(const DerivedParams& d) {
  if (d.type == SpdcType::TypeI) return 0.25 * d.gvd_s;
  const double s = std::sqrt(std::max(d.gvd_s, 0.0)) + std::sqrt(std::max(d.gvd_i, 0.0));
  return s * s / 8.0;
}

}  // namespace kernel

namespace {

double rel_momentum_sq(const TransversePoint& qs, const TransversePoint& qi) {
  const double dx = qs.qx - qi.qx;
  const double dy = qs.qy - qi.qy;
  return dx * dx + dy * dy;
}

double spatial_factor(const TransversePoint& qs, const TransversePoint& qi, const DerivedParams& d,
                      double length) {
  return sinc(length * rel_momentum_sq(qs, qi) / (4.0 * d.k_p));
}

double spectral_factor(const SpectralPoint& w, const DerivedParams& d, double length) {
  if (d.type == SpdcType::TypeI) {
    const double arg = 0.5 * d.beta_disp * w.diff() * w.diff() - d.delta_inv_vg * w.sum();
    return sinc(0.5 * length * arg);
  }
  // Written as printed: the negative of the type-II spectral mismatch.
  const double arg = -kernel::spectral_mismatch_quadratic(w.omega_s, w.omega_i, d) + w.sum() * d.inv_vg_p -
                     w.omega_s * d.inv_vg_s - w.omega_i * d.inv_vg_i;
  return sinc(0.5 * length * arg);
}

}  // namespace

double delta_kz_type1(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                      const DerivedParams& d, const Guards& guards) {
  guards.check(qs, qi, w, d);
  const double diff = w.diff();
  return kernel::spatial_mismatch(rel_momentum_sq(qs, qi), d.k_p) + 0.25 * d.gvd_s * diff * diff -
         d.delta_inv_vg * w.sum();
}

double delta_kz_type2(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                      const DerivedParams& d, const Guards& guards) {
  guards.check(qs, qi, w, d);
  DerivedParams as_type2 = d;
  as_type2.type = SpdcType::TypeII;
  return kernel::spatial_mismatch(rel_momentum_sq(qs, qi), d.k_p) +
         kernel::spectral_mismatch(w.omega_s, w.omega_i, as_type2);
}

double pmf_sinc(double delta_kz, double length) { return sinc(0.5 * delta_kz * length); }

double pmf_double_sinc_type1(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                             const DerivedParams& d, double length, const Guards& guards) {
  guards.check(qs, qi, w, d);
  DerivedParams as_type1 = d;
  as_type1.type = SpdcType::TypeI;
  return spatial_factor(qs, qi, d, length) * spectral_factor(w, as_type1, length);
}

double pmf_double_sinc_type2(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                             const DerivedParams& d, double length, const Guards& guards) {
  guards.check(qs, qi, w, d);
  DerivedParams as_type2 = d;
  as_type2.type = SpdcType::TypeII;
  return spatial_factor(qs, qi, d, length) * spectral_factor(w, as_type2, length);
}

double gaussian_spatial_substitute(double q_rel_sq, const DerivedParams& d, double length) {
  if (!(q_rel_sq >= 0.0)) throw ValidationError("squared momentum must be nonnegative", "q_rel_sq");
  return std::exp(-kGaussianSubstituteA * (length / (4.0 * d.k_p)) * q_rel_sq);
}

double pmf(PmfKind kind, const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
           const DerivedParams& d, double length, const Guards& guards) {
  const bool type1 = d.type == SpdcType::TypeI;
  switch (kind) {
    case PmfKind::GeneralSinc:
      return pmf_sinc(type1 ? delta_kz_type1(qs, qi, w, d, guards) : delta_kz_type2(qs, qi, w, d, guards),
                      length);
    case PmfKind::DoubleSinc:
      return type1 ? pmf_double_sinc_type1(qs, qi, w, d, length, guards)
                   : pmf_double_sinc_type2(qs, qi, w, d, length, guards);
    case PmfKind::GaussianSubstitute:
      guards.check(qs, qi, w, d);
      return gaussian_spatial_substitute(rel_momentum_sq(qs, qi), d, length) * spectral_factor(w, d, length);
  }
  return 0.0;
}

}  // namespace spdc
