#include "spdc/params.hpp"

#include <cmath>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

std::string_view to_string(SpdcType t) { return t == SpdcType::TypeI ? "TypeI" : "TypeII"; }

std::string_view to_string(PulseRegime r) { return r == PulseRegime::Short ? "short" : "long"; }

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError("must be finite and strictly positive (got " + std::to_string(v) + ")",
                          field);
  }
}

}  // namespace

void PumpSpec::validate() const {
  require_positive(lambda_p, "pump.lambda_p");
  require_positive(w_p, "pump.w_p");
  require_positive(tau, "pump.tau");
}

void CrystalSpec::validate() const {
  require_positive(length, "crystal.L");
  if (k_p) {
    require_positive(*k_p, "crystal.k_p");
  } else if (n_p) {
    require_positive(*n_p, "crystal.n_p");
  } else {
    throw ValidationError("either n_p or k_p is required", "crystal.n_p");
  }
  for (auto [v, name] : {std::pair{vg_divisor_p, "crystal.vg_p"}, std::pair{vg_divisor_s, "crystal.vg_s"},
                         std::pair{vg_divisor_i, "crystal.vg_i"}}) {
    if (!(v >= 1.0) || !std::isfinite(v)) {
      throw ValidationError("group-velocity divisor must be >= 1", name);
    }
  }
  for (auto [v, name] : {std::pair{gvd_p, "crystal.gvd_p"}, std::pair{gvd_s, "crystal.gvd_s"},
                         std::pair{gvd_i, "crystal.gvd_i"}}) {
    if (!std::isfinite(v)) throw ValidationError("must be finite", name);
  }
  if (type == SpdcType::TypeI) {
    if (vg_divisor_s != vg_divisor_i) {
      throw ValidationError("type-I signal and idler must share the group velocity", "crystal.vg_i");
    }
    if (gvd_s != gvd_i) {
      throw ValidationError("type-I signal and idler must share the GVD", "crystal.gvd_i");
    }
  }
}

double CrystalSpec::inv_vg_p() const { return vg_divisor_p / units::c; }
double CrystalSpec::inv_vg_s() const { return vg_divisor_s / units::c; }
double CrystalSpec::inv_vg_i() const { return vg_divisor_i / units::c; }

PulseRegime regime_for_eta(double eta) { return eta < 1.0 ? PulseRegime::Short : PulseRegime::Long; }

namespace widths {

double a_tau(double A_fed, double lambda_p, double length, double eta, double omega_0) {
  const double prefactor = 1.39 / (units::pi * A_fed * std::sqrt(std::log(2.0)));
  return prefactor * (lambda_p / length) * std::pow(1.0 + std::pow(eta, kWidthGamma), -1.0 / kWidthGamma) *
         omega_0;
}

double b_tau(double B_fed, double lambda_p, double length, double eta, double omega_0) {
  const double prefactor = std::sqrt(lambda_p / (2.0 * units::pi * 0.249 * B_fed * length));
  return prefactor * std::pow(1.0 + std::pow(eta, kWidthGamma), 1.0 / (2.0 * kWidthGamma)) * omega_0 /
         std::sqrt(eta);
}

}  // namespace widths

DerivedParams derive_params(const PumpSpec& pump, const CrystalSpec& crystal,
                            const RegimeOverride& regime_override) {
  pump.validate();
  crystal.validate();
  if (!(crystal.gvd_s > 0.0)) {
    throw ValidationError("signal GVD must be positive for the spectral-width model", "crystal.gvd_s");
  }

  DerivedParams d;
  d.type = crystal.type;
  d.length = crystal.length;
  d.lambda_p = pump.lambda_p;
  d.w_p = pump.w_p;
  d.tau = pump.tau;

  d.k_p = crystal.k_p ? *crystal.k_p : 2.0 * units::pi * *crystal.n_p / pump.lambda_p;
  d.omega_0 = units::angular_frequency(pump.lambda_p);
  d.inv_vg_p = crystal.inv_vg_p();
  d.inv_vg_s = crystal.inv_vg_s();
  d.inv_vg_i = crystal.inv_vg_i();
  d.delta_inv_vg = d.inv_vg_p - d.inv_vg_s;
  d.gvd_s = crystal.gvd_s;
  d.gvd_i = crystal.gvd_i;
  d.beta_disp = crystal.gvd_s / 2.0;

  if (crystal.vg_divisor_p == crystal.vg_divisor_s || d.delta_inv_vg == 0.0) {
    throw ValidationError("degenerate group velocities: 1/v_gp - 1/v_gs vanishes", "crystal.vg_s");
  }
  d.A_fed = 1.0 / d.delta_inv_vg;
  // The width model is even in the mismatch sign; only |A| enters.
  const double A_abs = std::abs(d.A_fed);
  d.eta = 2.0 * units::c * pump.tau / (A_abs * crystal.length);
  d.B_fed = d.omega_0 * units::c * crystal.gvd_s / 4.0;
  d.gamma = kWidthGamma;
  d.a_tau = widths::a_tau(A_abs, pump.lambda_p, crystal.length, d.eta, d.omega_0);
  d.b_tau = widths::b_tau(d.B_fed, pump.lambda_p, crystal.length, d.eta, d.omega_0);

  // 1/(16 sigma_x^2) = 3 k_p / (8 L); sigma_q is its Fourier partner.
  d.sigma_x = std::sqrt(crystal.length / (6.0 * d.k_p));
  d.sigma_q = std::sqrt(kGaussianSubstituteA * crystal.length / (16.0 * d.k_p));

  d.regime = regime_override.regime.value_or(regime_for_eta(d.eta));
  const bool is_short = d.regime == PulseRegime::Short;
  d.alpha = regime_override.alpha.value_or(is_short ? kAlphaShort : kAlphaLong);
  d.beta_t2 = regime_override.beta.value_or(is_short ? kBetaShort : kBetaLong);
  if (!(d.alpha > 0.0)) throw ValidationError("must be positive", "model.alpha");
  if (!(d.beta_t2 > 0.0)) throw ValidationError("must be positive", "model.beta");
  return d;
}

namespace presets {

CrystalSpec bbo_fig5() {
  CrystalSpec c;
  c.type = SpdcType::TypeII;
  c.length = units::mm_to_um(0.5);
  c.vg_divisor_p = 1.708;
  c.vg_divisor_s = 1.626;
  c.vg_divisor_i = 1.684;
  c.gvd_p = units::gvd_per_mm_to_per_um(180.0);
  c.gvd_s = units::gvd_per_mm_to_per_um(61.7);
  c.gvd_i = units::gvd_per_mm_to_per_um(75.1);
  return c;
}

CrystalSpec liio3_fig1() {
  CrystalSpec c;
  c.type = SpdcType::TypeI;
  c.length = units::mm_to_um(5.0);
  return c;
}

std::optional<PresetInfo> crystal_preset(std::string_view name) {
  if (name == kBboFig5) return PresetInfo{bbo_fig5(), true};
  if (name == kLiIO3Fig1) return PresetInfo{liio3_fig1(), false};
  return std::nullopt;
}

}  // namespace presets

}  // namespace spdc
