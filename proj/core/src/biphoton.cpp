#include "spdc/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spdc/errors.hpp"
#include "spdc/parallel.hpp"
#include "spdc/units.hpp"

namespace spdc {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::General: return "general";
    case ModelKind::DoubleSinc: return "double_sinc";
    case ModelKind::FourGaussian: return "four_gaussian";
  }
  return "?";
}

std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  for (ModelKind k : {ModelKind::General, ModelKind::DoubleSinc, ModelKind::FourGaussian})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::string_view to_string(KernelMode m) {
  return m == KernelMode::FullSinc ? "full_sinc" : "quadratic_only";
}

std::optional<KernelMode> kernel_mode_from_string(std::string_view s) {
  if (s == "full_sinc") return KernelMode::FullSinc;
  if (s == "quadratic_only") return KernelMode::QuadraticOnly;
  return std::nullopt;
}

BiphotonModel::BiphotonModel(ModelKind kind, const PumpSpec& pump, const CrystalSpec& crystal,
                             const RegimeOverride& regime_override, const Guards& guards)
    : kind_(kind),
      pump_(pump),
      crystal_(crystal),
      override_(regime_override),
      guards_(guards),
      derived_(derive_params(pump, crystal, regime_override)) {}

BiphotonModel::BiphotonModel(ModelKind kind, const PumpSpec& pump, const CrystalSpec& crystal,
                             const DerivedParams& derived, const RegimeOverride& regime_override,
                             const Guards& guards)
    : BiphotonModel(kind, pump, crystal, regime_override, guards) {
  if (!(derived == derived_)) throw ValidationError("derived parameters do not match pump and crystal", "derived");
}

double BiphotonModel::pump_transverse(double u2) const { return std::exp(-derived_.w_p * derived_.w_p * u2); }

double BiphotonModel::pump_spectral(double omega_sum) const {
  const double x2 = omega_sum * omega_sum;
  if (kind_ == ModelKind::FourGaussian) {
    const double factor = derived_.type == SpdcType::TypeI ? derived_.alpha : derived_.beta_t2;
    return std::exp(-factor * x2 / (2.0 * derived_.a_tau * derived_.a_tau));
  }
  return std::exp(-derived_.tau * derived_.tau * x2 / (8.0 * std::log(2.0)));
}

double BiphotonModel::sinc_argument(double v2, double omega_s, double omega_i, KernelMode mode) const {
  const double spectral = mode == KernelMode::FullSinc
                              ? kernel::spectral_mismatch(omega_s, omega_i, derived_)
                              : kernel::spectral_mismatch_quadratic(omega_s, omega_i, derived_);
  return 0.5 * derived_.length * (kernel::spatial_mismatch(v2, derived_.k_p) + spectral);
}

double BiphotonModel::pmf_factor(double v2, double omega_s, double omega_i, KernelMode mode) const {
  const DerivedParams& d = derived_;
  switch (kind_) {
    case ModelKind::General: return sinc(sinc_argument(v2, omega_s, omega_i, mode));
    case ModelKind::DoubleSinc: {
      const double spectral = mode == KernelMode::FullSinc ? kernel::spectral_mismatch(omega_s, omega_i, d)
                                                           : kernel::spectral_mismatch_quadratic(omega_s, omega_i, d);
      return sinc(0.5 * d.length * kernel::spatial_mismatch(v2, d.k_p)) * sinc(0.5 * d.length * spectral);
    }
    case ModelKind::FourGaussian: {
      double diff = 0.0;
      if (d.type == SpdcType::TypeI)
        diff = omega_s - omega_i;
      else
        diff = std::sqrt(d.gvd_s) * omega_s - std::sqrt(d.gvd_i) * omega_i;
      return std::exp(-d.sigma_q * d.sigma_q * v2) * std::exp(-diff * diff / (2.0 * d.b_tau * d.b_tau));
    }
  }
  return 0.0;
}

double BiphotonModel::mode_kernel(double v2, double omega_s, double omega_i, KernelMode mode) const {
  return pump_spectral(omega_s + omega_i) * pmf_factor(v2, omega_s, omega_i, mode);
}

std::complex<double> BiphotonModel::amplitude(const TransversePoint& qs, const TransversePoint& qi,
                                              const SpectralPoint& w) const {
  guards_.check(qs, qi, w, derived_);
  const TransversePoint u{qs.qx + qi.qx, qs.qy + qi.qy};
  const TransversePoint v{qs.qx - qi.qx, qs.qy - qi.qy};
  return pump_transverse(u.norm2()) * pump_spectral(w.sum()) * pmf_factor(v.norm2(), w.omega_s, w.omega_i);
}

SpectralFrame BiphotonModel::spectral_frame() const {
  if (derived_.type == SpdcType::TypeI) return {};
  const double gs = std::sqrt(derived_.gvd_s);
  const double gi = std::sqrt(std::max(derived_.gvd_i, 0.0));
  const double s = gs + gi;
  SpectralFrame f;
  f.s_x = gi / s;
  f.s_y = 1.0 / s;
  f.i_x = gs / s;
  f.i_y = -1.0 / s;
  f.jacobian = 1.0 / s;
  return f;
}

double BiphotonModel::sum_axis_scale() const {
  if (kind_ == ModelKind::FourGaussian) {
    const double factor = derived_.type == SpdcType::TypeI ? derived_.alpha : derived_.beta_t2;
    return derived_.a_tau / std::sqrt(factor);
  }
  return 2.0 * std::sqrt(std::log(2.0)) / derived_.tau;
}

double BiphotonModel::difference_axis_scale() const {
  if (kind_ != ModelKind::FourGaussian) throw ValidationError("only the Gaussian model has a Gaussian difference axis", "model.kind");
  return derived_.b_tau;
}

double BiphotonModel::difference_box(double v2_max, double x_max, double margin, KernelMode mode) const {
  if (kind_ == ModelKind::FourGaussian) throw ValidationError("the Gaussian model needs no box", "model.kind");
  const DerivedParams& d = derived_;
  double c2 = 0.0;
  double c1x = 0.0;
  double c1y = 0.0;
  if (d.type == SpdcType::TypeI) {
    c2 = 0.25 * d.gvd_s;
    c1x = d.delta_inv_vg;
  } else {
    const SpectralFrame f = spectral_frame();
    c2 = 0.5;
    c1x = -d.inv_vg_p + f.s_x * d.inv_vg_s + f.i_x * d.inv_vg_i;
    c1y = f.s_y * d.inv_vg_s + f.i_y * d.inv_vg_i;
  }
  if (mode == KernelMode::QuadraticOnly) c1x = c1y = 0.0;
  const double spatial = d.length * v2_max / (4.0 * d.k_p);
  const double r = 2.0 / d.length * (spatial + margin) + std::abs(c1x) * x_max;
  return (std::abs(c1y) + std::sqrt(c1y * c1y + 4.0 * c2 * r)) / (2.0 * c2);
}

double position_amplitude_4g(double x_s, double x_i, const SpectralPoint& w, const BiphotonModel& model) {
  if (model.kind() != ModelKind::FourGaussian)
    throw ValidationError("position-space amplitude requires the four-Gaussian model", "model.kind");
  const DerivedParams& d = model.derived();
  const double sum = x_s + x_i;
  const double diff = x_s - x_i;
  return std::exp(-sum * sum / (16.0 * d.w_p * d.w_p)) * std::exp(-diff * diff / (16.0 * d.sigma_x * d.sigma_x)) *
         model.pump_spectral(w.sum()) * model.pmf_factor(0.0, w.omega_s, w.omega_i);
}

double position_amplitude_type1_4g(double x_s, double x_i, const SpectralPoint& w, const BiphotonModel& model) {
  if (model.type() != SpdcType::TypeI) throw ValidationError("requires type-I SPDC", "crystal.type");
  return position_amplitude_4g(x_s, x_i, w, model);
}

double normalization_closed_form(const BiphotonModel& model) {
  if (model.kind() != ModelKind::FourGaussian)
    throw ValidationError("closed-form normalization exists only for the four-Gaussian model", "model.kind");
  const DerivedParams& d = model.derived();
  const double pi = units::pi;
  const double transverse = 0.25 * (pi / (2.0 * d.w_p * d.w_p)) * (pi / (2.0 * d.sigma_q * d.sigma_q));
  const double spectral = model.spectral_frame().jacobian * std::sqrt(pi) * model.sum_axis_scale() *
                          std::sqrt(pi) * model.difference_axis_scale();
  return 1.0 / std::sqrt(transverse * spectral);
}

Normalization normalize(const BiphotonModel& model, const NormalizationSpec& spec) {
  if (spec.transverse_order < 2 || spec.sum_order < 2 || spec.difference_order < 2)
    throw ConvergenceError("degenerate quadrature grid: every axis needs at least two nodes");
  const DerivedParams& d = model.derived();
  const SpectralFrame frame = model.spectral_frame();

  QuadratureSpec q;
  q.tolerance = spec.tolerance;
  q.max_refinements = spec.max_refinements;
  q.threads = spec.threads;
  const Axis sum_axis{Rule::GaussHermite, spec.sum_order, 0.0, model.sum_axis_scale()};
  if (model.is_gaussian()) {
    q.axes = {Axis{Rule::GaussLaguerre, spec.transverse_order, 0.0, 1.0 / (2.0 * d.sigma_q * d.sigma_q)}, sum_axis,
              Axis{Rule::GaussHermite, spec.difference_order, 0.0, model.difference_axis_scale()}};
  } else {
    const double v_max = 2.0 * model.guards().q_max;
    const double omega_max = model.guards().omega_fraction * d.omega_0;
    const double y_max = d.type == SpdcType::TypeI ? 2.0 * omega_max : omega_max / frame.jacobian;
    q.axes = {Axis{Rule::GaussLegendre, spec.transverse_order, 0.5 * v_max * v_max, 0.5 * v_max * v_max}, sum_axis,
              Axis{Rule::GaussLegendre, spec.difference_order, 0.0, y_max}};
  }

  const double scale2 = spec.amplitude_scale * spec.amplitude_scale;
  const Integrand f = [&](std::span<const double> x) {
    const SpectralPoint w = frame.point(x[1], x[2]);
    const double k = model.mode_kernel(x[0], w.omega_s, w.omega_i);
    return scale2 * k * k;
  };
  Normalization out;
  out.report = integrate_nd(f, q);
  if (!out.report.converged)
    throw ConvergenceError("normalization did not converge (last relative change " +
                           std::to_string(out.report.last_delta()) + ")");
  // d^2q_s d^2q_i = d^2u d^2v / 4, d^2v = pi d|v|^2, int exp(-2 w_p^2 u^2) d^2u = pi / (2 w_p^2)
  const double prefactor = 0.25 * (units::pi / (2.0 * d.w_p * d.w_p)) * units::pi * frame.jacobian;
  out.constant = 1.0 / std::sqrt(prefactor * out.report.value);
  if (model.is_gaussian()) out.closed_form = normalization_closed_form(model) / std::abs(spec.amplitude_scale);
  return out;
}

std::string_view to_string(GridVariable v) {
  switch (v) {
    case GridVariable::LambdaS: return "lambda_s";
    case GridVariable::LambdaI: return "lambda_i";
    case GridVariable::OmegaS: return "omega_s";
    case GridVariable::OmegaI: return "omega_i";
    case GridVariable::QSx: return "q_sx";
    case GridVariable::QIx: return "q_ix";
    case GridVariable::XS: return "x_s";
    case GridVariable::XI: return "x_i";
  }
  return "?";
}

std::optional<GridVariable> grid_variable_from_string(std::string_view s) {
  for (GridVariable v : {GridVariable::LambdaS, GridVariable::LambdaI, GridVariable::OmegaS, GridVariable::OmegaI,
                         GridVariable::QSx, GridVariable::QIx, GridVariable::XS, GridVariable::XI})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
  for (int k = 0; k < points; ++k)
    out[static_cast<std::size_t>(k)] = k == points - 1 ? max : min + (max - min) * k / (points - 1);
  return out;
}

namespace {

bool is_position(GridVariable v) { return v == GridVariable::XS || v == GridVariable::XI; }
bool is_momentum(GridVariable v) { return v == GridVariable::QSx || v == GridVariable::QIx; }

int photon_slot(GridVariable v) {
  switch (v) {
    case GridVariable::LambdaS:
    case GridVariable::OmegaS: return 0;
    case GridVariable::LambdaI:
    case GridVariable::OmegaI: return 1;
    default: return -1;
  }
}

void validate_axis(const GridAxis& a, const std::string& field) {
  if (a.points < 2) throw ValidationError("needs at least 2 points", field + ".points");
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max))
    throw ValidationError("range must satisfy min < max", field + ".range");
  if ((a.variable == GridVariable::LambdaS || a.variable == GridVariable::LambdaI) && !(a.min > 0.0))
    throw ValidationError("wavelengths must be positive", field + ".range");
}

struct Coordinates {
  double lambda_s, lambda_i;
  std::optional<double> omega_s, omega_i;
  double q_sx, q_sy, q_ix, q_iy, x_s, x_i;

  void set(GridVariable v, double value) {
    switch (v) {
      case GridVariable::LambdaS: lambda_s = value; break;
      case GridVariable::LambdaI: lambda_i = value; break;
      case GridVariable::OmegaS: omega_s = value; break;
      case GridVariable::OmegaI: omega_i = value; break;
      case GridVariable::QSx: q_sx = value; break;
      case GridVariable::QIx: q_ix = value; break;
      case GridVariable::XS: x_s = value; break;
      case GridVariable::XI: x_i = value; break;
    }
  }

  SpectralPoint spectral(double center) const {
    return {omega_s.value_or(units::detuning(lambda_s, center)), omega_i.value_or(units::detuning(lambda_i, center))};
  }
};

}  // namespace

GridPoint grid_point(const GridSpec& grid, double lambda_center, double first, double second) {
  Coordinates c{grid.lambda_s.value_or(lambda_center), grid.lambda_i.value_or(lambda_center), std::nullopt,
                std::nullopt, grid.q_sx, grid.q_sy, grid.q_ix, grid.q_iy, grid.x_s, grid.x_i};
  c.set(grid.first.variable, first);
  c.set(grid.second.variable, second);
  return {{c.q_sx, c.q_sy}, {c.q_ix, c.q_iy}, c.spectral(lambda_center), c.x_s, c.x_i};
}

bool is_position_grid(const GridSpec& grid) { return is_position(grid.first.variable) || is_position(grid.second.variable); }

void GridSpec::validate() const {
  validate_axis(first, "grid.first");
  validate_axis(second, "grid.second");
  if (first.variable == second.variable) throw ValidationError("axes must differ", "grid.second.variable");
  const int a = photon_slot(first.variable);
  if (a >= 0 && a == photon_slot(second.variable))
    throw ValidationError("both axes describe the same photon's frequency", "grid.second.variable");
  const bool pos = is_position(first.variable) || is_position(second.variable);
  const bool mom = is_momentum(first.variable) || is_momentum(second.variable);
  if (pos && mom) throw ValidationError("cannot mix position and momentum axes", "grid.second.variable");
  for (const auto& [value, name] : {std::pair{lambda_s, "grid.lambda_s"}, std::pair{lambda_i, "grid.lambda_i"}})
    if (value && !(*value > 0.0)) throw ValidationError("wavelengths must be positive", name);
}

GridField jsa_grid(const BiphotonModel& model, const GridSpec& grid) {
  grid.validate();
  const bool position = is_position_grid(grid);
  if (position && model.kind() != ModelKind::FourGaussian)
    throw ValidationError("position axes require the four-Gaussian model", "model.kind");

  GridField out;
  out.first_variable = grid.first.variable;
  out.second_variable = grid.second.variable;
  out.first = grid.first.values();
  out.second = grid.second.values();
  out.quantity = grid.quantity;
  out.values.assign(out.first.size() * out.second.size(), 0.0);

  const double center = 2.0 * model.derived().lambda_p;

  parallel_for(out.first.size(), grid.threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < out.second.size(); ++j) {
      const GridPoint g = grid_point(grid, center, out.first[i], out.second[j]);
      double amp = 0.0;
      if (position)
        amp = std::abs(position_amplitude_4g(g.x_s, g.x_i, g.w, model));
      else
        amp = std::abs(model.amplitude(g.qs, g.qi, g.w));
      out.values[i * out.second.size() + j] = grid.quantity == GridQuantity::Intensity ? amp * amp : amp;
    }
  });
  return out;
}

JsaStats jsa_stats(const GridField& field) { return jsa_stats(field.first, field.second, field.values); }

JsaStats jsa_stats(const std::vector<double>& first, const std::vector<double>& second,
                   const std::vector<double>& values) {
  if (values.size() != first.size() * second.size())
    throw ValidationError("field size does not match its axes", "field");
  const std::size_t n = values.size();
  for (double v : values)
    if (!(v >= 0.0)) throw ValidationError("field must be nonnegative", "field");
  const double total = pairwise_sum(values);
  if (!(total > 0.0)) throw ValidationError("field is identically zero", "field");

  std::vector<double> m0(n), m1(n);
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) {
      const std::size_t k = i * second.size() + j;
      m0[k] = values[k] * first[i];
      m1[k] = values[k] * second[j];
    }
  JsaStats s;
  s.centroid[0] = pairwise_sum(m0) / total;
  s.centroid[1] = pairwise_sum(m1) / total;

  std::vector<double> c00(n), c01(n), c11(n);
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) {
      const std::size_t k = i * second.size() + j;
      const double a = first[i] - s.centroid[0];
      const double b = second[j] - s.centroid[1];
      c00[k] = values[k] * a * a;
      c01[k] = values[k] * a * b;
      c11[k] = values[k] * b * b;
    }
  const double a = pairwise_sum(c00) / total;
  const double b = pairwise_sum(c01) / total;
  const double c = pairwise_sum(c11) / total;
  s.covariance[0][0] = a;
  s.covariance[0][1] = s.covariance[1][0] = b;
  s.covariance[1][1] = c;

  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  const double lmax = mean + radius;
  const double lmin = std::max(mean - radius, 0.0);
  s.axis_ratio = lmin > 0.0 ? std::sqrt(lmax / lmin) : std::numeric_limits<double>::infinity();
  s.isotropic = radius <= 1e-6 * mean;
  if (s.isotropic) {
    s.tilt = s.tilt_from_diagonal = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.tilt = 0.5 * std::atan2(2.0 * b, a - c);
  double t = s.tilt - 0.25 * units::pi;
  while (t > 0.5 * units::pi) t -= units::pi;
  while (t <= -0.5 * units::pi) t += units::pi;
  s.tilt_from_diagonal = t;
  return s;
}

}  // namespace spdc
