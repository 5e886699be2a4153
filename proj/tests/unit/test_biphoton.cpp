#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "spdc/biphoton.hpp"
#include "spdc/errors.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

BiphotonModel liio3_model(ModelKind kind, double tau = 50.0, double length_mm = 5.0) {
  return BiphotonModel(kind, fixtures::pump(tau), fixtures::liio3(length_mm));
}

BiphotonModel bbo_model(ModelKind kind, double tau = 50.0) { return BiphotonModel(kind, fixtures::pump(tau), fixtures::bbo()); }

double wrap_half_turn(double t) {
  while (t > 0.5 * kPi) t -= kPi;
  while (t <= -0.5 * kPi) t += kPi;
  return t;
}

JsaStats omega_stats(const BiphotonModel& m, double box, int n = 201) {
  GridSpec g;
  g.first = {GridVariable::OmegaS, -box, box, n};
  g.second = {GridVariable::OmegaI, -box, box, n};
  return jsa_stats(jsa_grid(m, g));
}

// FWHM of a sampled profile around its maximum, by linear interpolation.
double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t peak = 0;
  for (std::size_t k = 1; k < y.size(); ++k)
    if (y[k] > y[peak]) peak = k;
  const double half = 0.5 * y[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && y[lo] > half) --lo;
  while (hi + 1 < y.size() && y[hi] > half) ++hi;
  const double xl = x[lo] + (half - y[lo]) * (x[lo + 1] - x[lo]) / (y[lo + 1] - y[lo]);
  const double xh = x[hi - 1] + (half - y[hi - 1]) * (x[hi] - x[hi - 1]) / (y[hi] - y[hi - 1]);
  return xh - xl;
}

}  // namespace

TEST(Enums, RoundTrip) {
  for (ModelKind k : {ModelKind::General, ModelKind::DoubleSinc, ModelKind::FourGaussian})
    EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  for (KernelMode k : {KernelMode::FullSinc, KernelMode::QuadraticOnly}) EXPECT_EQ(kernel_mode_from_string(to_string(k)), k);
  EXPECT_FALSE(model_kind_from_string("sinc").has_value());
  EXPECT_EQ(grid_variable_from_string("q_ix"), GridVariable::QIx);
  EXPECT_FALSE(grid_variable_from_string("q_iy").has_value());
}

TEST(Model, DerivedMustMatch) {
  const DerivedParams d = derive_params(fixtures::pump(), fixtures::bbo());
  EXPECT_NO_THROW(BiphotonModel(ModelKind::General, fixtures::pump(), fixtures::bbo(), d));
  DerivedParams bad = d;
  bad.k_p *= 1.0 + 1e-12;
  EXPECT_THROW(BiphotonModel(ModelKind::General, fixtures::pump(), fixtures::bbo(), bad), ValidationError);
}

TEST(Amplitude, FourGaussianAtVanishingSums) {
  for (const BiphotonModel& m : {liio3_model(ModelKind::FourGaussian), bbo_model(ModelKind::FourGaussian)}) {
    const double sq = m.derived().sigma_q;
    for (double q : {0.0, 0.01, 0.05, 0.2}) {
      const auto a = m.amplitude({q, 0.0}, {-q, 0.0}, {});
      EXPECT_NEAR(a.real(), std::exp(-sq * sq * 4.0 * q * q), 1e-15);
      EXPECT_EQ(a.imag(), 0.0);
    }
  }
}

TEST(Amplitude, SincModelsFormula) {
  const BiphotonModel g = liio3_model(ModelKind::General);
  const DerivedParams& d = g.derived();
  const TransversePoint qs{0.01, 0.004}, qi{-0.002, 0.007};
  const SpectralPoint w{0.003, -0.001};
  const double u2 = std::pow(0.008, 2) + std::pow(0.011, 2);
  const double pump = std::exp(-28.0 * 28.0 * u2) * std::exp(-50.0 * 50.0 * std::pow(w.sum(), 2) / (8.0 * std::log(2.0)));
  EXPECT_NEAR(g.amplitude(qs, qi, w).real(), pump * pmf_sinc(delta_kz_type1(qs, qi, w, d), d.length), 1e-15);
  const BiphotonModel ds = liio3_model(ModelKind::DoubleSinc);
  EXPECT_NEAR(ds.amplitude(qs, qi, w).real(), pump * pmf_double_sinc_type1(qs, qi, w, d, d.length), 1e-15);
}

TEST(Amplitude, GuardsPropagate) {
  const BiphotonModel m = liio3_model(ModelKind::General);
  EXPECT_THROW(m.amplitude({0.6, 0.0}, {}, {}), DomainError);
  EXPECT_THROW(m.amplitude({}, {}, {0.0, 1.0}), DomainError);
}

TEST(Amplitude, FourGaussianSeparable) {
  for (const BiphotonModel& m : {liio3_model(ModelKind::FourGaussian), bbo_model(ModelKind::FourGaussian, 500.0)}) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> q(-0.02, 0.02), w(-1e-3, 1e-3);
    for (int k = 0; k < 30; ++k) {
      const TransversePoint a{q(rng), q(rng)}, b{q(rng), q(rng)}, c{q(rng), q(rng)}, e{q(rng), q(rng)};
      const SpectralPoint w1{w(rng), w(rng)}, w2{w(rng), w(rng)};
      const double lhs = m.amplitude(a, b, w1).real() * m.amplitude(c, e, w2).real();
      const double rhs = m.amplitude(a, b, w2).real() * m.amplitude(c, e, w1).real();
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
    }
  }
}

TEST(Amplitude, PumpFactorInvariance) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> q(-0.05, 0.05), w(-0.01, 0.01);
  for (ModelKind kind : {ModelKind::General, ModelKind::DoubleSinc, ModelKind::FourGaussian})
    for (const BiphotonModel& m : {liio3_model(kind), bbo_model(kind)})
      for (int k = 0; k < 10; ++k) {
        const TransversePoint qs{q(rng), q(rng)}, qi{q(rng), q(rng)}, dlt{q(rng), q(rng)};
        const SpectralPoint sp{w(rng), w(rng)};
        const double v2 = std::pow(qs.qx - qi.qx, 2) + std::pow(qs.qy - qi.qy, 2);
        const TransversePoint qs2{qs.qx + dlt.qx, qs.qy + dlt.qy}, qi2{qi.qx + dlt.qx, qi.qy + dlt.qy};
        const double v2b = std::pow(qs2.qx - qi2.qx, 2) + std::pow(qs2.qy - qi2.qy, 2);
        EXPECT_NEAR(m.pmf_factor(v2, sp.omega_s, sp.omega_i), m.pmf_factor(v2b, sp.omega_s, sp.omega_i), 1e-13);
        const double u2 = std::pow(qs.qx + qi.qx, 2) + std::pow(qs.qy + qi.qy, 2);
        EXPECT_NEAR(m.amplitude(qs, qi, sp).real(),
                    m.pump_transverse(u2) * m.pump_spectral(sp.sum()) * m.pmf_factor(v2, sp.omega_s, sp.omega_i), 1e-15);
      }
}

TEST(Amplitude, TypeIExchangeSymmetry) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> q(-0.05, 0.05), w(-0.01, 0.01);
  for (ModelKind kind : {ModelKind::General, ModelKind::DoubleSinc, ModelKind::FourGaussian}) {
    const BiphotonModel m = liio3_model(kind);
    for (int k = 0; k < 20; ++k) {
      const TransversePoint qs{q(rng), q(rng)}, qi{q(rng), q(rng)};
      const SpectralPoint a{w(rng), w(rng)};
      EXPECT_NEAR(std::abs(m.amplitude(qs, qi, a)), std::abs(m.amplitude(qi, qs, {a.omega_i, a.omega_s})), 1e-15);
    }
  }
}

TEST(Amplitude, LocalizationAroundDegeneracy) {
  // long pump pulse so the spectral pump envelope is sub-nanometre
  const double tau = units::ps_to_fs(1.0);
  std::vector<double> lam, gen, dsc;
  for (int k = 0; k <= 2000; ++k) lam.push_back(0.795 + 0.01 * k / 2000.0);
  const BiphotonModel g = liio3_model(ModelKind::General, tau);
  const BiphotonModel ds = liio3_model(ModelKind::DoubleSinc, tau);
  for (double l : lam) {
    const SpectralPoint w{units::detuning(l, 0.8), 0.0};
    gen.push_back(std::norm(g.amplitude({-0.01, 0.0}, {0.01, 0.0}, w)));
    dsc.push_back(std::norm(ds.amplitude({-0.01, 0.0}, {0.01, 0.0}, w)));
  }
  const double wg = fwhm(lam, gen), wd = fwhm(lam, dsc);
  EXPECT_LE(wg, 0.001);
  EXPECT_LE(wd, 0.001);
  EXPECT_NEAR(wg / wd, 1.0, 0.1);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < gen.size(); ++k)
    if (gen[k] > gen[peak]) peak = k;
  EXPECT_NEAR(lam[peak], 0.8, 1e-4);
  double inside = 0.0, total = 0.0;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    total += gen[k];
    if (std::abs(lam[k] - 0.8) <= 0.0005) inside += gen[k];
  }
  EXPECT_GE(inside / total, 0.75);
}

TEST(Normalize, ClosedFormMatchesQuadrature) {
  for (const BiphotonModel& m : {liio3_model(ModelKind::FourGaussian), liio3_model(ModelKind::FourGaussian, 5e4),
                                 bbo_model(ModelKind::FourGaussian), bbo_model(ModelKind::FourGaussian, 5e3)}) {
    const Normalization n = normalize(m);
    ASSERT_TRUE(n.closed_form.has_value());
    EXPECT_NEAR(n.constant / *n.closed_form, 1.0, 1e-6);
    EXPECT_TRUE(n.report.converged);
  }
}

TEST(Normalize, UnitNormByIndependentIntegration) {
  const BiphotonModel m = liio3_model(ModelKind::FourGaussian);
  const DerivedParams& d = m.derived();
  const double N = normalize(m).constant;
  // one Cartesian component of (q_s, q_i), integrated in (u, v) = (q_s + q_i, q_s - q_i)
  const double ur = 6.0 / (2.0 * d.w_p), vr = 6.0 / (2.0 * d.sigma_q);
  const double qx = 0.5 * fixtures::simpson(
                              [&](double u) {
                                return fixtures::simpson(
                                    [&](double v) {
                                      return std::exp(-2.0 * d.w_p * d.w_p * u * u) *
                                             std::exp(-2.0 * d.sigma_q * d.sigma_q * v * v);
                                    },
                                    -vr, vr, 400);
                              },
                              -ur, ur, 400);
  // spectral plane in (X, Y) = (Omega_s + Omega_i, Omega_s - Omega_i)
  const double xr = 6.0 * m.sum_axis_scale(), yr = 6.0 * d.b_tau;
  const double om = 0.5 * fixtures::simpson(
                              [&](double x) {
                                return fixtures::simpson(
                                    [&](double y) {
                                      const double a = m.pump_spectral(x) * m.pmf_factor(0.0, 0.5 * (x + y), 0.5 * (x - y));
                                      return a * a;
                                    },
                                    -yr, yr, 400);
                              },
                              -xr, xr, 400);
  EXPECT_NEAR(N * N * qx * qx * om, 1.0, 1e-4);
}

TEST(Normalize, SincModelsOnGuardWindow) {
  NormalizationSpec spec;
  spec.tolerance = 1e-4;
  const BiphotonModel m = liio3_model(ModelKind::DoubleSinc, 50.0, 0.5);
  const Normalization n = normalize(m, spec);
  EXPECT_GT(n.constant, 0.0);
  EXPECT_FALSE(n.closed_form.has_value());
  spec.amplitude_scale = 2.0;
  EXPECT_NEAR(normalize(m, spec).constant, 0.5 * n.constant, 1e-12 * n.constant);
}

TEST(Normalize, ScaleDoublingHalvesConstant) {
  const BiphotonModel m = bbo_model(ModelKind::FourGaussian);
  NormalizationSpec spec;
  const double n1 = normalize(m, spec).constant;
  spec.amplitude_scale = 2.0;
  const Normalization n2 = normalize(m, spec);
  EXPECT_NEAR(n2.constant, 0.5 * n1, 1e-12 * n1);
  EXPECT_NEAR(*n2.closed_form, 0.5 * normalization_closed_form(m), 1e-15 * n1);
}

TEST(Normalize, DegenerateGridIsConvergenceError) {
  NormalizationSpec spec;
  spec.sum_order = 1;
  EXPECT_THROW(normalize(liio3_model(ModelKind::FourGaussian), spec), ConvergenceError);
  spec = {};
  spec.transverse_order = 1;
  EXPECT_THROW(normalize(liio3_model(ModelKind::General), spec), ConvergenceError);
  EXPECT_THROW(normalization_closed_form(liio3_model(ModelKind::General)), ValidationError);
}

TEST(Grid, Validation) {
  GridSpec g;
  g.first = {GridVariable::LambdaS, 0.79, 0.81, 1};
  g.second = {GridVariable::LambdaI, 0.79, 0.81, 5};
  EXPECT_THROW(g.validate(), ValidationError);
  g.first.points = 5;
  EXPECT_NO_THROW(g.validate());
  g.second.variable = GridVariable::OmegaS;
  EXPECT_THROW(g.validate(), ValidationError);
  g.first = {GridVariable::XS, -5, 5, 4};
  g.second = {GridVariable::QIx, -0.1, 0.1, 4};
  EXPECT_THROW(g.validate(), ValidationError);
  g.second = {GridVariable::XI, -5, 5, 4};
  EXPECT_THROW(jsa_grid(liio3_model(ModelKind::General), g), ValidationError);
  EXPECT_NO_THROW(jsa_grid(liio3_model(ModelKind::FourGaussian), g));
}

TEST(Grid, GuardViolationsPropagate) {
  GridSpec g;
  g.first = {GridVariable::QSx, -0.6, 0.6, 5};
  g.second = {GridVariable::LambdaI, 0.79, 0.81, 5};
  EXPECT_THROW(jsa_grid(liio3_model(ModelKind::General), g), DomainError);
}

TEST(Grid, RowMajorAndThreadIndependent) {
  const BiphotonModel m = liio3_model(ModelKind::General, 1000.0);
  GridSpec g;
  g.first = {GridVariable::LambdaS, 0.798, 0.802, 41};
  g.second = {GridVariable::QSx, -0.02, 0.02, 33};
  g.q_ix = 0.01;
  const GridField a = jsa_grid(m, g);
  ASSERT_EQ(a.values.size(), 41u * 33u);
  const SpectralPoint w{units::detuning(a.first[7], 0.8), 0.0};
  EXPECT_EQ(a.at(7, 5), std::norm(m.amplitude({a.second[5], 0.0}, {0.01, 0.0}, w)));
  g.threads = 8;
  EXPECT_EQ(jsa_grid(m, g).values, a.values);
  g.quantity = GridQuantity::Amplitude;
  const GridField b = jsa_grid(m, g);
  EXPECT_NEAR(b.at(3, 4) * b.at(3, 4), a.at(3, 4), 1e-16);
}

TEST(Jsa, SymmetricCoefficientsGiveSymmetricField) {
  CrystalSpec c = fixtures::bbo();
  c.gvd_i = c.gvd_s;
  c.vg_divisor_i = c.vg_divisor_s;
  const BiphotonModel m(ModelKind::FourGaussian, fixtures::pump(500.0), c);
  GridSpec g;
  g.first = {GridVariable::OmegaS, -0.01, 0.01, 61};
  g.second = {GridVariable::OmegaI, -0.01, 0.01, 61};
  const GridField f = jsa_grid(m, g);
  for (std::size_t i = 0; i < 61; ++i)
    for (std::size_t j = 0; j < 61; ++j) EXPECT_NEAR(f.at(i, j), f.at(j, i), 1e-15);
  const BiphotonModel gen(ModelKind::General, fixtures::pump(500.0), c);
  const GridField h = jsa_grid(gen, g);
  for (std::size_t i = 0; i < 61; ++i)
    for (std::size_t j = 0; j < 61; ++j) EXPECT_NEAR(h.at(i, j), h.at(j, i), 1e-15);
}

TEST(Jsa, TiltReflectsUnderDispersionSwap) {
  // Dispersion scaled up so both spectral envelopes are resolved on one grid.
  for (double tau : {50.0, 500.0}) {
    CrystalSpec c = fixtures::bbo();
    c.gvd_s = 30.0;
    c.gvd_i = 60.0;
    const JsaStats a = omega_stats(BiphotonModel(ModelKind::FourGaussian, fixtures::pump(tau), c), 0.05);
    std::swap(c.gvd_s, c.gvd_i);
    const JsaStats b = omega_stats(BiphotonModel(ModelKind::FourGaussian, fixtures::pump(tau), c), 0.05);
    const double da = wrap_half_turn(a.tilt + 0.25 * kPi), db = wrap_half_turn(b.tilt + 0.25 * kPi);
    EXPECT_GT(da, 0.0);
    EXPECT_LT(db, 0.0);
    EXPECT_LE(std::abs(da + db), 2.0 * kDeg);
    // the photon with the larger GVD has the narrower marginal
    EXPECT_GT(a.covariance[0][0], a.covariance[1][1]);
    EXPECT_LT(b.covariance[0][0], b.covariance[1][1]);
  }
}

TEST(Jsa, BboPresetTilt) {
  const BiphotonModel m = bbo_model(ModelKind::FourGaussian, 500.0);
  const JsaStats a = omega_stats(m, 0.01);
  CrystalSpec c = fixtures::bbo();
  std::swap(c.gvd_s, c.gvd_i);
  const JsaStats b = omega_stats(BiphotonModel(ModelKind::FourGaussian, fixtures::pump(500.0), c), 0.01);
  EXPECT_LE(std::abs(wrap_half_turn(a.tilt + 0.25 * kPi) + wrap_half_turn(b.tilt + 0.25 * kPi)), 2.0 * kDeg);
  CrystalSpec s = fixtures::bbo();
  s.gvd_i = s.gvd_s;
  s.vg_divisor_i = s.vg_divisor_s;
  const JsaStats e = omega_stats(BiphotonModel(ModelKind::FourGaussian, fixtures::pump(500.0), s), 0.01);
  EXPECT_NEAR(std::abs(e.tilt), 45.0 * kDeg, 2.0 * kDeg);
}

TEST(Jsa, LongPulseAlignsWithAntiDiagonal) {
  CrystalSpec c = fixtures::bbo();
  c.gvd_s = 30.0;
  c.gvd_i = 60.0;
  for (double tau : {500.0, 5e3, 5e4}) {
    const JsaStats s = omega_stats(BiphotonModel(ModelKind::FourGaussian, fixtures::pump(tau), c), 0.05, 301);
    const double off = std::abs(wrap_half_turn(s.tilt + 0.25 * kPi));
    EXPECT_LE(off, 1.0 * kDeg) << tau;
    EXPECT_NEAR(std::abs(s.tilt_from_diagonal), 0.5 * kPi, 1.0 * kDeg);
  }
}

TEST(JsaStats, Examples) {
  std::vector<double> ax;
  for (int k = 0; k <= 200; ++k) ax.push_back(-4.0 + 8.0 * k / 200.0);
  std::vector<double> iso, ell;
  for (double u : ax)
    for (double v : ax) {
      iso.push_back(std::exp(-(u * u + v * v)));
      ell.push_back(std::exp(-(u + v) * (u + v) - 10.0 * (u - v) * (u - v)));
    }
  const JsaStats a = jsa_stats(ax, ax, iso);
  EXPECT_TRUE(a.isotropic);
  EXPECT_TRUE(std::isnan(a.tilt));
  EXPECT_NEAR(a.axis_ratio, 1.0, 1e-3);
  const JsaStats b = jsa_stats(ax, ax, ell);
  EXPECT_FALSE(b.isotropic);
  // the slow direction is u = v: the major axis lies on the diagonal
  EXPECT_NEAR(b.tilt, 45.0 * kDeg, 1.0 * kDeg);
  EXPECT_NEAR(b.tilt_from_diagonal, 0.0, 1.0 * kDeg);
  EXPECT_NEAR(b.axis_ratio / std::sqrt(10.0), 1.0, 0.02);
  EXPECT_NEAR(b.centroid[0], 0.0, 1e-12);
  EXPECT_EQ(b.covariance[0][1], b.covariance[1][0]);
  const double det = b.covariance[0][0] * b.covariance[1][1] - b.covariance[0][1] * b.covariance[1][0];
  EXPECT_GE(det, 0.0);
}

TEST(JsaStats, Errors) {
  const std::vector<double> ax{0.0, 1.0};
  EXPECT_THROW(jsa_stats(ax, ax, {0.0, 0.0, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(jsa_stats(ax, ax, {1.0, -1.0, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(jsa_stats(ax, ax, {1.0, 1.0}), ValidationError);
}

TEST(Position, OriginAndPulseIndependence) {
  const BiphotonModel s = liio3_model(ModelKind::FourGaussian, 50.0, 0.5);
  const BiphotonModel l = liio3_model(ModelKind::FourGaussian, 5e4, 0.5);
  EXPECT_EQ(position_amplitude_type1_4g(0.0, 0.0, {}, s), 1.0);
  const DerivedParams& d = s.derived();
  for (double xs = -10.0; xs <= 10.0; xs += 0.5) {
    const double expect = std::exp(-std::pow(xs + 1.0, 2) / (16.0 * 28.0 * 28.0)) *
                          std::exp(-std::pow(xs - 1.0, 2) / (16.0 * d.sigma_x * d.sigma_x));
    EXPECT_NEAR(position_amplitude_type1_4g(xs, 1.0, {}, s), expect, 1e-15);
    EXPECT_EQ(position_amplitude_type1_4g(xs, 1.0, {}, s), position_amplitude_type1_4g(xs, 1.0, {}, l));
  }
  EXPECT_THROW(position_amplitude_type1_4g(0.0, 0.0, {}, bbo_model(ModelKind::FourGaussian)), ValidationError);
  EXPECT_THROW(position_amplitude_4g(0.0, 0.0, {}, liio3_model(ModelKind::General)), ValidationError);
}

// Relative-coordinate profile of the sinc model, from its 2D Fourier (Hankel)
// transform, against the Gaussian position form: same width scale.
TEST(Position, ProfileWidthComparableToSincModel) {
  const BiphotonModel m = liio3_model(ModelKind::FourGaussian, 50.0, 0.5);
  const DerivedParams& d = m.derived();
  auto hankel = [&](double r) {
    return fixtures::simpson([&](double q) { return sinc(d.length * q * q / (4.0 * d.k_p)) * std::cyl_bessel_j(0.0, q * r / 2.0) * q; },
                             0.0, 3.0, 60000);
  };
  const double h0 = hankel(0.0);
  double lo = 0.0, hi = 20.0;
  for (int k = 0; k < 30; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(hankel(mid) / h0, 2) > 0.5 ? lo : hi) = mid;
  }
  const double sinc_half = lo;
  const double gauss_half = std::sqrt(8.0 * d.sigma_x * d.sigma_x * std::log(2.0));
  EXPECT_GT(sinc_half / gauss_half, 0.5);
  EXPECT_LT(sinc_half / gauss_half, 2.0);
}
