#include "spdc_cli/selftest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "spdc/biphoton.hpp"
#include "spdc/errors.hpp"
#include "spdc/modes.hpp"
#include "spdc/phase_matching.hpp"
#include "spdc/purity.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/units.hpp"

namespace spdc::cli {

namespace {

PumpSpec pump() { return {0.4, 28.0, 50.0}; }

CrystalSpec crystal(double length_mm) {
  CrystalSpec c = presets::liio3_fig1();
  c.length = units::mm_to_um(length_mm);
  c.n_p = 1.9;
  c.vg_divisor_p = 1.708;
  c.vg_divisor_s = c.vg_divisor_i = 1.626;
  c.gvd_p = units::gvd_per_mm_to_per_um(180.0);
  c.gvd_s = c.gvd_i = units::gvd_per_mm_to_per_um(61.7);
  return c;
}

PuritySetting setting(ModelKind kind, int ell, double ratio, int threads) {
  PuritySetting s{BiphotonModel(kind, pump(), crystal(0.5)), CollectionSpec{ell, 0, ratio * 28.0}, {},
                  KernelMode::QuadraticOnly};
  s.quad.threads = threads;
  return s;
}

CheckResult sinc_series() {
  double worst = 0.0;
  for (double x = -1e-3; x <= 1e-3; x += 1e-5) {
    const double ref = x == 0.0 ? 1.0 : std::sin(x) / x;
    worst = std::max(worst, std::abs(sinc(x) - ref));
  }
  return {"sinc near zero", worst <= 1e-12, fmt::format("max error {:.2e}", worst)};
}

CheckResult lg_orthonormality() {
  const double w0 = 28.0;
  const double scale = 2.0 / (w0 * w0);
  const NodesWeights nw = nodes_weights(Rule::GaussLaguerre, 24, scale);
  double worst = 0.0;
  for (int ell = 0; ell <= 4; ++ell)
    for (int p = 0; p <= 2; ++p)
      for (int p2 = 0; p2 <= 2; ++p2) {
        const CollectionSpec a{ell, p, w0}, b{ell, p2, w0};
        double sum = 0.0;
        for (std::size_t k = 0; k < nw.size(); ++k) {
          const double t = nw.nodes[k];
          const double q = std::sqrt(t);
          const double f = std::real(lg_mode(q, 0.0, a) * std::conj(lg_mode(q, 0.0, b)));
          sum += nw.weights[k] * units::pi * f * std::exp(t / scale);
        }
        worst = std::max(worst, std::abs(sum - (p == p2 ? 1.0 : 0.0)));
      }
  return {"LG orthonormality", worst <= 1e-6, fmt::format("max error {:.2e}", worst)};
}

CheckResult separable_purity(int threads) {
  double worst = 0.0;
  for (int ell : {0, 2})
    for (double ratio : {0.5, 2.0}) worst = std::max(worst, std::abs(purity(setting(ModelKind::FourGaussian, ell, ratio, threads)).purity - 1.0));
  return {"four-Gaussian purity is one", worst <= 1e-6, fmt::format("max |P - 1| {:.2e}", worst)};
}

CheckResult gram_hermitian(int threads) {
  const Eigen::MatrixXd m = spectral_gram(setting(ModelKind::General, 2, 1.0, threads));
  const double rel = (m - m.transpose()).norm() / m.norm();
  return {"Gram matrix hermitian", rel <= 1e-10, fmt::format("relative asymmetry {:.2e}", rel)};
}

CheckResult engines_agree(int threads) {
  PuritySetting s = setting(ModelKind::General, 1, 1.0, threads);
  const double gh = purity(s).purity;
  s.quad.engine = PurityEngine::Trapezoid;
  const double tz = purity(s).purity;
  return {"Gauss-Hermite vs trapezoid", std::abs(gh - tz) <= 1e-3, fmt::format("|diff| {:.2e}", std::abs(gh - tz))};
}

CheckResult normalization() {
  const BiphotonModel m(ModelKind::FourGaussian, pump(), crystal(0.5));
  const double closed = normalization_closed_form(m);
  const double quad = normalize(m).constant;
  const double rel = std::abs(quad - closed) / closed;
  return {"normalization closed form", rel <= 1e-6, fmt::format("relative error {:.2e}", rel)};
}

CheckResult exchange_symmetry() {
  const BiphotonModel m(ModelKind::General, pump(), crystal(5.0));
  double worst = 0.0;
  for (double a : {-0.02, 0.0, 0.013})
    for (double b : {-0.01, 0.004}) {
      const TransversePoint qs{a, 0.002}, qi{-0.003, b};
      const SpectralPoint w{0.011, -0.007};
      worst = std::max(worst, std::abs(m.amplitude(qs, qi, w) - m.amplitude(qi, qs, {w.omega_i, w.omega_s})));
    }
  return {"type-I exchange symmetry", worst <= 1e-12, fmt::format("max difference {:.2e}", worst)};
}

CheckResult grid_threads() {
  const BiphotonModel m(ModelKind::General, pump(), crystal(5.0));
  GridSpec g;
  g.first = {GridVariable::LambdaS, 0.795, 0.805, 21};
  g.second = {GridVariable::LambdaI, 0.795, 0.805, 17};
  g.threads = 1;
  const GridField a = jsa_grid(m, g);
  g.threads = 8;
  const GridField b = jsa_grid(m, g);
  const bool same = a.values == b.values;
  return {"grid independent of threads", same, same ? "bitwise identical" : "differs"};
}

CheckResult guards() {
  const BiphotonModel m(ModelKind::General, pump(), crystal(5.0));
  bool thrown = false;
  try {
    m.amplitude({1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0});
  } catch (const DomainError&) {
    thrown = true;
  }
  return {"paraxial guard", thrown, thrown ? "DomainError raised" : "no error"};
}

}  // namespace

std::vector<CheckResult> selftest(int threads) {
  const std::vector<std::function<CheckResult()>> checks = {
      sinc_series,
      lg_orthonormality,
      [&] { return separable_purity(threads); },
      [&] { return gram_hermitian(threads); },
      [&] { return engines_agree(threads); },
      normalization,
      exchange_symmetry,
      grid_threads,
      guards,
  };
  std::vector<CheckResult> out;
  for (const auto& check : checks) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  }
  return out;
}

bool print_selftest(const std::vector<CheckResult>& results, std::ostream& out) {
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all = true;
  out << fmt::format("{:<{}}  {:<4}  {}\n", "check", width, "ok", "detail");
  for (const auto& r : results) {
    out << fmt::format("{:<{}}  {:<4}  {}\n", r.name, width, r.passed ? "PASS" : "FAIL", r.detail);
    all = all && r.passed;
  }
  out << fmt::format("{} of {} checks passed\n",
                     std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; }),
                     results.size());
  return all;
}

}  // namespace spdc::cli
