#pragma once

#include <cmath>
#include <functional>

#include "spdc/params.hpp"
#include "spdc/units.hpp"

namespace fixtures {

inline spdc::PumpSpec pump(double tau_fs = 50.0, double w_p = 28.0) { return {0.4, w_p, tau_fs}; }

// LiIO3 geometry with an illustrative pump index and BBO-like type-I dispersion.
inline spdc::CrystalSpec liio3(double length_mm = 5.0) {
  spdc::CrystalSpec c = spdc::presets::liio3_fig1();
  c.length = spdc::units::mm_to_um(length_mm);
  c.n_p = 1.9;
  c.vg_divisor_p = 1.708;
  c.vg_divisor_s = c.vg_divisor_i = 1.626;
  c.gvd_p = spdc::units::gvd_per_mm_to_per_um(180.0);
  c.gvd_s = c.gvd_i = spdc::units::gvd_per_mm_to_per_um(61.7);
  return c;
}

inline spdc::CrystalSpec bbo() {
  spdc::CrystalSpec c = spdc::presets::bbo_fig5();
  c.n_p = 1.69;
  return c;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * k);
  return s * h / 3.0;
}

}  // namespace fixtures
