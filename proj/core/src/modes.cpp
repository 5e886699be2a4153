#include "spdc/modes.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

void CollectionSpec::validate() const {
  if (!(w0 > 0.0) || !std::isfinite(w0)) throw ValidationError("must be strictly positive", "collection.w0");
  if (p_rad < 0) throw ValidationError("must be nonnegative", "collection.p");
}

double laguerre_assoc(int p_rad, int a, double y) {
  if (p_rad < 0) throw ValidationError("radial index must be nonnegative", "p");
  if (a < 0) throw ValidationError("order must be nonnegative", "a");
  if (p_rad == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - y;
  for (int k = 1; k < p_rad; ++k) {
    // (k+1) L_{k+1} = (2k + 1 + a - y) L_k - (k + a) L_{k-1}
    const double next = ((2.0 * k + 1.0 + a - y) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int n) {
  static constexpr std::array<double, 13> table = {1.0,     1.0,      2.0,       6.0,        24.0,
                                                   120.0,   720.0,    5040.0,    40320.0,    362880.0,
                                                   3628800.0, 39916800.0, 479001600.0};
  if (n < 0) throw ValidationError("factorial of a negative number", "n");
  if (n < static_cast<int>(table.size())) return std::log(table[static_cast<std::size_t>(n)]);
  return std::lgamma(n + 1.0);
}

namespace {

double log_norm(const CollectionSpec& spec, int abs_ell) {
  // log of sqrt(p! w0^2 / (4 pi (|l|+p)!)) * 2^(|l|/2 + 1/2)
  return 0.5 * (log_factorial(spec.p_rad) + 2.0 * std::log(spec.w0) - std::log(4.0 * units::pi) -
                log_factorial(abs_ell + spec.p_rad)) +
         (0.5 * abs_ell + 0.5) * std::log(2.0);
}

double radial_amplitude(double q, const CollectionSpec& spec) {
  const int abs_ell = std::abs(spec.ell);
  const double y = spec.w0 * spec.w0 * q * q;
  const double power = abs_ell == 0 ? 1.0 : std::pow(0.5 * q * spec.w0, abs_ell);
  return std::exp(log_norm(spec, abs_ell) - 0.25 * y) * power * laguerre_assoc(spec.p_rad, abs_ell, 0.5 * y);
}

}  // namespace

std::complex<double> lg_mode(double q, double phi, const CollectionSpec& spec) {
  spec.validate();
  if (!(q >= 0.0)) throw ValidationError("radial momentum must be nonnegative", "q");
  return radial_amplitude(q, spec) * std::polar(1.0, spec.ell * phi);
}

double lg_intensity(double q2, const CollectionSpec& spec) {
  const double a = radial_amplitude(std::sqrt(q2), spec);
  return a * a;
}

}  // namespace spdc
