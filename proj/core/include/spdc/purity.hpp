#pragma once

// Spatial purity of LG-projected biphotons after tracing out frequencies.
//
// The amplitude factorizes as pump(|q_s + q_i|^2) * K(|q_s - q_i|^2, Omega),
// and the LG phases cancel in every overlap, so the spatial integral is
// grouped by nodes t_j of |q_s - q_i|^2 with weights rho_j. With
//   A[n, j] = sqrt(W_n rho_j) K(t_j, Omega_n)
// the spectral Gram matrix is M = A A^T and P = Tr(M^2) / Tr(M)^2, evaluated
// through the small transverse Gram B = A^T A (same nonzero spectrum).

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spdc/biphoton.hpp"
#include "spdc/modes.hpp"

namespace spdc {

enum class PurityEngine { GaussHermite, Trapezoid };

std::string_view to_string(PurityEngine e);
std::optional<PurityEngine> purity_engine_from_string(std::string_view s);

/// Orders of the purity quadrature. All are doubled on refinement (capped per
/// rule). The Gauss engine uses Gauss-Laguerre radial rules (Gauss-Legendre on
/// the effective support of |q_s - q_i|^2 for the sinc models), Gauss-Hermite
/// spectral rules matched to the Gaussian envelopes, and Gauss-Legendre on a
/// box along the sinc difference axis. The trapezoid engine uses uniform
/// grids in |q| and Omega on truncated boxes; it is the cross-check.
/// When the kernel depends on Omega_s + Omega_i only through the pump, that
/// axis is integrated once and factored out.
struct PurityQuadrature {
  PurityEngine engine = PurityEngine::GaussHermite;
  int radial_order = 24;      ///< per radial axis (|q_s + q_i| and |q_s - q_i|)
  int azimuthal_order = 16;   ///< relative azimuth, periodic trapezoid
  int spectral_order = 12;    ///< per Gaussian spectral axis
  int box_order = 256;        ///< sinc difference axis
  double tolerance = 1e-4;    ///< absolute change of P between refinements
  int max_refinements = 3;
  double truncation = 5.0;    ///< trapezoid boxes, in envelope scales
  double sinc_margin = 200.0; ///< sinc argument reached at the box edge
  double radial_cutoff = 40.0;///< exponent of the radial envelope kept in the box
  int threads = 1;

  void validate() const;
};

struct PuritySetting {
  BiphotonModel model;
  /// Applied as ell_s = +ell, ell_i = -ell with shared p and w0.
  CollectionSpec collection;
  PurityQuadrature quad;
  KernelMode kernel = KernelMode::QuadraticOnly;
};

struct PurityOrders {
  int radial = 0;
  int azimuthal = 0;
  int spectral = 0;
  int box = 0;
};

struct PurityResult {
  double purity = 0.0;
  double trace = 0.0;        ///< integral of |Phi_LG|^2 at the final orders
  double trace_check = 0.0;  ///< trace at the previous orders / trace at the final orders
  bool converged = false;
  int gram_dimension = 0;    ///< spectral nodes
  int transverse_nodes = 0;  ///< |q_s - q_i|^2 nodes
  std::vector<double> deltas;
  PurityOrders orders;
  bool beyond_paper = false; ///< radial index p > 0

  // settings echo
  ModelKind model = ModelKind::General;
  SpdcType type = SpdcType::TypeI;
  KernelMode kernel = KernelMode::QuadraticOnly;
  PurityEngine engine = PurityEngine::GaussHermite;
  CollectionSpec collection;
  double length = 0.0;  ///< um
  double w_p = 0.0;     ///< um
  double tau = 0.0;     ///< fs
};

/// Model amplitude times LG(q_s; +ell) LG(q_i; -ell). Checks the guards.
std::complex<double> phi_lg(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                            const PuritySetting& s);

/// sinc(L/2 (-|q_s - q_i|^2 / (2 k_p) + quadratic dispersion term)); the
/// linear group-velocity term is dropped. No guard checks.
double simplified_kernel(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                         const DerivedParams& d, double length);

/// Spectral Gram matrix M = A A^T at the base orders, with the spectral
/// weights folded in symmetrically.
Eigen::MatrixXd spectral_gram(const PuritySetting& s);

/// Factor A at the base orders (rows: spectral nodes, columns: transverse nodes).
Eigen::MatrixXd gram_factor(const PuritySetting& s);

/// P = Tr(M^2) / Tr(M)^2 with refinement. Non-convergence is reported in the
/// result, never thrown.
PurityResult purity(const PuritySetting& s);

enum class SweepAxis { WsOverWp, Ell, Length, Tau, Wp };

std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> sweep_axis_from_string(std::string_view s);

struct SweepRow {
  double value = 0.0;
  std::optional<PurityResult> result;
  std::string error;  ///< set when the point failed
};

/// One row per value, in input order. Units: ratio, integer, um, fs, um.
/// Rows run on `threads` workers; a failing point is recorded and the
/// sweep continues.
std::vector<SweepRow> purity_sweep(const PuritySetting& base, SweepAxis axis, const std::vector<double>& values,
                                   int threads = 1);

/// The setting a sweep uses for one value.
PuritySetting sweep_setting(const PuritySetting& base, SweepAxis axis, double value);

}  // namespace spdc
