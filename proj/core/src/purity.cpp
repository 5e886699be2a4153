#include "spdc/purity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spdc/errors.hpp"
#include "spdc/parallel.hpp"
#include "spdc/units.hpp"

namespace spdc {

std::string_view to_string(PurityEngine e) { return e == PurityEngine::GaussHermite ? "gauss_hermite" : "trapezoid"; }

std::optional<PurityEngine> purity_engine_from_string(std::string_view s) {
  if (s == "gauss_hermite") return PurityEngine::GaussHermite;
  if (s == "trapezoid") return PurityEngine::Trapezoid;
  return std::nullopt;
}

void PurityQuadrature::validate() const {
  if (radial_order < 2) throw ValidationError("must be at least 2", "quadrature.radial_order");
  if (azimuthal_order < 2) throw ValidationError("must be at least 2", "quadrature.azimuthal_order");
  if (spectral_order < 2) throw ValidationError("must be at least 2", "quadrature.spectral_order");
  if (box_order < 2) throw ValidationError("must be at least 2", "quadrature.box_order");
  if (!(tolerance > 0.0)) throw ValidationError("must be strictly positive", "quadrature.tolerance");
  if (max_refinements < 1) throw ValidationError("must be at least 1", "quadrature.max_refinements");
  if (!(truncation > 0.0)) throw ValidationError("must be strictly positive", "quadrature.truncation");
  if (!(sinc_margin > 0.0)) throw ValidationError("must be strictly positive", "quadrature.sinc_margin");
  if (!(radial_cutoff > 0.0)) throw ValidationError("must be strictly positive", "quadrature.radial_cutoff");
  if (engine == PurityEngine::GaussHermite) {
    if (radial_order > max_order(Rule::GaussLaguerre))
      throw ValidationError("exceeds the Gauss-Laguerre cap", "quadrature.radial_order");
    if (spectral_order > max_order(Rule::GaussHermite))
      throw ValidationError("exceeds the Gauss-Hermite cap", "quadrature.spectral_order");
    if (box_order > max_order(Rule::GaussLegendre))
      throw ValidationError("exceeds the Gauss-Legendre cap", "quadrature.box_order");
  }
}

std::complex<double> phi_lg(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                            const PuritySetting& s) {
  const BiphotonModel& m = s.model;
  m.guards().check(qs, qi, w, m.derived());
  const TransversePoint u{qs.qx + qi.qx, qs.qy + qi.qy};
  const TransversePoint v{qs.qx - qi.qx, qs.qy - qi.qy};
  const double amp =
      m.pump_transverse(u.norm2()) * m.pump_spectral(w.sum()) * m.pmf_factor(v.norm2(), w.omega_s, w.omega_i, s.kernel);
  CollectionSpec signal = s.collection;
  CollectionSpec idler = s.collection;
  idler.ell = -signal.ell;
  return amp * lg_mode(qs.norm(), qs.azimuth(), signal) * lg_mode(qi.norm(), qi.azimuth(), idler);
}

double simplified_kernel(const TransversePoint& qs, const TransversePoint& qi, const SpectralPoint& w,
                         const DerivedParams& d, double length) {
  const double dx = qs.qx - qi.qx;
  const double dy = qs.qy - qi.qy;
  return sinc(0.5 * length *
              (kernel::spatial_mismatch(dx * dx + dy * dy, d.k_p) +
               kernel::spectral_mismatch_quadratic(w.omega_s, w.omega_i, d)));
}

namespace {

struct Transverse {
  std::vector<double> t;    ///< |q_s - q_i|^2 nodes
  std::vector<double> rho;  ///< grouped spatial weights
};

struct Spectral {
  std::vector<SpectralPoint> points;
  std::vector<double> weights;
};

double polynomial_degree(const CollectionSpec& c) { return 2.0 * (std::abs(c.ell) + c.p_rad); }

int exact_azimuthal(const CollectionSpec& c) { return 4 * (std::abs(c.ell) + 2 * c.p_rad) + 4; }

double transverse_rate(const PuritySetting& s) {
  const double w0 = s.collection.w0;
  double rate = 0.25 * w0 * w0;
  if (s.model.is_gaussian()) rate += 2.0 * s.model.derived().sigma_q * s.model.derived().sigma_q;
  return rate;
}

double sum_rate(const PuritySetting& s) {
  const double w0 = s.collection.w0;
  const double wp = s.model.derived().w_p;
  return 2.0 * wp * wp + 0.25 * w0 * w0;
}

double transverse_extent(const PuritySetting& s) {
  return (polynomial_degree(s.collection) + s.quad.radial_cutoff) / transverse_rate(s);
}

// Radial rule in t = |x|^2, weights include d^2x = (1/2) dt dphi.
NodesWeights radial_rule(const PuritySetting& s, int order, double rate, bool oscillatory) {
  if (s.quad.engine == PurityEngine::GaussHermite) {
    const double t_max = transverse_extent(s);
    NodesWeights t = oscillatory ? plain_rule(Axis{Rule::GaussLegendre, order, 0.5 * t_max, 0.5 * t_max})
                                 : plain_rule(Axis{Rule::GaussLaguerre, order, 0.0, 1.0 / rate});
    for (double& w : t.weights) w *= 0.5;
    return t;
  }
  const double t_max = (polynomial_degree(s.collection) + 2.0 * s.quad.truncation * s.quad.truncation) / rate;
  const double r_max = std::sqrt(t_max);
  NodesWeights r = plain_rule(Axis{Rule::Trapezoid, order, 0.5 * r_max, 0.5 * r_max});
  NodesWeights t;
  for (std::size_t k = 0; k < r.size(); ++k) {
    t.nodes.push_back(r.nodes[k] * r.nodes[k]);
    t.weights.push_back(r.weights[k] * r.nodes[k]);
  }
  return t;
}

Transverse transverse_weights(const PuritySetting& s, int radial, int azimuthal) {
  const NodesWeights tu = radial_rule(s, radial, sum_rate(s), false);
  const NodesWeights tv = radial_rule(s, radial, transverse_rate(s), !s.model.is_gaussian());
  const int n_theta = std::max(azimuthal, exact_azimuthal(s.collection));
  std::vector<double> cos_theta(static_cast<std::size_t>(n_theta));
  for (int k = 0; k < n_theta; ++k) cos_theta[static_cast<std::size_t>(k)] = std::cos(2.0 * units::pi * k / n_theta);
  const double w_theta = 2.0 * units::pi / n_theta;
  const double wp2 = s.model.derived().w_p * s.model.derived().w_p;

  Transverse out;
  out.t = tv.nodes;
  out.rho.assign(tv.size(), 0.0);
  parallel_for(tv.size(), s.quad.threads, [&](std::size_t j) {
    const double t_v = tv.nodes[j];
    std::vector<double> terms;
    terms.reserve(tu.size() * cos_theta.size());
    for (std::size_t a = 0; a < tu.size(); ++a) {
      const double t_u = tu.nodes[a];
      const double cross = 2.0 * std::sqrt(t_u * t_v);
      const double pump = std::exp(-2.0 * wp2 * t_u);
      for (double ct : cos_theta) {
        const double qs2 = std::max(0.25 * (t_u + t_v + cross * ct), 0.0);
        const double qi2 = std::max(0.25 * (t_u + t_v - cross * ct), 0.0);
        terms.push_back(tu.weights[a] * w_theta * pump * lg_intensity(qs2, s.collection) *
                        lg_intensity(qi2, s.collection));
      }
    }
    // d^2q_s d^2q_i = d^2u d^2v / 4; the common azimuth integrates to 2 pi
    out.rho[j] = 0.25 * 2.0 * units::pi * tv.weights[j] * pairwise_sum(terms);
  });
  return out;
}

// The kernel depends on the sum axis only through the pump envelope.
bool separable_sum(const PuritySetting& s) { return s.model.is_gaussian() || s.kernel == KernelMode::QuadraticOnly; }

Spectral spectral_nodes(const PuritySetting& s, int spectral, int box, double v2_max) {
  const BiphotonModel& m = s.model;
  const SpectralFrame frame = m.spectral_frame();
  const bool gauss = s.quad.engine == PurityEngine::GaussHermite;
  const double trunc = s.quad.truncation;
  const double sx = m.sum_axis_scale();

  const Axis x_axis = gauss ? Axis{Rule::GaussHermite, spectral, 0.0, sx} : Axis{Rule::Trapezoid, spectral, 0.0, trunc * sx};
  Axis y_axis;
  if (m.is_gaussian()) {
    const double sy = m.difference_axis_scale();
    y_axis = gauss ? Axis{Rule::GaussHermite, spectral, 0.0, sy} : Axis{Rule::Trapezoid, spectral, 0.0, trunc * sy};
  } else {
    const double half = m.difference_box(v2_max, 6.0 * sx, s.quad.sinc_margin, s.kernel);
    y_axis = Axis{gauss ? Rule::GaussLegendre : Rule::Trapezoid, box, 0.0, half};
  }
  const NodesWeights x = plain_rule(x_axis);
  const NodesWeights y = plain_rule(y_axis);
  Spectral out;
  if (separable_sum(s)) {
    std::vector<double> terms(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double p = m.pump_spectral(x.nodes[a]);
      terms[a] = x.weights[a] * p * p;
    }
    const double sum_integral = pairwise_sum(terms);
    for (std::size_t b = 0; b < y.size(); ++b) {
      out.points.push_back(frame.point(0.0, y.nodes[b]));
      out.weights.push_back(frame.jacobian * sum_integral * y.weights[b]);
    }
    return out;
  }
  out.points.reserve(x.size() * y.size());
  out.weights.reserve(x.size() * y.size());
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b) {
      out.points.push_back(frame.point(x.nodes[a], y.nodes[b]));
      out.weights.push_back(frame.jacobian * x.weights[a] * y.weights[b]);
    }
  return out;
}

Eigen::MatrixXd build_factor(const PuritySetting& s, const PurityOrders& o) {
  const Transverse tr = transverse_weights(s, o.radial, o.azimuthal);
  const Spectral sp = spectral_nodes(s, o.spectral, o.box, transverse_extent(s));

  const auto nv = static_cast<Eigen::Index>(tr.t.size());
  const auto ns = static_cast<Eigen::Index>(sp.points.size());
  Eigen::MatrixXd a(ns, nv);
  std::vector<double> sqrt_rho(tr.rho.size());
  for (std::size_t j = 0; j < tr.rho.size(); ++j) sqrt_rho[j] = std::sqrt(std::max(tr.rho[j], 0.0));
  parallel_for(static_cast<std::size_t>(nv), s.quad.threads, [&](std::size_t j) {
    for (Eigen::Index n = 0; n < ns; ++n) {
      const SpectralPoint& w = sp.points[static_cast<std::size_t>(n)];
      const double k = s.model.mode_kernel(tr.t[j], w.omega_s, w.omega_i, s.kernel);
      a(n, static_cast<Eigen::Index>(j)) = std::sqrt(sp.weights[static_cast<std::size_t>(n)]) * sqrt_rho[j] * k;
    }
  });
  return a;
}

PurityOrders base_orders(const PuritySetting& s) {
  return {s.quad.radial_order, s.quad.azimuthal_order, s.quad.spectral_order, s.quad.box_order};
}

struct Evaluation {
  double purity = 0.0;
  double trace = 0.0;
  int spectral_nodes = 0;
  int transverse_nodes = 0;
};

Evaluation evaluate(const PuritySetting& s, const PurityOrders& o) {
  const Eigen::MatrixXd a = build_factor(s, o);
  const Eigen::MatrixXd b = a.transpose() * a;
  Evaluation e;
  e.trace = b.trace();
  e.purity = e.trace > 0.0 ? b.squaredNorm() / (e.trace * e.trace) : std::numeric_limits<double>::quiet_NaN();
  e.spectral_nodes = static_cast<int>(a.rows());
  e.transverse_nodes = static_cast<int>(a.cols());
  return e;
}

PurityOrders refine(const PuritySetting& s, const PurityOrders& o) {
  const bool gauss = s.quad.engine == PurityEngine::GaussHermite;
  const int radial_cap = gauss ? max_order(Rule::GaussLaguerre) : max_order(Rule::Trapezoid);
  const int spectral_cap = gauss ? max_order(Rule::GaussHermite) : max_order(Rule::Trapezoid);
  const int box_cap = gauss ? max_order(Rule::GaussLegendre) : max_order(Rule::Trapezoid);
  PurityOrders n = o;
  n.radial = std::min(2 * o.radial, radial_cap);
  n.azimuthal = 2 * std::max(o.azimuthal, exact_azimuthal(s.collection)) > 4096 ? o.azimuthal : 2 * o.azimuthal;
  n.spectral = std::min(2 * o.spectral, spectral_cap);
  n.box = s.model.is_gaussian() ? o.box : std::min(2 * o.box, box_cap);
  return n;
}

bool same(const PurityOrders& a, const PurityOrders& b) {
  return a.radial == b.radial && a.azimuthal == b.azimuthal && a.spectral == b.spectral && a.box == b.box;
}

}  // namespace

Eigen::MatrixXd gram_factor(const PuritySetting& s) {
  s.quad.validate();
  s.collection.validate();
  return build_factor(s, base_orders(s));
}

Eigen::MatrixXd spectral_gram(const PuritySetting& s) {
  const Eigen::MatrixXd a = gram_factor(s);
  return a * a.transpose();
}

PurityResult purity(const PuritySetting& s) {
  s.quad.validate();
  s.collection.validate();
  PurityResult r;
  r.model = s.model.kind();
  r.type = s.model.type();
  r.kernel = s.kernel;
  r.engine = s.quad.engine;
  r.collection = s.collection;
  r.length = s.model.derived().length;
  r.w_p = s.model.derived().w_p;
  r.tau = s.model.derived().tau;
  r.beyond_paper = s.collection.p_rad > 0;

  PurityOrders orders = base_orders(s);
  Evaluation prev = evaluate(s, orders);
  Evaluation cur = prev;
  for (int k = 0; k < s.quad.max_refinements; ++k) {
    const PurityOrders next = refine(s, orders);
    if (same(next, orders)) break;
    orders = next;
    prev = cur;
    cur = evaluate(s, orders);
    const double delta = std::abs(cur.purity - prev.purity);
    r.deltas.push_back(delta);
    if (delta <= s.quad.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.purity = cur.purity;
  r.trace = cur.trace;
  r.trace_check = r.deltas.empty() ? std::numeric_limits<double>::quiet_NaN() : prev.trace / cur.trace;
  r.gram_dimension = cur.spectral_nodes;
  r.transverse_nodes = cur.transverse_nodes;
  r.orders = orders;
  if (!std::isfinite(r.purity)) r.converged = false;
  return r;
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::WsOverWp: return "ws_over_wp";
    case SweepAxis::Ell: return "ell";
    case SweepAxis::Length: return "L";
    case SweepAxis::Tau: return "tau";
    case SweepAxis::Wp: return "w_p";
  }
  return "?";
}

std::optional<SweepAxis> sweep_axis_from_string(std::string_view s) {
  for (SweepAxis a : {SweepAxis::WsOverWp, SweepAxis::Ell, SweepAxis::Length, SweepAxis::Tau, SweepAxis::Wp})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

PuritySetting sweep_setting(const PuritySetting& base, SweepAxis axis, double value) {
  PumpSpec pump = base.model.pump();
  CrystalSpec crystal = base.model.crystal();
  CollectionSpec collection = base.collection;
  switch (axis) {
    case SweepAxis::WsOverWp: collection.w0 = value * pump.w_p; break;
    case SweepAxis::Ell:
      if (value != std::round(value)) throw ValidationError("OAM index must be an integer", "sweep.values");
      collection.ell = static_cast<int>(value);
      break;
    case SweepAxis::Length: crystal.length = value; break;
    case SweepAxis::Tau: pump.tau = value; break;
    case SweepAxis::Wp: pump.w_p = value; break;
  }
  BiphotonModel model(base.model.kind(), pump, crystal, base.model.regime_override(), base.model.guards());
  return PuritySetting{std::move(model), collection, base.quad, base.kernel};
}

std::vector<SweepRow> purity_sweep(const PuritySetting& base, SweepAxis axis, const std::vector<double>& values,
                                   int threads) {
  std::vector<SweepRow> rows(values.size());
  if (threads <= 0) threads = default_thread_count();
  parallel_for(values.size(), threads, [&](std::size_t i) {
    rows[i].value = values[i];
    try {
      PuritySetting s = sweep_setting(base, axis, values[i]);
      if (threads > 1) s.quad.threads = 1;
      rows[i].result = purity(s);
    } catch (const Error& e) {
      rows[i].error = e.what();
    }
  });
  return rows;
}

}  // namespace spdc
