#include "spdc/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "spdc/errors.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::GaussHermite: return "gauss_hermite";
    case Rule::GaussLegendre: return "gauss_legendre";
    case Rule::GaussLaguerre: return "gauss_laguerre";
    case Rule::Trapezoid: return "trapezoid";
  }
  return "?";
}

int max_order(Rule rule) {
  switch (rule) {
    case Rule::GaussHermite: return 256;
    case Rule::GaussLaguerre: return 160;
    case Rule::GaussLegendre: return 1024;
    case Rule::Trapezoid: return 1 << 16;
  }
  return 0;
}

namespace {

// Unscaled nodes plus log-weights, so plain rules can fold the inverse weight
// function in without overflow.
struct StandardRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

StandardRule gsl_rule(const gsl_integration_fixed_type* type, int order, double a, double b) {
  using Ws = std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)>;
  Ws ws(gsl_integration_fixed_alloc(type, static_cast<std::size_t>(order), a, b, 0.0, 0.0),
        &gsl_integration_fixed_free);
  if (!ws) throw ConvergenceError("quadrature node generation failed");
  const std::size_t n = gsl_integration_fixed_n(ws.get());
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  StandardRule r;
  r.nodes.assign(x, x + n);
  r.weights.assign(w, w + n);
  return r;
}

StandardRule make_standard(Rule rule, int order) {
  switch (rule) {
    case Rule::GaussHermite: return gsl_rule(gsl_integration_fixed_hermite, order, 0.0, 1.0);
    case Rule::GaussLaguerre: return gsl_rule(gsl_integration_fixed_laguerre, order, 0.0, 1.0);
    case Rule::GaussLegendre: return gsl_rule(gsl_integration_fixed_legendre, order, -1.0, 1.0);
    case Rule::Trapezoid: {
      StandardRule r;
      const double h = 2.0 / (order - 1);
      for (int k = 0; k < order; ++k) {
        r.nodes.push_back(-1.0 + h * k);
        r.weights.push_back(k == 0 || k == order - 1 ? 0.5 * h : h);
      }
      return r;
    }
  }
  return {};
}

const StandardRule& standard(Rule rule, int order) {
  static std::mutex mutex;
  static std::map<std::pair<Rule, int>, StandardRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({rule, order});
  if (it == cache.end()) it = cache.emplace(std::pair{rule, order}, make_standard(rule, order)).first;
  return it->second;
}

void check_order(Rule rule, int order, const std::string& field) {
  if (order < 2) throw ValidationError("quadrature order must be at least 2", field);
  if (order > max_order(rule))
    throw ValidationError("order exceeds cap " + std::to_string(max_order(rule)) + " for " +
                              std::string(to_string(rule)),
                          field);
}

void check_scale(double scale, const std::string& field) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("scale must be strictly positive", field);
}

}  // namespace

NodesWeights nodes_weights(Rule rule, int order, double scaling) {
  check_order(rule, order, "order");
  check_scale(scaling, "scaling");
  const StandardRule& s = standard(rule, order);
  NodesWeights out;
  out.nodes.reserve(s.nodes.size());
  out.weights.reserve(s.nodes.size());
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    out.nodes.push_back(scaling * s.nodes[k]);
    out.weights.push_back(scaling * s.weights[k]);
  }
  return out;
}

NodesWeights plain_rule(const Axis& axis) {
  check_order(axis.rule, axis.order, "order");
  check_scale(axis.scale, "scale");
  const StandardRule& s = standard(axis.rule, axis.order);
  NodesWeights out;
  out.nodes.reserve(s.nodes.size());
  out.weights.reserve(s.nodes.size());
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const double y = s.nodes[k];
    double w = s.weights[k];
    if (axis.rule == Rule::GaussHermite)
      w = std::exp(std::log(w) + y * y);
    else if (axis.rule == Rule::GaussLaguerre)
      w = std::exp(std::log(w) + y);
    out.nodes.push_back(axis.center + axis.scale * y);
    out.weights.push_back(axis.scale * w);
  }
  return out;
}

void QuadratureSpec::validate() const {
  if (axes.empty()) throw ValidationError("at least one axis is required", "quadrature.axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string field = "quadrature.axes[" + std::to_string(i) + "]";
    check_order(axes[i].rule, axes[i].order, field + ".order");
    check_scale(axes[i].scale, field + ".scale");
  }
  if (!(tolerance > 0.0)) throw ValidationError("must be strictly positive", "quadrature.tolerance");
  if (max_refinements < 0) throw ValidationError("must be nonnegative", "quadrature.max_refinements");
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t block = 16;
  if (values.size() <= block) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integrate_fixed(const Integrand& f, std::span<const Axis> axes, int threads) {
  if (axes.empty()) return f({});
  std::vector<NodesWeights> rules;
  rules.reserve(axes.size());
  for (const Axis& a : axes) rules.push_back(plain_rule(a));

  const std::size_t dim = axes.size();
  std::size_t inner = 1;
  for (std::size_t d = 1; d < dim; ++d) inner *= rules[d].size();

  std::vector<double> slices(rules[0].size());
  parallel_for(rules[0].size(), threads, [&](std::size_t i0) {
    std::vector<double> x(dim);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> terms(inner);
    x[0] = rules[0].nodes[i0];
    for (std::size_t flat = 0; flat < inner; ++flat) {
      double w = rules[0].weights[i0];
      for (std::size_t d = 1; d < dim; ++d) {
        x[d] = rules[d].nodes[idx[d]];
        w *= rules[d].weights[idx[d]];
      }
      terms[flat] = w == 0.0 ? 0.0 : w * f(x);
      for (std::size_t d = dim; d-- > 1;) {
        if (++idx[d] < rules[d].size()) break;
        idx[d] = 0;
      }
    }
    slices[i0] = pairwise_sum(terms);
  });
  return pairwise_sum(slices);
}

IntegrationReport integrate_nd(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();
  std::vector<Axis> axes = spec.axes;
  IntegrationReport report;
  double previous = integrate_fixed(f, axes, spec.threads);
  report.value = previous;
  for (int r = 0; r < spec.max_refinements; ++r) {
    bool grew = false;
    for (Axis& a : axes) {
      const int next = std::min(2 * a.order, max_order(a.rule));
      grew = grew || next != a.order;
      a.order = next;
    }
    if (!grew) break;
    const double current = integrate_fixed(f, axes, spec.threads);
    const double scale = std::max(std::abs(current), std::abs(previous));
    const double delta = scale == 0.0 ? 0.0 : std::abs(current - previous) / scale;
    report.deltas.push_back(delta);
    report.value = current;
    previous = current;
    if (delta <= spec.tolerance) {
      report.converged = true;
      break;
    }
  }
  for (const Axis& a : axes) report.orders.push_back(a.order);
  return report;
}

}  // namespace spdc
