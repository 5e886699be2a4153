#pragma once

// Quadrature rules and tensor-product integration shared by normalization,
// overlap kernels and purity.

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace spdc {

enum class Rule { GaussHermite, GaussLegendre, GaussLaguerre, Trapezoid };

std::string_view to_string(Rule r);

struct NodesWeights {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Classical rules with their weight functions, scaled by s = `scaling`:
///   GaussHermite   int e^{-(x/s)^2} f(x) dx over R
///   GaussLaguerre  int e^{-x/s} f(x) dx over [0, inf)
///   GaussLegendre  int f(x) dx over [-s, s]
///   Trapezoid      int f(x) dx over [-s, s], `order` equispaced points
/// Gauss rules integrate polynomials of degree <= 2 order - 1 exactly.
/// Throws ValidationError for order < 2 or for orders above the rule's cap.
NodesWeights nodes_weights(Rule rule, int order, double scaling = 1.0);

/// Largest order accepted for a rule (weights times the inverse weight
/// function must stay representable).
int max_order(Rule rule);

/// One axis of a plain integral int f(x) dx. The weight function is divided
/// out of the weights, so the rule integrates f directly.
///   GaussHermite   over R, envelope e^{-((x - center)/scale)^2}
///   GaussLaguerre  over [center, inf), envelope e^{-(x - center)/scale}
///   GaussLegendre  over [center - scale, center + scale]
///   Trapezoid      over [center - scale, center + scale]
struct Axis {
  Rule rule = Rule::GaussHermite;
  int order = 16;
  double center = 0.0;
  double scale = 1.0;
};

NodesWeights plain_rule(const Axis& axis);

struct QuadratureSpec {
  std::vector<Axis> axes;
  double tolerance = 1e-8;  ///< relative change between successive refinements
  int max_refinements = 4;  ///< order doublings after the base evaluation
  int threads = 1;

  void validate() const;
};

struct IntegrationReport {
  double value = 0.0;
  bool converged = false;
  std::vector<double> deltas;  ///< relative change at each refinement
  std::vector<int> orders;     ///< orders of the last evaluation

  double last_delta() const { return deltas.empty() ? 0.0 : deltas.back(); }
};

using Integrand = std::function<double(std::span<const double>)>;

/// Tensor-product integral at fixed orders. The outermost axis is split
/// across workers; each slice is reduced by pairwise summation and the
/// slices are reduced in index order, so the result is bitwise independent
/// of `threads`.
double integrate_fixed(const Integrand& f, std::span<const Axis> axes, int threads = 1);

/// Doubles every order until the relative change is <= tolerance or the
/// refinement budget (or an order cap) is exhausted. Non-convergence is
/// reported through `converged`, never thrown.
IntegrationReport integrate_nd(const Integrand& f, const QuadratureSpec& spec);

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

}  // namespace spdc
