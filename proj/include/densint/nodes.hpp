#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "densint/contour.hpp"

namespace densint {

enum class Rule { Trapezoid, Fejer };

// The discrete contour. Nodes are stored in counterclockwise traversal
// order; for Fejer grids each patch contributes a contiguous block whose
// parameters ascend in s, so param[] holds the Chebyshev zeros reversed.
struct NodeTable {
  Rule rule = Rule::Trapezoid;
  std::size_t num_patches = 1;
  std::size_t nodes_per_patch = 0;
  std::vector<double> param;
  std::vector<double> weight;
  std::vector<std::size_t> patch;
  // deriv[0] = gamma, deriv[k] = k-th derivative in the local parameter.
  std::vector<std::vector<cplx>> deriv;
  std::vector<cplx> normal;     // exterior unit normal, -i gamma' / |gamma'|
  std::vector<double> speed;    // |gamma'|
  std::vector<double> spacing;  // mean distance to the two neighbours
  double diameter = 0.0;
  std::shared_ptr<const Contour> contour;

  std::size_t size() const { return param.size(); }
  const std::vector<cplx>& point() const { return deriv[0]; }
  int max_derivative() const { return static_cast<int>(deriv.size()) - 1; }
  // Parametric weight times gamma', i.e. the weight of "d zeta".
  cplx dz(std::size_t m) const { return weight[m] * deriv[1][m]; }
  // Weight of arc length ds.
  double ds(std::size_t m) const { return weight[m] * speed[m]; }
  double on_curve_tol() const { return 1e-12 * diameter; }
};

// Trapezoid rule with M nodes on a globally parametrized contour.
// Derivative columns 1..order are exact where the parametrization provides
// them and spectral (FFT) beyond that.
NodeTable discretize_trapezoid(const Contour& contour, std::size_t M, int order);

// Fejer rule with `nodes_per_patch` nodes on every patch of a patch
// collection. Columns beyond the patch smoothness use Chebyshev
// differentiation patch by patch.
NodeTable discretize_fejer(const Contour& contour, std::size_t nodes_per_patch, int order);

// Parametric derivative of node samples, using the rule's spectral method.
std::vector<cplx> differentiate(const NodeTable& nodes, std::span<const cplx> values);

// Samples of a density at the nodes plus parametric derivatives of
// phi(gamma(t)) on request.
struct DensityField {
  std::vector<cplx> values;
  // param_derivs[k] = k-th parametric derivative; [0] = values. May be just
  // the values column when only Algorithm 1 is needed.
  std::vector<std::vector<cplx>> param_derivs;

  static DensityField from_samples(const NodeTable& nodes, std::vector<cplx> samples,
                                   int derivative_order = 0);
  static DensityField from_function(const NodeTable& nodes,
                                    const std::function<cplx(cplx)>& f,
                                    int derivative_order = 0);
  std::size_t size() const { return values.size(); }
};

enum class Side { Interior, Exterior, OnCurve };

struct SideClass {
  Side side = Side::Exterior;
  std::size_t node = 0;  // meaningful for OnCurve
};

struct NearestNode {
  std::size_t index = 0;
  double distance = 0.0;
};

// Lowest index wins ties.
NearestNode nearest_node(cplx z, const NodeTable& nodes);

// Winding number of the continuous contour about z, accumulated over the
// node polygon with chords refined until short relative to distance to z.
double winding_number(cplx z, const NodeTable& nodes);

SideClass classify_point(cplx z, const NodeTable& nodes);

}  // namespace densint
