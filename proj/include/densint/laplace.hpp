#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "densint/cauchy.hpp"
#include "densint/interpolant.hpp"
#include "densint/nodes.hpp"

namespace densint {

// How log(. - z) is cut. StarRay: straight ray from the branch point away
// from `center` (valid for contours star-shaped about it). Chain: the path
// passes through the user's control points and escapes along `direction`.
struct BranchCut {
  enum class Kind { StarRay, Chain };
  Kind kind = Kind::StarRay;
  cplx center{};
  std::vector<cplx> points;
  cplx direction{1.0, 0.0};

  static BranchCut star_ray(cplx center) { return {Kind::StarRay, center, {}, {1.0, 0.0}}; }
  static BranchCut chain(std::vector<cplx> points, cplx direction) {
    return {Kind::Chain, {}, std::move(points), direction};
  }
};

// log(zeta - v0) whose cut is the polyline v0 -> v1 -> ... -> v_Q followed
// by the ray from v_Q along `escape`. Evaluated as a sum of principal logs
// of ratios, one per segment, plus one rotated log for the ray.
class LogBranch {
 public:
  LogBranch(std::vector<cplx> vertices, cplx escape);
  cplx operator()(cplx zeta) const;
  const std::vector<cplx>& vertices() const { return vertices_; }
  cplx escape() const { return escape_; }

 private:
  std::vector<cplx> vertices_;
  cplx escape_;      // unit vector
  cplx rotation_;    // -conj(escape)
  double offset_;    // arg(-escape)
};

// Throws GeometryError unless the node polygon is star-shaped about the
// StarRay centre. Chains are checked per branch point in make_log_branch.
void validate_branch(const NodeTable& nodes, const BranchCut& cut);

// Branch of log(. - z) satisfying the crossing rules of the regularized
// single layer: for an interior target the cut leaves through
// gamma(t_anchor); for exterior targets it avoids the contour; for on-curve
// points (z = gamma(t_anchor)) it touches the contour only at z.
LogBranch make_log_branch(const NodeTable& nodes, const BranchCut& cut, cplx z, Side side,
                          std::size_t anchor);

// Signed curvature Im(conj(gamma') gamma'') / |gamma'|^3 at every node.
std::vector<double> curvature(const NodeTable& nodes);

// A real density on the contour with the interpolation tables the
// regularized formulas need: P_N for phi and Q_N for
// psi = phi |gamma'| / gamma'.
struct LayerDensity {
  int order = 0;
  std::vector<double> values;
  DensityField phi;
  DensityField psi;
  InterpolantTable phi_table{0, 0};
  InterpolantTable psi_table{0, 0};
};

LayerDensity make_layer_density(const NodeTable& nodes, std::span<const double> values, int N);

double double_layer_potential(const NodeTable& nodes, const LayerDensity& layer,
                              const TargetPoint& target);
double single_layer_potential(const NodeTable& nodes, const LayerDensity& layer,
                              const TargetPoint& target, const BranchCut& cut);

// (d/dx, d/dy) of D phi and S phi. The double layer gradient needs N >= 2
// when regularized.
std::array<double, 2> grad_double_layer(const NodeTable& nodes, const LayerDensity& layer,
                                        const TargetPoint& target);
std::array<double, 2> grad_single_layer(const NodeTable& nodes, const LayerDensity& layer,
                                        const TargetPoint& target);

double double_layer_operator_K(const NodeTable& nodes, std::span<const double> phi,
                               std::size_t m);
double adjoint_double_layer_Kt(const NodeTable& nodes, std::span<const double> phi,
                               std::size_t m);
double hypersingular_T(const NodeTable& nodes, const LayerDensity& layer, std::size_t m);
double single_layer_operator_S(const NodeTable& nodes, const LayerDensity& layer,
                               std::size_t m, const BranchCut& cut);

std::vector<double> apply_K(const NodeTable& nodes, std::span<const double> phi);
std::vector<double> apply_Kt(const NodeTable& nodes, std::span<const double> phi);
std::vector<double> apply_T(const NodeTable& nodes, const LayerDensity& layer);

// The single layer operator with log(zeta_k - z_m) tabulated once, so that
// repeated applications inside an iterative solve only redo the
// density-dependent part.
class SingleLayerOperator {
 public:
  SingleLayerOperator(const NodeTable& nodes, const BranchCut& cut);
  std::vector<double> apply(const LayerDensity& layer) const;
  double row(const LayerDensity& layer, std::size_t m) const;

 private:
  const NodeTable* nodes_;
  std::vector<cplx> logs_;  // M x M, row m = log(zeta_k - z_m), diagonal unused
};

}  // namespace densint
