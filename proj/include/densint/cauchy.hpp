#pragma once

#include <complex>
#include <cstddef>
#include <optional>

#include "densint/interpolant.hpp"
#include "densint/nodes.hpp"

namespace densint {

struct EvalPolicy {
  int order = 3;
  std::optional<bool> force_regularize;
  double distance_factor = 5.0;
};

struct TargetPoint {
  cplx z;
  SideClass side;
  std::size_t nearest_index = 0;
  double delta = 0.0;
  bool regularize = false;
};

void validate_policy(const EvalPolicy& policy);

// Classifies z and applies the distance rule: regularize iff
// delta < distance_factor * h_local, unless forced either way.
TargetPoint make_target(cplx z, const NodeTable& nodes, const EvalPolicy& policy);

// Plain node-rule quadrature of n!/(2 pi i) int phi / (zeta - z)^(n+1).
cplx cauchy_raw(const NodeTable& nodes, const DensityField& density, cplx z, int n = 0);

// Density-interpolated evaluation for Interior/Exterior targets, expanded
// about the target's nearest node. An OnCurve target with n = 0 returns the
// principal value H/2.
cplx cauchy_regularized(const NodeTable& nodes, const DensityField& density,
                        const InterpolantTable& table, const TargetPoint& target, int n = 0);

// Same, around an explicitly chosen expansion node.
cplx cauchy_regularized_at(const NodeTable& nodes, const DensityField& density,
                           const InterpolantTable& table, cplx z, Side side,
                           std::size_t expansion_node, int n = 0);

// H phi(z_m) = (1/pi i) p.v. int phi / (zeta - z_m) d zeta.
cplx hilbert_regularized(const NodeTable& nodes, const DensityField& density,
                         const InterpolantTable& table, std::size_t m);

// One-sided boundary values of C phi at node m, from inside (H/2 + phi/2) or
// outside (H/2 - phi/2).
cplx cauchy_boundary_limit(const NodeTable& nodes, const DensityField& density,
                           const InterpolantTable& table, std::size_t m, Side from);

// Raw or regularized per target.regularize.
cplx cauchy_eval(const NodeTable& nodes, const DensityField& density,
                 const InterpolantTable& table, const TargetPoint& target, int n = 0);

// Whether N leaves enough bounded derivatives for an n-th derivative
// evaluation (N >= n + 2).
inline bool order_is_recommended(int N, int n) { return N >= n + 2 || n == 0; }

}  // namespace densint
