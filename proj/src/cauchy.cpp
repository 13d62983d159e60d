#include "densint/cauchy.hpp"

#include <cmath>
#include <string>

#include "densint/errors.hpp"

namespace densint {
namespace {

const cplx kTwoPiI{0.0, kTwoPi};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

cplx inv_pow(cplx w, int k) {
  cplx p = 1.0 / w;
  cplx r = p;
  for (int i = 1; i < k; ++i) r *= p;
  return r;
}

}  // namespace

void validate_policy(const EvalPolicy& policy) {
  if (policy.order < 0) throw OrderError("interpolation order must be non-negative");
  if (!(policy.distance_factor > 0.0)) throw ValidationError("distance_factor must be positive");
}

TargetPoint make_target(cplx z, const NodeTable& nodes, const EvalPolicy& policy) {
  validate_policy(policy);
  TargetPoint t;
  t.z = z;
  t.side = classify_point(z, nodes);
  const NearestNode nn = nearest_node(z, nodes);
  t.nearest_index = nn.index;
  t.delta = nn.distance;
  if (policy.force_regularize) {
    t.regularize = *policy.force_regularize;
  } else {
    t.regularize = t.delta < policy.distance_factor * nodes.spacing[nn.index];
  }
  if (t.side.side == Side::OnCurve) t.regularize = true;
  return t;
}

cplx cauchy_raw(const NodeTable& nodes, const DensityField& density, cplx z, int n) {
  if (n < 0) throw OrderError("derivative order must be non-negative");
  const auto& pts = nodes.point();
  cplx s{};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const cplx w = pts[k] - z;
    if (w == cplx{})
      throw SingularEvaluationError("target coincides with node " + std::to_string(k));
    s += density.values[k] * nodes.dz(k) * inv_pow(w, n + 1);
  }
  return factorial(n) * s / kTwoPiI;
}

cplx cauchy_regularized_at(const NodeTable& nodes, const DensityField& density,
                           const InterpolantTable& table, cplx z, Side side,
                           std::size_t expansion_node, int n) {
  if (n < 0) throw OrderError("derivative order must be non-negative");
  if (n > 0 && n >= table.order())
    throw OrderError("derivative of order " + std::to_string(n) +
                     " needs interpolation order > " + std::to_string(n));
  if (side == Side::OnCurve) {
    if (n != 0)
      throw SingularEvaluationError("derivatives of the Cauchy integral are undefined on the contour");
    return 0.5 * hilbert_regularized(nodes, density, table, expansion_node);
  }
  const auto& pts = nodes.point();
  const auto c = table.row(expansion_node);
  const cplx z0 = pts[expansion_node];
  cplx s{};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const cplx w = pts[k] - z;
    if (w == cplx{})
      throw SingularEvaluationError("target coincides with node " + std::to_string(k));
    const cplx diff = density.values[k] - taylor_eval(c, pts[k] - z0, 0);
    s += diff * nodes.dz(k) * inv_pow(w, n + 1);
  }
  cplx r = factorial(n) * s / kTwoPiI;
  if (side == Side::Interior) r += taylor_eval(c, z - z0, n);
  return r;
}

cplx cauchy_regularized(const NodeTable& nodes, const DensityField& density,
                        const InterpolantTable& table, const TargetPoint& target, int n) {
  const std::size_t node =
      target.side.side == Side::OnCurve ? target.side.node : target.nearest_index;
  return cauchy_regularized_at(nodes, density, table, target.z, target.side.side, node, n);
}

cplx hilbert_regularized(const NodeTable& nodes, const DensityField& density,
                         const InterpolantTable& table, std::size_t m) {
  const auto& pts = nodes.point();
  const auto c = table.row(m);
  const cplx zm = pts[m];
  cplx s{};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == m) continue;
    const cplx diff = density.values[k] - taylor_eval(c, pts[k] - zm, 0);
    s += diff * nodes.dz(k) / (pts[k] - zm);
  }
  if (table.order() == 0) {
    // (phi(t) - phi(t_m)) gamma'(t) / (gamma(t) - gamma(t_m)) -> d/dt phi(t_m)
    cplx dphi;
    if (density.param_derivs.size() > 1) {
      dphi = density.param_derivs[1][m];
    } else {
      dphi = differentiate(nodes, density.values)[m];
    }
    s += nodes.weight[m] * dphi;
  }
  return s / cplx(0.0, kPi) + density.values[m];
}

cplx cauchy_boundary_limit(const NodeTable& nodes, const DensityField& density,
                           const InterpolantTable& table, std::size_t m, Side from) {
  const cplx h = 0.5 * hilbert_regularized(nodes, density, table, m);
  if (from == Side::Interior) return h + 0.5 * density.values[m];
  if (from == Side::Exterior) return h - 0.5 * density.values[m];
  return h;
}

cplx cauchy_eval(const NodeTable& nodes, const DensityField& density,
                 const InterpolantTable& table, const TargetPoint& target, int n) {
  if (target.regularize || target.side.side == Side::OnCurve)
    return cauchy_regularized(nodes, density, table, target, n);
  return cauchy_raw(nodes, density, target.z, n);
}

}  // namespace densint
