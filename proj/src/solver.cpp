#include "densint/solver.hpp"

#include <cmath>
#include <functional>

#include "densint/errors.hpp"

namespace densint {
namespace {

using Vec = std::vector<double>;

const NodeTable& checked_nodes(const BieProblem& p) {
  if (!p.nodes) throw ValidationError("problem has no node table");
  return *p.nodes;
}

void check_data(const BieProblem& p) {
  if (p.data.size() != p.nodes->size())
    throw ValidationError("boundary data length does not match the node count");
}

BieSolution run(const std::function<Vec(const Vec&)>& A, const Vec& rhs, const GmresOptions& o) {
  GmresResult<double> r = gmres<double>(A, rhs, o);
  return {std::move(r.x), r.iterations, std::move(r.residuals)};
}

Vec minus_log_abs(const NodeTable& nodes) {
  Vec b(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) b[m] = -std::log(std::abs(nodes.point()[m]));
  return b;
}

void require_origin_inside(const NodeTable& nodes) {
  const SideClass s = classify_point(0.0, nodes);
  if (s.side != Side::Interior)
    throw GeometryError("conformal maps need the origin strictly inside the contour");
}

}  // namespace

BieSolution solve_robin_single(const BieProblem& p) {
  const NodeTable& nodes = checked_nodes(p);
  check_data(p);
  if (p.order < 0) throw OrderError("interpolation order must be non-negative");
  const SingleLayerOperator S(nodes, p.cut);
  const int N = p.order;
  Vec rhs = apply_K(nodes, p.data);
  for (std::size_t m = 0; m < rhs.size(); ++m) rhs[m] += 0.5 * p.data[m];
  auto A = [&](const Vec& v) {
    const LayerDensity layer = make_layer_density(nodes, v, N);
    Vec out = apply_K(nodes, v);
    const Vec s = S.apply(layer);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += 0.5 * v[m] + s[m];
    return out;
  };
  return run(A, rhs, p.gmres);
}

BieSolution solve_robin_hyper(const BieProblem& p) {
  const NodeTable& nodes = checked_nodes(p);
  check_data(p);
  if (p.order < 1) throw OrderError("the hypersingular equation needs N >= 1");
  const int N = p.order;
  Vec rhs = apply_Kt(nodes, p.data);
  for (std::size_t m = 0; m < rhs.size(); ++m) rhs[m] -= 0.5 * p.data[m];
  auto A = [&](const Vec& u) {
    const LayerDensity layer = make_layer_density(nodes, u, N);
    Vec out = apply_Kt(nodes, u);
    const Vec t = apply_T(nodes, layer);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += -0.5 * u[m] + t[m];
    return out;
  };
  return run(A, rhs, p.gmres);
}

BieSolution solve_conformal_interior(const BieProblem& p) {
  const NodeTable& nodes = checked_nodes(p);
  require_origin_inside(nodes);
  auto A = [&](const Vec& phi) {
    Vec out = apply_K(nodes, phi);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] -= 0.5 * phi[m];
    return out;
  };
  return run(A, minus_log_abs(nodes), p.gmres);
}

BieSolution solve_conformal_exterior(const BieProblem& p) {
  const NodeTable& nodes = checked_nodes(p);
  require_origin_inside(nodes);
  auto A = [&](const Vec& phi) {
    Vec out = apply_K(nodes, phi);
    double total = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) total += phi[m] * nodes.ds(m);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += 0.5 * phi[m] + total;
    return out;
  };
  return run(A, minus_log_abs(nodes), p.gmres);
}

BieSolution solve(const BieProblem& p) {
  switch (p.equation) {
    case Equation::RobinSingle: return solve_robin_single(p);
    case Equation::RobinHyper: return solve_robin_hyper(p);
    case Equation::ConfInterior: return solve_conformal_interior(p);
    case Equation::ConfExterior: return solve_conformal_exterior(p);
  }
  throw ValidationError("unknown equation");
}

double greens_field(const NodeTable& nodes, const LayerDensity& u_trace,
                    const LayerDensity& v_trace, const TargetPoint& target, const BranchCut& cut) {
  if (target.side.side != Side::Interior)
    throw DomainError("Green's representation is evaluated at interior points");
  return single_layer_potential(nodes, v_trace, target, cut) -
         double_layer_potential(nodes, u_trace, target);
}

}  // namespace densint
