#include "densint/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "densint/errors.hpp"
#include "densint/numerics.hpp"

namespace densint {
namespace {

void finish_geometry(NodeTable& t) {
  const std::size_t M = t.size();
  const auto& z = t.deriv[0];
  const auto& d1 = t.deriv[1];
  t.normal.resize(M);
  t.speed.resize(M);
  t.spacing.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double s = std::abs(d1[m]);
    if (!(s > 1e-14 * (1.0 + std::abs(z[m]))))
      throw DegenerateParametrizationError("gamma' vanishes at node " + std::to_string(m));
    t.speed[m] = s;
    t.normal[m] = cplx(0.0, -1.0) * d1[m] / s;
  }
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t next = (m + 1) % M, prev = (m + M - 1) % M;
    t.spacing[m] = 0.5 * (std::abs(z[next] - z[m]) + std::abs(z[m] - z[prev]));
  }
  double diam = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j) diam = std::max(diam, std::norm(z[i] - z[j]));
  t.diameter = std::sqrt(diam);
}

// Columns above the exactly available ones come from differentiating the
// last exact column.
void extend_spectrally(NodeTable& t, int order) {
  while (t.max_derivative() < order) t.deriv.push_back(differentiate(t, t.deriv.back()));
}

// Point on the continuous contour for a parameter inside piece `k` of the
// winding polygon.
cplx contour_point(const NodeTable& t, std::size_t patch, double s) {
  if (t.rule == Rule::Trapezoid) return t.contour->eval(s, 0)[0];
  return t.contour->eval_patch(patch, s, 0)[0];
}

double chord_angle(cplx z, cplx a, cplx b) { return std::arg((b - z) / (a - z)); }

double refine(const NodeTable& t, cplx z, std::size_t patch, double sa, double sb, cplx za,
              cplx zb, int depth) {
  const double len = std::abs(zb - za);
  const double dist = std::min(std::abs(za - z), std::abs(zb - z));
  if (depth >= 40 || len <= 0.25 * dist) {
    if (za == z || zb == z) return 0.0;
    return chord_angle(z, za, zb);
  }
  const double sm = 0.5 * (sa + sb);
  const cplx zm = contour_point(t, patch, sm);
  return refine(t, z, patch, sa, sm, za, zm, depth + 1) +
         refine(t, z, patch, sm, sb, zm, zb, depth + 1);
}

}  // namespace

NodeTable discretize_trapezoid(const Contour& contour, std::size_t M, int order) {
  if (!contour.has_global_parametrization())
    throw ValidationError("trapezoid rule needs a globally parametrized contour");
  const QuadratureRule rule = trapezoid_nodes(M);
  order = std::max(order, 2);
  NodeTable t;
  t.rule = Rule::Trapezoid;
  t.num_patches = 1;
  t.nodes_per_patch = M;
  t.param = rule.nodes;
  t.weight = rule.weights;
  t.patch.assign(M, 0);
  t.contour = std::make_shared<const Contour>(contour);
  const int exact = std::min(order, contour.max_order());
  t.deriv.assign(static_cast<std::size_t>(exact) + 1, std::vector<cplx>(M));
  for (std::size_t m = 0; m < M; ++m) {
    const auto d = contour.eval(t.param[m], exact);
    for (int k = 0; k <= exact; ++k) t.deriv[k][m] = d[k];
  }
  extend_spectrally(t, order);
  finish_geometry(t);
  return t;
}

NodeTable discretize_fejer(const Contour& contour, std::size_t nodes_per_patch, int order) {
  if (contour.kind() != ContourKind::PatchCollection)
    throw ValidationError("Fejer discretization needs a patch collection");
  if (nodes_per_patch < 2) throw ValidationError("Fejer grids need at least 2 nodes per patch");
  QuadratureRule rule = fejer_rule(nodes_per_patch);
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  order = std::max(order, 2);
  const std::size_t P = contour.num_patches();
  const std::size_t M = P * nodes_per_patch;
  NodeTable t;
  t.rule = Rule::Fejer;
  t.num_patches = P;
  t.nodes_per_patch = nodes_per_patch;
  t.param.resize(M);
  t.weight.resize(M);
  t.patch.resize(M);
  t.contour = std::make_shared<const Contour>(contour);
  const int exact = std::min(order, contour.max_order());
  t.deriv.assign(static_cast<std::size_t>(exact) + 1, std::vector<cplx>(M));
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t j = 0; j < nodes_per_patch; ++j) {
      const std::size_t m = p * nodes_per_patch + j;
      t.param[m] = rule.nodes[j];
      t.weight[m] = rule.weights[j];
      t.patch[m] = p;
      const auto d = contour.eval_patch(p, rule.nodes[j], exact);
      for (int k = 0; k <= exact; ++k) t.deriv[k][m] = d[k];
    }
  }
  extend_spectrally(t, order);
  finish_geometry(t);
  return t;
}

std::vector<cplx> differentiate(const NodeTable& nodes, std::span<const cplx> values) {
  if (values.size() != nodes.size()) throw ValidationError("sample count does not match nodes");
  if (nodes.rule == Rule::Trapezoid) return fft_diff_periodic(values);
  const std::size_t n = nodes.nodes_per_patch;
  std::vector<cplx> out(values.size());
  std::vector<cplx> block(n);
  for (std::size_t p = 0; p < nodes.num_patches; ++p) {
    // cheb_diff wants descending nodes.
    for (std::size_t j = 0; j < n; ++j) block[j] = values[p * n + (n - 1 - j)];
    const auto d = cheb_diff(block);
    for (std::size_t j = 0; j < n; ++j) out[p * n + (n - 1 - j)] = d[j];
  }
  return out;
}

DensityField DensityField::from_samples(const NodeTable& nodes, std::vector<cplx> samples,
                                        int derivative_order) {
  if (samples.size() != nodes.size()) throw ValidationError("sample count does not match nodes");
  DensityField f;
  f.values = std::move(samples);
  f.param_derivs.push_back(f.values);
  for (int k = 1; k <= derivative_order; ++k)
    f.param_derivs.push_back(differentiate(nodes, f.param_derivs.back()));
  return f;
}

DensityField DensityField::from_function(const NodeTable& nodes,
                                         const std::function<cplx(cplx)>& fn,
                                         int derivative_order) {
  std::vector<cplx> s(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) s[m] = fn(nodes.point()[m]);
  return from_samples(nodes, std::move(s), derivative_order);
}

NearestNode nearest_node(cplx z, const NodeTable& nodes) {
  if (nodes.size() == 0) throw ValidationError("empty node table");
  NearestNode best{0, std::abs(z - nodes.point()[0])};
  for (std::size_t m = 1; m < nodes.size(); ++m) {
    const double d = std::abs(z - nodes.point()[m]);
    if (d < best.distance) best = {m, d};
  }
  return best;
}

double winding_number(cplx z, const NodeTable& nodes) {
  const std::size_t M = nodes.size();
  const auto& pts = nodes.point();
  double total = 0.0;
  if (nodes.rule == Rule::Trapezoid) {
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t n = (m + 1) % M;
      const double sb = m + 1 == M ? kTwoPi : nodes.param[n];
      total += refine(nodes, z, 0, nodes.param[m], sb, pts[m], pts[n], 0);
    }
  } else {
    const std::size_t n = nodes.nodes_per_patch;
    for (std::size_t p = 0; p < nodes.num_patches; ++p) {
      const cplx start = contour_point(nodes, p, -1.0);
      const cplx end = contour_point(nodes, p, 1.0);
      const std::size_t b = p * n;
      total += refine(nodes, z, p, -1.0, nodes.param[b], start, pts[b], 0);
      for (std::size_t j = 0; j + 1 < n; ++j)
        total += refine(nodes, z, p, nodes.param[b + j], nodes.param[b + j + 1], pts[b + j],
                        pts[b + j + 1], 0);
      total += refine(nodes, z, p, nodes.param[b + n - 1], 1.0, pts[b + n - 1], end, 0);
    }
  }
  return total / kTwoPi;
}

SideClass classify_point(cplx z, const NodeTable& nodes) {
  const NearestNode nn = nearest_node(z, nodes);
  if (nn.distance < nodes.on_curve_tol()) return {Side::OnCurve, nn.index};
  const double w = winding_number(z, nodes);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.1)
    throw ResolutionError("winding number " + std::to_string(w) +
                          " is not close to an integer; refine the grid");
  if (r == 1.0) return {Side::Interior, nn.index};
  if (r == 0.0) return {Side::Exterior, nn.index};
  throw ResolutionError("winding number " + std::to_string(w) +
                        " indicates a non-simple or clockwise contour");
}

}  // namespace densint
