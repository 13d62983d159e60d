#include "densint/laplace.hpp"

#include <cmath>
#include <string>

#include "densint/errors.hpp"

namespace densint {
namespace {

const double kInvTwoPi = 1.0 / kTwoPi;
const cplx kTwoPiI{0.0, kTwoPi};

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Closed segments [a, b] and [c, d] share a point.
bool segments_meet(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](cplx p, cplx q, cplx r, double o) {
    return o == 0.0 && std::min(p.real(), q.real()) <= r.real() &&
           r.real() <= std::max(p.real(), q.real()) && std::min(p.imag(), q.imag()) <= r.imag() &&
           r.imag() <= std::max(p.imag(), q.imag());
  };
  return on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4);
}

// Does segment [a, b] cross the node polygon? Edges touching node `skip`
// are ignored when the segment starts or ends there.
bool crosses_polygon(const NodeTable& nodes, cplx a, cplx b, std::optional<std::size_t> skip) {
  const auto& z = nodes.point();
  const std::size_t M = z.size();
  for (std::size_t j = 0; j < M; ++j) {
    const std::size_t n = (j + 1) % M;
    if (skip && (j == *skip || n == *skip)) continue;
    if (segments_meet(a, b, z[j], z[n])) return true;
  }
  return false;
}

cplx unit(cplx v, const char* what) {
  const double r = std::abs(v);
  if (!(r > 0.0)) throw GeometryError(std::string("zero-length ") + what);
  return v / r;
}

double curvature_at(const NodeTable& nodes, std::size_t m) {
  const cplx d1 = nodes.deriv[1][m], d2 = nodes.deriv[2][m];
  return std::imag(std::conj(d1) * d2) / std::pow(std::abs(d1), 3);
}

}  // namespace

LogBranch::LogBranch(std::vector<cplx> vertices, cplx escape)
    : vertices_(std::move(vertices)), escape_(unit(escape, "branch escape direction")) {
  if (vertices_.empty()) throw GeometryError("branch path has no vertices");
  rotation_ = -std::conj(escape_);
  offset_ = std::arg(-escape_);
}

cplx LogBranch::operator()(cplx zeta) const {
  cplx s{};
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
    s += std::log((zeta - vertices_[i]) / (zeta - vertices_[i + 1]));
  s += std::log((zeta - vertices_.back()) * rotation_);
  return s + cplx(0.0, offset_);
}

void validate_branch(const NodeTable& nodes, const BranchCut& cut) {
  if (cut.kind == BranchCut::Kind::Chain) {
    if (!(std::abs(cut.direction) > 0.0)) throw GeometryError("chain escape direction is zero");
    return;
  }
  const auto& z = nodes.point();
  const std::size_t M = z.size();
  double turn = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const cplx a = z[m] - cut.center, b = z[(m + 1) % M] - cut.center;
    if (!(cross(a, b) > 0.0))
      throw GeometryError("contour is not star-shaped about the ray centre (node " +
                          std::to_string(m) + "); supply a chain branch cut");
    turn += std::arg(b / a);
  }
  if (std::abs(turn - kTwoPi) > 1e-6)
    throw GeometryError("ray centre is not enclosed by the contour");
}

LogBranch make_log_branch(const NodeTable& nodes, const BranchCut& cut, cplx z, Side side,
                          std::size_t anchor) {
  std::vector<cplx> v{z};
  const cplx z0 = nodes.point()[anchor];
  if (side == Side::Interior) {
    v.push_back(z0);
    if (crosses_polygon(nodes, z, z0, anchor))
      throw GeometryError("segment from target to its expansion node leaves the domain");
  }
  if (cut.kind == BranchCut::Kind::StarRay) {
    const cplx last = v.back();
    return LogBranch(std::move(v), unit(last - cut.center, "ray (branch point at the centre)"));
  }
  for (cplx p : cut.points) v.push_back(p);
  const cplx dir = unit(cut.direction, "chain escape direction");
  const double reach = 10.0 * nodes.diameter + 2.0 * std::abs(v.back() - nodes.point()[0]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx a = v[i];
    const cplx b = i + 1 < v.size() ? v[i + 1] : v[i] + reach * dir;
    if (i == 0 && side == Side::Interior) continue;  // checked above
    std::optional<std::size_t> skip;
    if (a == z0 || b == z0) skip = anchor;
    if (crosses_polygon(nodes, a, b, skip))
      throw GeometryError("branch cut chain crosses the contour (segment " + std::to_string(i) +
                          ")");
  }
  return LogBranch(std::move(v), dir);
}

std::vector<double> curvature(const NodeTable& nodes) {
  std::vector<double> k(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) k[m] = curvature_at(nodes, m);
  return k;
}

LayerDensity make_layer_density(const NodeTable& nodes, std::span<const double> values, int N) {
  if (values.size() != nodes.size()) throw ValidationError("density length does not match nodes");
  LayerDensity L;
  L.order = N;
  L.values.assign(values.begin(), values.end());
  std::vector<cplx> phi(values.size()), psi(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    phi[m] = values[m];
    psi[m] = values[m] * nodes.speed[m] / nodes.deriv[1][m];
  }
  L.phi = DensityField::from_samples(nodes, std::move(phi), 2);
  L.psi = DensityField::from_samples(nodes, std::move(psi), 1);
  L.phi_table = build_interpolant_table(nodes, L.phi, N);
  L.psi_table = build_interpolant_table(nodes, L.psi, N);
  return L;
}

double double_layer_potential(const NodeTable& nodes, const LayerDensity& layer,
                              const TargetPoint& target) {
  if (target.side.side == Side::OnCurve)
    return double_layer_operator_K(nodes, layer.values, target.side.node);
  return -std::real(cauchy_eval(nodes, layer.phi, layer.phi_table, target, 0));
}

double single_layer_potential(const NodeTable& nodes, const LayerDensity& layer,
                              const TargetPoint& target, const BranchCut& cut) {
  if (target.side.side == Side::OnCurve)
    return single_layer_operator_S(nodes, layer, target.side.node, cut);
  const auto& pts = nodes.point();
  const std::size_t M = nodes.size();
  if (!target.regularize) {
    double s = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      const double r = std::abs(target.z - pts[k]);
      if (r == 0.0) throw SingularEvaluationError("target coincides with a node");
      s += std::log(r) * layer.values[k] * nodes.ds(k);
    }
    return -kInvTwoPi * s;
  }
  validate_branch(nodes, cut);
  const Side side = target.side.side;
  const std::size_t a = target.nearest_index;
  const LogBranch log_z = make_log_branch(nodes, cut, target.z, side, a);
  const auto c = layer.psi_table.row(a);
  const cplx z0 = pts[a];
  cplx s{};
  for (std::size_t k = 0; k < M; ++k) {
    if (k == a && side == Side::Interior) continue;  // psi - Q_N vanishes exactly
    const cplx diff = layer.psi.values[k] - taylor_eval(c, pts[k] - z0, 0);
    s += log_z(pts[k]) * diff * nodes.dz(k);
  }
  cplx r = s / kTwoPiI;
  if (side == Side::Interior) r -= taylor_integral(c, target.z - z0);
  return std::imag(r);
}

std::array<double, 2> grad_double_layer(const NodeTable& nodes, const LayerDensity& layer,
                                        const TargetPoint& target) {
  if (target.side.side == Side::OnCurve)
    throw SingularEvaluationError("gradient of the double layer is undefined on the contour");
  const cplx d = cauchy_eval(nodes, layer.phi, layer.phi_table, target, 1);
  return {-d.real(), d.imag()};
}

std::array<double, 2> grad_single_layer(const NodeTable& nodes, const LayerDensity& layer,
                                        const TargetPoint& target) {
  if (target.side.side == Side::OnCurve)
    throw SingularEvaluationError("gradient of the single layer is undefined on the contour");
  const cplx c = cauchy_eval(nodes, layer.psi, layer.psi_table, target, 0);
  return {-c.imag(), -c.real()};
}

double double_layer_operator_K(const NodeTable& nodes, std::span<const double> phi,
                               std::size_t m) {
  const auto& pts = nodes.point();
  const cplx x = pts[m];
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == m) continue;
    const cplx d = x - pts[k];
    s += std::real(std::conj(nodes.normal[k]) * d) / std::norm(d) * phi[k] * nodes.ds(k);
  }
  s += -0.5 * curvature_at(nodes, m) * phi[m] * nodes.ds(m);
  return kInvTwoPi * s;
}

double adjoint_double_layer_Kt(const NodeTable& nodes, std::span<const double> phi,
                               std::size_t m) {
  const auto& pts = nodes.point();
  const cplx x = pts[m];
  const cplx nu = std::conj(nodes.normal[m]);
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == m) continue;
    const cplx d = x - pts[k];
    s -= std::real(nu * d) / std::norm(d) * phi[k] * nodes.ds(k);
  }
  s += -0.5 * curvature_at(nodes, m) * phi[m] * nodes.ds(m);
  return kInvTwoPi * s;
}

double hypersingular_T(const NodeTable& nodes, const LayerDensity& layer, std::size_t m) {
  const int N = layer.order;
  if (N < 1) throw OrderError("hypersingular operator needs interpolation order N >= 1");
  const auto& pts = nodes.point();
  const auto c = layer.phi_table.row(m);
  const cplx zm = pts[m];
  cplx s{};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == m) continue;
    const cplx w = pts[k] - zm;
    const cplx diff = layer.phi.values[k] - taylor_eval(c, w, 0);
    s += diff * nodes.dz(k) / (w * w);
  }
  // Node term: the limit (phi'' - p_N'') / (2 gamma') of the integrand, with
  // phi'' from the stored parametric columns. It would vanish identically for
  // N >= 2 in exact arithmetic; keeping it cancels the differentiation error
  // carried by c_2.
  const cplx d1 = nodes.deriv[1][m], d2 = nodes.deriv[2][m];
  cplx pn2 = c[1] * d2;
  if (N >= 2) pn2 += c[2] * d1 * d1;
  s += nodes.weight[m] * (layer.phi.param_derivs[2][m] - pn2) / (2.0 * d1);
  return -std::real(nodes.normal[m] * s / kTwoPiI);
}

double single_layer_operator_S(const NodeTable& nodes, const LayerDensity& layer,
                               std::size_t m, const BranchCut& cut) {
  validate_branch(nodes, cut);
  const auto& pts = nodes.point();
  const LogBranch log_z = make_log_branch(nodes, cut, pts[m], Side::OnCurve, m);
  const auto c = layer.psi_table.row(m);
  cplx s{};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == m) continue;
    const cplx diff = layer.psi.values[k] - taylor_eval(c, pts[k] - pts[m], 0);
    s += log_z(pts[k]) * diff * nodes.dz(k);
  }
  return std::imag(s / kTwoPiI);
}

std::vector<double> apply_K(const NodeTable& nodes, std::span<const double> phi) {
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = double_layer_operator_K(nodes, phi, m);
  return out;
}

std::vector<double> apply_Kt(const NodeTable& nodes, std::span<const double> phi) {
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = adjoint_double_layer_Kt(nodes, phi, m);
  return out;
}

std::vector<double> apply_T(const NodeTable& nodes, const LayerDensity& layer) {
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = hypersingular_T(nodes, layer, m);
  return out;
}

SingleLayerOperator::SingleLayerOperator(const NodeTable& nodes, const BranchCut& cut)
    : nodes_(&nodes) {
  validate_branch(nodes, cut);
  const std::size_t M = nodes.size();
  const auto& pts = nodes.point();
  logs_.assign(M * M, cplx{});
  for (std::size_t m = 0; m < M; ++m) {
    const LogBranch log_z = make_log_branch(nodes, cut, pts[m], Side::OnCurve, m);
    for (std::size_t k = 0; k < M; ++k)
      if (k != m) logs_[m * M + k] = log_z(pts[k]);
  }
}

double SingleLayerOperator::row(const LayerDensity& layer, std::size_t m) const {
  const NodeTable& nodes = *nodes_;
  const std::size_t M = nodes.size();
  const auto& pts = nodes.point();
  const auto c = layer.psi_table.row(m);
  const cplx* lr = logs_.data() + m * M;
  cplx s{};
  for (std::size_t k = 0; k < M; ++k) {
    if (k == m) continue;
    const cplx diff = layer.psi.values[k] - taylor_eval(c, pts[k] - pts[m], 0);
    s += lr[k] * diff * nodes.dz(k);
  }
  return std::imag(s / kTwoPiI);
}

std::vector<double> SingleLayerOperator::apply(const LayerDensity& layer) const {
  std::vector<double> out(nodes_->size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = row(layer, m);
  return out;
}

}  // namespace densint
