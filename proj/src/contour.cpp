#include "densint/contour.hpp"

#include <cmath>
#include <string>

#include "densint/errors.hpp"

namespace densint {
namespace {

void check_order(int order, int max_order, const char* what) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  if (order > max_order)
    throw CapabilityError(std::string(what) + ": derivative order " + std::to_string(order) +
                          " exceeds parametrization smoothness " + std::to_string(max_order));
}

void check_regular(const std::vector<cplx>& d) {
  if (d.size() < 2) return;
  const double scale = 1.0 + std::abs(d[0]);
  if (!(std::abs(d[1]) > 1e-14 * scale))
    throw DegenerateParametrizationError("|gamma'(t)| vanishes: parametrization is not regular");
}

std::vector<cplx> eval_analytic(const AnalyticCurve& c, double t, int order) {
  const cplx i{0.0, 1.0};
  const auto k = static_cast<std::size_t>(order);
  const Jet s = Jet::variable(k, t);
  Jet g(k, 0.0);
  switch (c.shape) {
    case Shape::Circle:
      g = c.center + c.a * exp(i * s);
      break;
    case Shape::Ellipse:
      g = c.center + c.a * cos(s) + (i * c.b) * sin(s);
      break;
    case Shape::Jellyfish: {
      const Jet radius = 1.0 + 0.3 * cos(4.0 * s + 2.0 * sin(s));
      g = c.center + radius * exp(i * (s - kPi / 2.0));
      break;
    }
  }
  return g.derivatives();
}

// Solves x_{k-1} + 4 x_k + x_{k+1} = r_k with periodic wraparound
// (Sherman-Morrison on the cyclic tridiagonal system).
std::vector<cplx> solve_cyclic_141(const std::vector<cplx>& r) {
  const std::size_t n = r.size();
  if (n == 3) {
    // Circulant 3x3 [4 1 1]: eigen-decomposition by hand.
    const cplx sum = r[0] + r[1] + r[2];
    std::vector<cplx> x(3);
    for (std::size_t k = 0; k < 3; ++k) x[k] = (r[k] - sum / 6.0) / 3.0;
    return x;
  }
  const double a = 1.0, b = 4.0, c = 1.0;
  const double alpha = c, beta = a;  // corner entries
  const double gamma = -b;
  std::vector<double> diag(n, b);
  diag[0] = b - gamma;
  diag[n - 1] = b - alpha * beta / gamma;

  auto tridiag = [&](const std::vector<cplx>& rhs) {
    std::vector<double> cp(n);
    std::vector<cplx> dp(n), x(n);
    cp[0] = c / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t k = 1; k < n; ++k) {
      const double m = diag[k] - a * cp[k - 1];
      cp[k] = c / m;
      dp[k] = (rhs[k] - a * dp[k - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) x[k] = dp[k] - cp[k] * x[k + 1];
    return x;
  };

  std::vector<cplx> x = tridiag(r);
  std::vector<cplx> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<cplx> zv = tridiag(u);
  const cplx fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + zv[0] + beta * zv[n - 1] / gamma);
  for (std::size_t k = 0; k < n; ++k) x[k] -= fact * zv[k];
  return x;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<cplx> control_points)
    : points_(std::move(control_points)) {
  const std::size_t n = points_.size();
  if (n < 3) throw ValidationError("periodic spline needs at least 3 control points");
  spacing_ = kTwoPi / static_cast<double>(n);
  std::vector<cplx> rhs(n);
  const double scale = 6.0 / (spacing_ * spacing_);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx prev = points_[(k + n - 1) % n];
    const cplx next = points_[(k + 1) % n];
    rhs[k] = scale * (next - 2.0 * points_[k] + prev);
  }
  second_ = solve_cyclic_141(rhs);
}

std::vector<cplx> PeriodicSpline::eval(double t, int order) const {
  check_order(order, 3, "periodic spline");
  const std::size_t n = points_.size();
  double tt = std::fmod(t, kTwoPi);
  if (tt < 0) tt += kTwoPi;
  // A parameter within rounding of a knot is that knot, so knots reproduce
  // the control points exactly.
  const double x = tt / spacing_;
  const double r = std::nearbyint(x);
  const bool on_knot = std::abs(x - r) < 1e-13 * std::max(1.0, r);
  auto k = static_cast<std::size_t>(on_knot ? r : std::floor(x)) % n;
  const double h = spacing_;
  const double u = on_knot ? 0.0 : tt - static_cast<double>(k) * h;  // distance from left knot
  const double v = h - u;                            // distance to right knot
  const std::size_t k1 = (k + 1) % n;
  const cplx p0 = points_[k], p1 = points_[k1];
  const cplx m0 = second_[k], m1 = second_[k1];

  std::vector<cplx> out(static_cast<std::size_t>(order) + 1);
  if (u == 0.0) {
    out[0] = p0;
  } else {
    out[0] = m0 * (v * v * v) / (6.0 * h) + m1 * (u * u * u) / (6.0 * h) +
             (p0 / h - m0 * h / 6.0) * v + (p1 / h - m1 * h / 6.0) * u;
  }
  if (order >= 1)
    out[1] = -m0 * (v * v) / (2.0 * h) + m1 * (u * u) / (2.0 * h) - (p0 / h - m0 * h / 6.0) +
             (p1 / h - m1 * h / 6.0);
  if (order >= 2) out[2] = m0 * v / h + m1 * u / h;
  if (order >= 3) out[3] = (m1 - m0) / h;
  return out;
}

std::vector<cplx> ClosedCurve::eval(double t, int order) const {
  check_order(order, max_order(), "closed curve");
  std::vector<cplx> d = std::visit(
      [&](const auto& c) -> std::vector<cplx> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AnalyticCurve>) {
          return eval_analytic(c, t, order);
        } else {
          return c.eval(t, order);
        }
      },
      impl_);
  check_regular(d);
  return d;
}

int Patch::max_order() const {
  if (const auto* r = std::get_if<CurveRestriction>(&impl_)) return r->curve->max_order();
  return kMaxAnalyticOrder;
}

std::vector<cplx> Patch::eval(double s, int order) const {
  check_order(order, max_order(), "patch");
  std::vector<cplx> out(static_cast<std::size_t>(order) + 1, cplx{});
  if (const auto* seg = std::get_if<LineSegment>(&impl_)) {
    out[0] = 0.5 * (seg->a + seg->b) + 0.5 * s * (seg->b - seg->a);
    if (s == -1.0) out[0] = seg->a;
    if (s == 1.0) out[0] = seg->b;
    if (order >= 1) out[1] = 0.5 * (seg->b - seg->a);
  } else {
    const auto& r = std::get<CurveRestriction>(impl_);
    const double half = 0.5 * (r.t1 - r.t0);
    const double t = r.t0 + (s + 1.0) * half;
    out = r.curve->eval(t, order);
    double f = 1.0;
    for (std::size_t k = 1; k < out.size(); ++k) {
      f *= half;
      out[k] *= f;
    }
  }
  check_regular(out);
  return out;
}

std::vector<Patch> Patch::split(std::size_t pieces) const {
  if (pieces == 0) throw ValidationError("pieces_per_patch must be >= 1");
  std::vector<Patch> out;
  out.reserve(pieces);
  const auto n = static_cast<double>(pieces);
  if (const auto* seg = std::get_if<LineSegment>(&impl_)) {
    auto node = [&](std::size_t i) {
      if (i == 0) return seg->a;
      if (i == pieces) return seg->b;
      return seg->a + (seg->b - seg->a) * (static_cast<double>(i) / n);
    };
    for (std::size_t i = 0; i < pieces; ++i) out.emplace_back(LineSegment{node(i), node(i + 1)});
  } else {
    const auto& r = std::get<CurveRestriction>(impl_);
    auto node = [&](std::size_t i) {
      if (i == 0) return r.t0;
      if (i == pieces) return r.t1;
      return r.t0 + (r.t1 - r.t0) * (static_cast<double>(i) / n);
    };
    for (std::size_t i = 0; i < pieces; ++i)
      out.emplace_back(CurveRestriction{r.curve, node(i), node(i + 1)});
  }
  return out;
}

Contour Contour::circle(double radius, cplx center) {
  if (!(radius > 0)) throw ValidationError("circle radius must be positive");
  Contour c;
  c.kind_ = ContourKind::AnalyticClosed;
  c.name_ = "circle";
  c.curve_ = std::make_shared<ClosedCurve>(AnalyticCurve{Shape::Circle, center, radius, radius});
  return c;
}

Contour Contour::ellipse(double a, double b, cplx center) {
  if (!(a > 0 && b > 0)) throw ValidationError("ellipse semi-axes must be positive");
  Contour c;
  c.kind_ = ContourKind::AnalyticClosed;
  c.name_ = "ellipse";
  c.curve_ = std::make_shared<ClosedCurve>(AnalyticCurve{Shape::Ellipse, center, a, b});
  return c;
}

Contour Contour::jellyfish() {
  Contour c;
  c.kind_ = ContourKind::AnalyticClosed;
  c.name_ = "jellyfish";
  c.curve_ = std::make_shared<ClosedCurve>(AnalyticCurve{Shape::Jellyfish, {}, 1.0, 1.0});
  return c;
}

Contour Contour::spline(std::vector<cplx> control_points) {
  Contour c;
  c.kind_ = ContourKind::PeriodicSpline;
  c.name_ = "spline";
  c.curve_ = std::make_shared<ClosedCurve>(PeriodicSpline(std::move(control_points)));
  return c;
}

Contour Contour::patches(std::vector<Patch> patches) {
  if (patches.empty()) throw ValidationError("patch collection is empty");
  for (std::size_t p = 0; p < patches.size(); ++p) {
    const cplx end = patches[p].end();
    const cplx next = patches[(p + 1) % patches.size()].start();
    if (std::abs(end - next) > 1e-12 * (1.0 + std::abs(end)))
      throw ValidationError("patch " + std::to_string(p) + " does not meet its successor");
  }
  Contour c;
  c.kind_ = ContourKind::PatchCollection;
  c.name_ = "patches";
  c.patches_ = std::move(patches);
  return c;
}

std::vector<cplx> Contour::eval(double t, int order) const {
  if (!curve_)
    throw CapabilityError("patch collections have no global parametrization; use eval_patch");
  return curve_->eval(t, order);
}

int Contour::max_order() const {
  if (curve_) return curve_->max_order();
  int m = kMaxAnalyticOrder;
  for (const auto& p : patches_) m = std::min(m, p.max_order());
  return m;
}

std::vector<cplx> Contour::eval_patch(std::size_t p, double s, int order) const {
  return patches_.at(p).eval(s, order);
}

Contour Contour::as_patch_collection(std::size_t pieces) const {
  if (kind_ == ContourKind::PatchCollection) return subdivide_patches(*this, pieces);
  if (pieces == 0) throw ValidationError("pieces must be >= 1");
  std::vector<Patch> patches;
  patches.reserve(pieces);
  const auto n = static_cast<double>(pieces);
  for (std::size_t p = 0; p < pieces; ++p) {
    const double t0 = kTwoPi * static_cast<double>(p) / n;
    const double t1 = p + 1 == pieces ? kTwoPi : kTwoPi * static_cast<double>(p + 1) / n;
    patches.emplace_back(CurveRestriction{curve_, t0, t1});
  }
  Contour c = Contour::patches(std::move(patches));
  c.name_ = name_;
  c.ref_ = reference_point();
  return c;
}

cplx Contour::reference_point() const {
  if (ref_) return *ref_;
  if (curve_) {
    if (const auto* a = curve_->analytic()) return a->center;
  }
  // Area centroid of a polygon through sample points.
  std::vector<cplx> pts;
  if (curve_) {
    pts = curve_->spline()->control_points();
  } else {
    for (const auto& p : patches_) pts.push_back(p.start());
  }
  double area = 0.0;
  cplx acc{};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const cplx p = pts[k], q = pts[(k + 1) % pts.size()];
    const double cr = p.real() * q.imag() - q.real() * p.imag();
    area += cr;
    acc += cr * (p + q);
  }
  if (std::abs(area) < 1e-300) return pts.front();
  return acc / (3.0 * area);
}

std::vector<cplx> koch_vertices(int level, double side) {
  if (level < 0) throw ValidationError("Koch level must be >= 0");
  if (!(side > 0)) throw ValidationError("Koch side must be positive");
  const double radius = side / std::sqrt(3.0);
  std::vector<cplx> v;
  for (int k = 0; k < 3; ++k) v.push_back(std::polar(radius, kPi / 2.0 + kTwoPi * k / 3.0));
  const cplx bump = std::polar(1.0, -kPi / 3.0);
  for (int l = 0; l < level; ++l) {
    std::vector<cplx> next;
    next.reserve(v.size() * 4);
    for (std::size_t k = 0; k < v.size(); ++k) {
      const cplx a = v[k], b = v[(k + 1) % v.size()];
      const cplx d = (b - a) / 3.0;
      next.push_back(a);
      next.push_back(a + d);
      next.push_back(a + d + d * bump);
      next.push_back(a + 2.0 * d);
    }
    v = std::move(next);
  }
  v.push_back(v.front());
  return v;
}

Contour build_koch_polygon(int level, double side) {
  const std::vector<cplx> v = koch_vertices(level, side);
  std::vector<Patch> patches;
  patches.reserve(v.size() - 1);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) patches.emplace_back(LineSegment{v[k], v[k + 1]});
  Contour c = Contour::patches(std::move(patches));
  c.name_ = "koch";
  c.ref_ = cplx{};
  return c;
}

Contour subdivide_patches(const Contour& contour, std::size_t pieces_per_patch) {
  if (pieces_per_patch == 0) throw ValidationError("pieces_per_patch must be >= 1");
  if (contour.kind() != ContourKind::PatchCollection)
    return contour.as_patch_collection(pieces_per_patch);
  std::vector<Patch> out;
  out.reserve(contour.num_patches() * pieces_per_patch);
  for (const auto& p : contour.patch_list()) {
    auto pieces = p.split(pieces_per_patch);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  Contour c = Contour::patches(std::move(out));
  c.name_ = contour.name_;
  c.ref_ = contour.ref_;
  return c;
}

}  // namespace densint
