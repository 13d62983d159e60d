#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "densint/jet.hpp"

namespace densint {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Largest derivative order served by closed-form (jet) parametrizations.
inline constexpr int kMaxAnalyticOrder = 16;

enum class ContourKind { AnalyticClosed, PeriodicSpline, PatchCollection };

enum class Shape { Circle, Ellipse, Jellyfish };

// Closed-form 2pi-periodic parametrization.
struct AnalyticCurve {
  Shape shape = Shape::Circle;
  cplx center{};
  double a = 1.0;  // radius (circle) or x semi-axis (ellipse)
  double b = 1.0;  // y semi-axis (ellipse)
};

// Periodic cubic spline through ordered control points. Knot k sits at
// t_k = 2 pi k / n (uniform in index).
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::vector<cplx> control_points);

  const std::vector<cplx>& control_points() const { return points_; }
  // gamma, gamma', ... up to order <= 3 at parameter t (any real t).
  std::vector<cplx> eval(double t, int order) const;

 private:
  std::vector<cplx> points_;
  std::vector<cplx> second_;  // second derivatives at knots
  double spacing_ = 0.0;
};

class ClosedCurve {
 public:
  explicit ClosedCurve(AnalyticCurve c) : impl_(c) {}
  explicit ClosedCurve(PeriodicSpline s) : impl_(std::move(s)) {}

  bool is_spline() const { return std::holds_alternative<PeriodicSpline>(impl_); }
  int max_order() const { return is_spline() ? 3 : kMaxAnalyticOrder; }
  std::vector<cplx> eval(double t, int order) const;
  const AnalyticCurve* analytic() const { return std::get_if<AnalyticCurve>(&impl_); }
  const PeriodicSpline* spline() const { return std::get_if<PeriodicSpline>(&impl_); }

 private:
  std::variant<AnalyticCurve, PeriodicSpline> impl_;
};

// Straight segment from `a` to `b` on s in [-1, 1].
struct LineSegment {
  cplx a, b;
};

// Parameter interval [t0, t1] of a closed curve mapped onto s in [-1, 1].
struct CurveRestriction {
  std::shared_ptr<const ClosedCurve> curve;
  double t0 = 0.0, t1 = 0.0;
};

class Patch {
 public:
  Patch(LineSegment s) : impl_(s) {}  // NOLINT(google-explicit-constructor)
  Patch(CurveRestriction r) : impl_(std::move(r)) {}  // NOLINT

  int max_order() const;
  // gamma_p, gamma_p', ... at s in [-1, 1].
  std::vector<cplx> eval(double s, int order) const;
  cplx start() const { return eval(-1.0, 0)[0]; }
  cplx end() const { return eval(1.0, 0)[0]; }
  // Equal parameter subintervals.
  std::vector<Patch> split(std::size_t pieces) const;
  bool is_line() const { return std::holds_alternative<LineSegment>(impl_); }

 private:
  std::variant<LineSegment, CurveRestriction> impl_;
};

class Contour;

// Koch snowflake polygon with 3 * 4^level vertices, counterclockwise, centred
// at the origin. Base triangle has the given side length.
Contour build_koch_polygon(int level, double side = 1.0);

Contour subdivide_patches(const Contour& contour, std::size_t pieces_per_patch);

class Contour {
 public:
  static Contour circle(double radius = 1.0, cplx center = {});
  static Contour ellipse(double a, double b, cplx center = {});
  static Contour jellyfish();
  static Contour spline(std::vector<cplx> control_points);
  // Patches must be ordered counterclockwise and close up.
  static Contour patches(std::vector<Patch> patches);

  ContourKind kind() const { return kind_; }
  bool has_global_parametrization() const { return curve_ != nullptr; }
  std::string name() const { return name_; }

  // gamma(t), gamma'(t), ..., gamma^(order)(t) for closed kinds, t in [0, 2pi).
  std::vector<cplx> eval(double t, int order) const;
  int max_order() const;

  std::size_t num_patches() const { return patches_.size(); }
  const std::vector<Patch>& patch_list() const { return patches_; }
  std::vector<cplx> eval_patch(std::size_t p, double s, int order) const;

  // The same curve as `pieces` equal parameter patches.
  Contour as_patch_collection(std::size_t pieces) const;

  // Centre of an analytic shape, otherwise the area centroid of the control
  // polygon. Used as the star-ray origin for branch cuts.
  cplx reference_point() const;

  const std::shared_ptr<const ClosedCurve>& closed_curve() const { return curve_; }

 private:
  Contour() = default;
  friend Contour build_koch_polygon(int level, double side);
  friend Contour subdivide_patches(const Contour& contour, std::size_t pieces_per_patch);

  ContourKind kind_ = ContourKind::AnalyticClosed;
  std::string name_;
  std::shared_ptr<const ClosedCurve> curve_;
  std::vector<Patch> patches_;
  std::optional<cplx> ref_;
};

// Vertex list of the same polygon; front() == back() exactly.
std::vector<cplx> koch_vertices(int level, double side = 1.0);

inline std::vector<cplx> eval_parametrization(const Contour& c, double t, int order) {
  return c.eval(t, order);
}

}  // namespace densint
