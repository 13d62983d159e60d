#include "densint/conformal.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "densint/errors.hpp"

namespace densint {

ConformalMap ConformalMap::solve(const NodeTable& nodes, MapDirection direction, int order,
                                 const GmresOptions& gmres) {
  BieProblem p;
  p.nodes = &nodes;
  p.order = order;
  p.gmres = gmres;
  p.equation = direction == MapDirection::Interior ? Equation::ConfInterior : Equation::ConfExterior;
  ConformalMap map;
  map.nodes_ = &nodes;
  map.direction_ = direction;
  map.solution_ = densint::solve(p);
  map.layer_ = make_layer_density(nodes, map.solution_.trace, order);
  double total = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) total += map.layer_.values[m] * nodes.ds(m);
  map.integral_ = total;
  if (direction == MapDirection::Interior) {
    map.alpha_ = -std::imag(cauchy_raw(nodes, map.layer_.phi, 0.0, 0));
    map.capacity_ = std::numeric_limits<double>::quiet_NaN();
  } else {
    map.alpha_ = 0.0;
    map.capacity_ = std::exp(-total);
  }
  return map;
}

cplx ConformalMap::operator()(cplx z, const EvalPolicy& policy) const {
  EvalPolicy pol = policy;
  pol.order = layer_.order;
  const TargetPoint t = make_target(z, *nodes_, pol);
  const bool interior = direction_ == MapDirection::Interior;
  if (interior && t.side.side == Side::Exterior)
    throw DomainError("interior map evaluated outside the contour");
  if (!interior && t.side.side == Side::Interior)
    throw DomainError("exterior map evaluated inside the contour");
  cplx c;
  if (t.side.side == Side::OnCurve) {
    c = cauchy_boundary_limit(*nodes_, layer_.phi, layer_.phi_table, t.side.node,
                              interior ? Side::Interior : Side::Exterior);
  } else {
    c = cauchy_eval(*nodes_, layer_.phi, layer_.phi_table, t, 0);
  }
  if (interior) return z * std::exp(-c - cplx(0.0, alpha_));
  return z * std::exp(-c + integral_);
}

cplx ConformalMap::operator()(cplx z) const { return (*this)(z, EvalPolicy{}); }

cplx eval_interior_map(const ConformalMap& map, cplx z) {
  if (map.direction() != MapDirection::Interior)
    throw ValidationError("map was solved for the exterior");
  return map(z);
}

cplx eval_exterior_map(const ConformalMap& map, cplx z) {
  if (map.direction() != MapDirection::Exterior)
    throw ValidationError("map was solved for the interior");
  return map(z);
}

std::vector<MappedPoint> map_grid(const ConformalMap& map, const PolarGrid& grid) {
  if (grid.n_radial == 0 || grid.n_angular == 0) throw ValidationError("empty polar grid");
  const NodeTable& nodes = map.nodes();
  const cplx c = nodes.contour->reference_point();
  const std::size_t M = nodes.size();
  const std::size_t na = std::min(grid.n_angular, M);
  const bool interior = map.direction() == MapDirection::Interior;
  std::vector<MappedPoint> rows;
  rows.reserve(na * grid.n_radial);
  for (std::size_t a = 0; a < na; ++a) {
    const std::size_t m = a * M / na;
    const cplx edge = nodes.point()[m];
    for (std::size_t r = 1; r <= grid.n_radial; ++r) {
      cplx z;
      if (interior) {
        const double f = static_cast<double>(r) / static_cast<double>(grid.n_radial);
        z = r == grid.n_radial ? edge : c + f * (edge - c);
      } else {
        const double step = grid.n_radial > 1 ? (grid.outer_scale - 1.0) /
                                                    static_cast<double>(grid.n_radial - 1)
                                              : 0.0;
        z = r == 1 ? edge : c + (1.0 + step * static_cast<double>(r - 1)) * (edge - c);
      }
      rows.push_back({z, map(z)});
    }
  }
  return rows;
}

std::vector<MappedPoint> map_grid(const ConformalMap& map, const CartesianGrid& grid) {
  if (grid.nx < 2 || grid.ny < 2) throw ValidationError("cartesian grid needs nx, ny >= 2");
  const bool interior = map.direction() == MapDirection::Interior;
  std::vector<MappedPoint> rows;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double x = grid.x0 + (grid.x1 - grid.x0) * static_cast<double>(i) / (grid.nx - 1);
      const double y = grid.y0 + (grid.y1 - grid.y0) * static_cast<double>(j) / (grid.ny - 1);
      const cplx z{x, y};
      const SideClass s = classify_point(z, map.nodes());
      if ((interior && s.side == Side::Exterior) || (!interior && s.side == Side::Interior))
        continue;
      rows.push_back({z, map(z)});
    }
  }
  return rows;
}

void write_mapped_csv(const std::vector<MappedPoint>& rows, std::ostream& out) {
  out << "x,y,re_f,im_f\n";
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << r.z.real() << ',' << r.z.imag() << ',' << r.f.real() << ',' << r.f.imag() << '\n';
}

void export_mapped_grid(const ConformalMap& map, const std::vector<MappedPoint>& rows,
                        const std::string& csv_path, const std::string& json_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw ValidationError("cannot write " + csv_path);
  write_mapped_csv(rows, csv);
  nlohmann::json meta;
  meta["direction"] = map.direction() == MapDirection::Interior ? "interior" : "exterior";
  if (std::isnan(map.capacity())) {
    meta["capacity"] = nullptr;
  } else {
    meta["capacity"] = map.capacity();
  }
  meta["alpha"] = map.alpha();
  meta["M"] = map.nodes().size();
  meta["N"] = map.order();
  std::ofstream js(json_path);
  if (!js) throw ValidationError("cannot write " + json_path);
  js << meta.dump(2) << '\n';
}

}  // namespace densint
