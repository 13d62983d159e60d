#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "densint/cauchy.hpp"
#include "densint/laplace.hpp"
#include "densint/nodes.hpp"
#include "densint/solver.hpp"

namespace densint {

enum class MapDirection { Interior, Exterior };

class ConformalMap {
 public:
  // Solves the double layer equation and precomputes the normalization.
  static ConformalMap solve(const NodeTable& nodes, MapDirection direction, int order,
                            const GmresOptions& gmres = {});

  MapDirection direction() const { return direction_; }
  // Interior: v_i(0) = -Im C phi(0). Exterior: 0.
  double alpha() const { return alpha_; }
  // Exterior: exp(-int phi ds). Interior: NaN.
  double capacity() const { return capacity_; }
  double density_integral() const { return integral_; }
  const LayerDensity& density() const { return layer_; }
  const BieSolution& solution() const { return solution_; }
  const NodeTable& nodes() const { return *nodes_; }
  int order() const { return layer_.order; }

  // f at z on the map's closed side; on-curve nodes use the one-sided
  // Hilbert limit. Throws DomainError on the wrong side.
  cplx operator()(cplx z, const EvalPolicy& policy) const;
  cplx operator()(cplx z) const;

 private:
  ConformalMap() = default;
  const NodeTable* nodes_ = nullptr;
  MapDirection direction_ = MapDirection::Interior;
  BieSolution solution_;
  LayerDensity layer_;
  double alpha_ = 0.0;
  double capacity_ = 0.0;
  double integral_ = 0.0;
};

cplx eval_interior_map(const ConformalMap& map, cplx z);
cplx eval_exterior_map(const ConformalMap& map, cplx z);

// Polar grid z = c + s (gamma(t_m) - c) about the contour's reference
// point c, for n_radial values of s and n_angular node directions. Interior
// maps use s in (0, 1]; exterior maps use s in [1, outer_scale]. s = 1 hits
// the nodes exactly, so boundary rows go through the on-curve path.
struct PolarGrid {
  std::size_t n_radial = 20;
  std::size_t n_angular = 64;
  double outer_scale = 2.0;
};

// Cartesian box; points on the wrong side are skipped.
struct CartesianGrid {
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  std::size_t nx = 50, ny = 50;
};

struct MappedPoint {
  cplx z;
  cplx f;
};

std::vector<MappedPoint> map_grid(const ConformalMap& map, const PolarGrid& grid);
std::vector<MappedPoint> map_grid(const ConformalMap& map, const CartesianGrid& grid);

// CSV with header "x,y,re_f,im_f" plus a JSON sidecar
// {direction, capacity, alpha, M, N}.
void export_mapped_grid(const ConformalMap& map, const std::vector<MappedPoint>& rows,
                        const std::string& csv_path, const std::string& json_path);
void write_mapped_csv(const std::vector<MappedPoint>& rows, std::ostream& out);

}  // namespace densint
