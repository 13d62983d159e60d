#pragma once

#include <cstddef>
#include <vector>

#include "densint/gmres.hpp"
#include "densint/laplace.hpp"
#include "densint/nodes.hpp"

namespace densint {

enum class Equation { RobinSingle, RobinHyper, ConfInterior, ConfExterior };

struct BieProblem {
  const NodeTable* nodes = nullptr;
  Equation equation = Equation::RobinSingle;
  // Robin data f = du/dnu + u at the nodes; ignored by the conformal
  // equations, whose right-hand side is -log|x|.
  std::vector<double> data;
  int order = 3;
  GmresOptions gmres;
  BranchCut cut = BranchCut::star_ray(0.0);
};

struct BieSolution {
  std::vector<double> trace;
  std::size_t iterations = 0;
  std::vector<double> residuals;
};

// (I/2 + K + S) v = (I/2 + K) f for v = du/dnu.
BieSolution solve_robin_single(const BieProblem& problem);

// (-I/2 + K' + T) u = (-I/2 + K') f for the trace u.
BieSolution solve_robin_hyper(const BieProblem& problem);

// -phi/2 + K phi = -log|x|.
BieSolution solve_conformal_interior(const BieProblem& problem);

// phi/2 + K phi + int phi ds = -log|x|.
BieSolution solve_conformal_exterior(const BieProblem& problem);

BieSolution solve(const BieProblem& problem);

// Green's representation u = S v - D u at an interior point, given the
// Dirichlet trace u and Neumann trace v as layer densities.
double greens_field(const NodeTable& nodes, const LayerDensity& u_trace,
                    const LayerDensity& v_trace, const TargetPoint& target, const BranchCut& cut);

}  // namespace densint
