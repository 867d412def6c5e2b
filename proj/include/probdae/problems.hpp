#pragma once

#include "probdae/integrators.hpp"
#include "probdae/problem.hpp"

namespace probdae {

/// Constrained FitzHugh–Nagumo system (n = 2, m = 1):
///   [V'; R'] + [−3 −3; 1/3 1/15][V; R] + [1; 1]λ = [−V³; 1/15],
///   V + R = sin(t),  V(0) = −1, R(0) = 1.
/// A is not symmetric and not positive definite on ker B.
SemiExplicitDAE fitzhugh_nagumo(double t_end = 10.0);

/// Semilinear heat equation on (0,1) with homogeneous Dirichlet conditions,
/// quadratic right-hand side u², and the integral-mean constraint
/// ∫ u(x,t) sin(πx) dx = g(t) = t. Second-order finite differences on
/// `grid_points` interior nodes; trapezoidal quadrature row; H-weights Δx.
/// u0(x) = sin(2πx)³, T = 0.1.
SemiExplicitDAE constrained_heat(int grid_points = 100);

/// Fine deterministic solution sampled on `t_grid` (uniform spacing τ):
/// exp2 for symmetric A, midpoint otherwise, at τ_ref = τ / refine.
Trajectory reference_solution(const SemiExplicitDAE& problem, const std::vector<double>& t_grid,
                              int refine = 20);

}  // namespace probdae
