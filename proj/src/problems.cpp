#include "probdae/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace probdae {

SemiExplicitDAE fitzhugh_nagumo(double t_end) {
  SemiExplicitDAE p;
  p.name = "fitzhugh";
  p.n = 2;
  p.m = 1;
  p.A = Matrix(2, 2);
  p.A(0, 0) = -3.0;
  p.A(0, 1) = -3.0;
  p.A(1, 0) = 1.0 / 3.0;
  p.A(1, 1) = 1.0 / 15.0;
  p.B = Matrix(1, 2);
  p.B(0, 0) = 1.0;
  p.B(0, 1) = 1.0;
  p.f = [](double, const Vector& u, Vector& out) {
    out[0] = -u[0] * u[0] * u[0];
    out[1] = 1.0 / 15.0;
  };
  p.g = [](double t, Vector& out) { out[0] = std::sin(t); };
  p.g_dot = [](double t, Vector& out) { out[0] = std::cos(t); };
  p.u0 = {-1.0, 1.0};
  p.h_weight = {1.0, 1.0};
  p.t_end = t_end;
  return p;
}

SemiExplicitDAE constrained_heat(int grid_points) {
  if (grid_points < 10)
    throw std::invalid_argument("constrained_heat: need at least 10 grid points");
  const int n = grid_points;
  const double dx = 1.0 / (n + 1);
  const double inv_dx2 = 1.0 / (dx * dx);

  SemiExplicitDAE p;
  p.name = "heat";
  p.n = n;
  p.m = 1;

  // A = −Δ_h with homogeneous Dirichlet values eliminated.
  p.A = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    p.A(i, i) = 2.0 * inv_dx2;
    if (i > 0) p.A(i, i - 1) = -inv_dx2;
    if (i + 1 < n) p.A(i, i + 1) = -inv_dx2;
  }

  // Trapezoidal quadrature of ∫ u sin(πx) dx; boundary values vanish, so the
  // row reduces to Δx·sin(πx_i) at the interior nodes.
  p.B = Matrix(1, n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * dx;
    p.B(0, i) = dx * std::sin(std::numbers::pi * x);
  }

  p.f = [](double, const Vector& u, Vector& out) {
    kernels::active().hadamard_square(out.data(), u.data(), u.size());
  };
  p.g = [](double t, Vector& out) { out[0] = t; };
  p.g_dot = [](double, Vector& out) { out[0] = 1.0; };

  p.u0.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(2.0 * std::numbers::pi * (i + 1) * dx);
    p.u0[static_cast<std::size_t>(i)] = s * s * s;
  }
  p.h_weight.assign(static_cast<std::size_t>(n), dx);
  p.t_end = 0.1;
  return p;
}

Trajectory reference_solution(const SemiExplicitDAE& problem, const std::vector<double>& t_grid,
                              int refine) {
  if (t_grid.size() < 2)
    throw std::invalid_argument("reference_solution: need at least two grid times");
  if (refine < 1) throw std::invalid_argument("reference_solution: refine must be >= 1");
  const double tau_grid = t_grid[1] - t_grid[0];
  if (!(tau_grid > 0.0))
    throw std::invalid_argument("reference_solution: grid times must increase");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double spacing = t_grid[i] - t_grid[i - 1];
    if (std::fabs(spacing - tau_grid) > 1e-9 * tau_grid)
      throw std::invalid_argument("reference_solution: grid must be uniform");
  }
  if (std::fabs(t_grid.front()) > 1e-12)
    throw std::invalid_argument("reference_solution: grid must start at t = 0");

  const double tau_ref = tau_grid / refine;
  SemiExplicitDAE fine = problem;
  fine.t_end = t_grid.back();

  const bool symmetric = is_symmetric(problem.A);
  const SchemeId scheme = make_scheme(symmetric ? Method::exp2 : Method::midpoint);
  const Integrator integ(fine, scheme, tau_ref);
  const Trajectory dense = integ.integrate_deterministic();

  Trajectory out;
  out.times = t_grid;
  out.states.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    out.states.push_back(dense.states[i * static_cast<std::size_t>(refine)]);
  return out;
}

}  // namespace probdae
