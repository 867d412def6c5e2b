#include "probdae/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace probdae {

void SemiExplicitDAE::eval_f(double t, const Vector& u, Vector& out) const {
  out.assign(static_cast<std::size_t>(n), 0.0);
  if (f) f(t, u, out);
}

void SemiExplicitDAE::eval_g(double t, Vector& out) const {
  out.assign(static_cast<std::size_t>(m), 0.0);
  if (g) g(t, out);
}

void SemiExplicitDAE::eval_g_dot(double t, Vector& out) const {
  out.assign(static_cast<std::size_t>(m), 0.0);
  if (g_dot) g_dot(t, out);
}

Vector SemiExplicitDAE::g_at(double t) const {
  Vector out;
  eval_g(t, out);
  return out;
}

Vector SemiExplicitDAE::g_dot_at(double t) const {
  Vector out;
  eval_g_dot(t, out);
  return out;
}

double h_norm(const Vector& v, const Vector& weights) {
  if (v.size() != weights.size())
    throw std::invalid_argument("h_norm: vector and weight lengths differ");
  const double s = kernels::active().wdot(weights.data(), v.data(), v.data(), v.size());
  return std::sqrt(std::max(0.0, s));
}

double h_norm(const Vector& v, const SemiExplicitDAE& problem) {
  return h_norm(v, problem.h_weight);
}

bool check_consistency(const SemiExplicitDAE& problem, double tol) {
  Vector bu0 = multiply(problem.B, problem.u0);
  Vector g0 = problem.g_at(0.0);
  return kernels::active().max_abs_diff(bu0.data(), g0.data(), bu0.size()) <= tol;
}

bool check_consistency(const SemiExplicitDAE& problem) {
  return check_consistency(problem, problem.consistency_tol);
}

void check_dimensions(const SemiExplicitDAE& problem) {
  if (problem.n <= 0) throw std::invalid_argument("problem: n must be positive");
  if (problem.m <= 0 || problem.m >= problem.n)
    throw std::invalid_argument("problem: need 0 < m < n");
  if (problem.A.rows() != problem.n || problem.A.cols() != problem.n)
    throw std::invalid_argument("problem: A must be n×n");
  if (problem.B.rows() != problem.m || problem.B.cols() != problem.n)
    throw std::invalid_argument("problem: B must be m×n");
  if (static_cast<int>(problem.u0.size()) != problem.n)
    throw std::invalid_argument("problem: u0 must have length n");
  if (static_cast<int>(problem.h_weight.size()) != problem.n)
    throw std::invalid_argument("problem: h_weight must have length n");
  for (double w : problem.h_weight)
    if (!(w > 0.0)) throw std::invalid_argument("problem: h_weight entries must be positive");
  if (!(problem.t_end > 0.0)) throw std::invalid_argument("problem: t_end must be positive");
}

void finite_difference_jacobian(const SemiExplicitDAE& problem, double t,
                                const Vector& u, Matrix& out) {
  const int n = problem.n;
  out = Matrix(n, n);
  Vector base;
  problem.eval_f(t, u, base);
  Vector shifted = u;
  Vector fval;
  for (int j = 0; j < n; ++j) {
    const double h = 1e-7 * (1.0 + std::fabs(u[j]));
    shifted[j] = u[j] + h;
    problem.eval_f(t, shifted, fval);
    shifted[j] = u[j];
    const double inv = 1.0 / h;
    for (int i = 0; i < n; ++i) out(i, j) = (fval[i] - base[i]) * inv;
  }
}

void eval_f_jacobian(const SemiExplicitDAE& problem, double t, const Vector& u,
                     Matrix& out) {
  if (!problem.has_f()) {
    out = Matrix(problem.n, problem.n);
    return;
  }
  if (problem.f_jacobian) {
    problem.f_jacobian(t, u, out);
    return;
  }
  finite_difference_jacobian(problem, t, u, out);
}

double max_constraint_residual(const SemiExplicitDAE& problem, const Trajectory& trajectory) {
  double worst = 0.0;
  Vector bu, g;
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    multiply(problem.B, trajectory.states[i], bu);
    problem.eval_g(trajectory.times[i], g);
    worst = std::max(worst,
                     kernels::active().max_abs_diff(bu.data(), g.data(), bu.size()));
  }
  return worst;
}

}  // namespace probdae
