#pragma once

#include <functional>
#include <string>

#include "probdae/linalg.hpp"

namespace probdae {

/// Semilinear right-hand side f(t, u). Output-parameter form keeps the
/// ensemble inner loops free of allocations.
using RhsFn = std::function<void(double t, const Vector& u, Vector& out)>;
using RhsJacobianFn = std::function<void(double t, const Vector& u, Matrix& out)>;
using ConstraintFn = std::function<void(double t, Vector& out)>;

/// Finite-dimensional semi-explicit DAE of index 2:
///
///   u' + A u + Bᵀ λ = f(t, u),      B u = g(t),      u(0) = u0,
///
/// with B of full row rank and A invertible on ker B. The discrete H-inner
/// product is a weighted Euclidean product with per-problem weights
/// (all ones for ODE systems, grid spacing for discretized PDAEs).
struct SemiExplicitDAE {
  int n = 0;  ///< dimension of the differential unknown
  int m = 0;  ///< number of constraints, m < n
  Matrix A;   ///< n×n differential operator
  Matrix B;   ///< m×n constraint operator, full row rank
  RhsFn f;                    ///< null means f ≡ 0
  RhsJacobianFn f_jacobian;   ///< null means finite differences
  ConstraintFn g;             ///< null means g ≡ 0
  ConstraintFn g_dot;         ///< null means g' ≡ 0
  Vector u0;
  Vector h_weight;            ///< n positive weights of the H-inner product
  double t_end = 1.0;
  double consistency_tol = 1e-10;
  std::string name = "custom";

  void eval_f(double t, const Vector& u, Vector& out) const;
  void eval_g(double t, Vector& out) const;
  void eval_g_dot(double t, Vector& out) const;
  Vector g_at(double t) const;
  Vector g_dot_at(double t) const;
  bool has_f() const { return static_cast<bool>(f); }
};

/// sqrt(Σ_i w_i v_i²). Zero iff v = 0. Throws on length mismatch.
double h_norm(const Vector& v, const Vector& weights);
double h_norm(const Vector& v, const SemiExplicitDAE& problem);

/// True iff ‖B u0 − g(0)‖_∞ ≤ tol.
bool check_consistency(const SemiExplicitDAE& problem, double tol);
bool check_consistency(const SemiExplicitDAE& problem);

/// Shape and positivity checks on the stored data (not the spectral ones;
/// those happen when the kernel decomposition is built).
void check_dimensions(const SemiExplicitDAE& problem);

/// Forward-difference Jacobian of f with step 1e-7·(1+|u_i|); used by the
/// implicit solvers when no analytic Jacobian is supplied.
void finite_difference_jacobian(const SemiExplicitDAE& problem, double t,
                                const Vector& u, Matrix& out);
void eval_f_jacobian(const SemiExplicitDAE& problem, double t, const Vector& u,
                     Matrix& out);

/// Discrete solution path on the uniform grid t^n = n·τ.
struct Trajectory {
  std::vector<double> times;           ///< t^0 … t^N
  std::vector<Vector> states;          ///< U^0 … U^N
  std::vector<Vector> multipliers;     ///< λ^1 … λ^N when available, else empty

  int steps() const { return static_cast<int>(times.size()) - 1; }
};

/// max_n ‖B U^n − g(t^n)‖_∞ over the whole path.
double max_constraint_residual(const SemiExplicitDAE& problem, const Trajectory& trajectory);

}  // namespace probdae
