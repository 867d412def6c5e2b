#pragma once

#include <utility>

#include "probdae/problem.hpp"

namespace probdae {

/// Orthonormal basis of ker B as columns of an n×(n−m) matrix.
/// Throws when B is rank deficient ("constraint operator not inf–sup
/// stable") or the kernel is empty (m = n).
Matrix kernel_basis(const Matrix& b);

/// Reusable factorization of the stationary saddle matrix [K Bᵀ; B 0].
/// Every solve is residual-checked against
///   K x + Bᵀ μ = r1,  B x = r2,  residuals ≤ 1e-10·(1 + ‖r1‖ + ‖r2‖).
class SaddleSolver {
 public:
  SaddleSolver(Matrix k, Matrix b);

  void solve(const Vector& r1, const Vector& r2, Vector& x, Vector& mu) const;
  std::pair<Vector, Vector> solve(const Vector& r1, const Vector& r2) const;

  int n() const { return n_; }
  int m() const { return m_; }

 private:
  int n_ = 0;
  int m_ = 0;
  Matrix k_;
  Matrix b_;
  LuFactorization lu_;
};

/// One-shot convenience wrapper around SaddleSolver.
std::pair<Vector, Vector> solve_saddle(const Matrix& k, const Matrix& b,
                                       const Vector& r1, const Vector& r2);

/// Precomputed constrained-algebra data shared by all integrators:
/// the null-space basis, the projected operator Â = ZᵀAZ with its
/// factorization, and the stationary saddle factorization of [A Bᵀ; B 0].
/// Construction performs the problem validity checks (rank, consistency,
/// invertibility of Â); kernel ellipticity is diagnosed, not enforced,
/// since constructing the solution theory only needs a Gårding-type bound.
struct KernelDecomposition {
  Matrix Z;       ///< n×(n−m), orthonormal columns spanning ker B
  Matrix A_ker;   ///< ZᵀAZ
  Matrix ZtA;     ///< ZᵀA, reused by projections
  LuFactorization A_ker_lu;
  SaddleSolver saddle_A;  ///< [A Bᵀ; B 0]

  double b_sv_min = 0.0;
  double b_sv_max = 0.0;
  double lambda_min_sym_a_ker = 0.0;  ///< smallest eigenvalue of sym(Â)
  bool elliptic_on_kernel = false;
  bool a_symmetric = false;
  int n = 0;
  int m = 0;
};

KernelDecomposition decompose(const SemiExplicitDAE& problem);

/// Solves A x + Bᵀ ν = 0, B x = y; x is the A-harmonic representative of the
/// constraint data (Zᵀ A x = 0).
std::pair<Vector, Vector> b_right_inverse(const KernelDecomposition& decomp, const Vector& y);

/// ξ = Z Â⁻¹ ZᵀA h — the solution of A ξ + Bᵀν = A h, B ξ = 0. Idempotent;
/// fixes vectors already in ker B and annihilates the A-harmonic complement.
Vector project_noise_A(const KernelDecomposition& decomp, const Vector& h);
void project_noise_A(const KernelDecomposition& decomp, const Vector& h, Vector& out);

}  // namespace probdae
