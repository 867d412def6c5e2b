#include "probdae/saddle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace probdae {

namespace {

Matrix assemble_saddle(const Matrix& k, const Matrix& b) {
  const int n = k.rows();
  const int m = b.rows();
  Matrix s(n + m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = k(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      s(n + i, j) = b(i, j);
      s(j, n + i) = b(i, j);
    }
  return s;
}

Matrix projected_operator(const Matrix& zta, const Matrix& z) {
  return zta * z;
}

}  // namespace

Matrix kernel_basis(const Matrix& b) {
  if (b.rows() >= b.cols())
    throw std::invalid_argument("kernel_basis: empty kernel (m >= n)");
  const auto [sv_min, sv_max] = singular_value_range(b);
  if (!(sv_min > 1e-10 * sv_max))
    throw std::invalid_argument("constraint operator not inf–sup stable");
  return nullspace_basis(b);
}

SaddleSolver::SaddleSolver(Matrix k, Matrix b)
    : n_(k.rows()), m_(b.rows()), k_(std::move(k)), b_(std::move(b)),
      lu_(assemble_saddle(k_, b_)) {
  if (k_.rows() != k_.cols() || b_.cols() != n_)
    throw std::invalid_argument("SaddleSolver: shape mismatch between K and B");
}

void SaddleSolver::solve(const Vector& r1, const Vector& r2, Vector& x, Vector& mu) const {
  if (static_cast<int>(r1.size()) != n_ || static_cast<int>(r2.size()) != m_)
    throw std::invalid_argument("SaddleSolver: right-hand side length mismatch");

  thread_local Vector rhs;
  rhs.resize(static_cast<std::size_t>(n_ + m_));
  std::copy(r1.begin(), r1.end(), rhs.begin());
  std::copy(r2.begin(), r2.end(), rhs.begin() + n_);
  lu_.solve_in_place(rhs);

  x.assign(rhs.begin(), rhs.begin() + n_);
  mu.assign(rhs.begin() + n_, rhs.end());

  // K x + Bᵀ mu − r1 and B x − r2 against the stated tolerance.
  const double budget = 1e-10 * (1.0 + norm_two(r1) + norm_two(r2));
  thread_local Vector res;
  multiply(k_, x, res);
  const auto& kr = kernels::active();
  for (int i = 0; i < m_; ++i)
    kr.axpy(res.data(), mu[i], b_.row(i), static_cast<std::size_t>(n_));
  kr.axpy(res.data(), -1.0, r1.data(), static_cast<std::size_t>(n_));
  double worst = norm_inf(res);
  multiply(b_, x, res);
  kr.axpy(res.data(), -1.0, r2.data(), static_cast<std::size_t>(m_));
  worst = std::max(worst, norm_inf(res));
  if (!(worst <= budget))
    throw std::runtime_error("saddle solve: residual " + std::to_string(worst) +
                             " exceeds tolerance " + std::to_string(budget));
}

std::pair<Vector, Vector> SaddleSolver::solve(const Vector& r1, const Vector& r2) const {
  Vector x, mu;
  solve(r1, r2, x, mu);
  return {std::move(x), std::move(mu)};
}

std::pair<Vector, Vector> solve_saddle(const Matrix& k, const Matrix& b,
                                       const Vector& r1, const Vector& r2) {
  return SaddleSolver(k, b).solve(r1, r2);
}

KernelDecomposition decompose(const SemiExplicitDAE& problem) {
  check_dimensions(problem);
  if (!check_consistency(problem))
    throw std::invalid_argument(
        "problem: initial value is inconsistent with the constraint (‖B u0 − g(0)‖ > tol)");

  const auto [sv_min, sv_max] = singular_value_range(problem.B);
  if (!(sv_min > 1e-10 * sv_max))
    throw std::invalid_argument("constraint operator not inf–sup stable");

  Matrix z = nullspace_basis(problem.B);
  Matrix zta = transpose(z) * problem.A;
  Matrix a_ker = projected_operator(zta, z);

  Matrix sym(a_ker.rows(), a_ker.cols());
  for (int i = 0; i < a_ker.rows(); ++i)
    for (int j = 0; j < a_ker.cols(); ++j)
      sym(i, j) = 0.5 * (a_ker(i, j) + a_ker(j, i));
  const double lambda_min = symmetric_eigenvalues(sym).front();

  LuFactorization a_ker_lu = [&] {
    try {
      return LuFactorization(a_ker);
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("problem: A is singular on ker B");
    }
  }();

  SaddleSolver saddle_a(problem.A, problem.B);

  KernelDecomposition d{std::move(z),       std::move(a_ker), std::move(zta),
                        std::move(a_ker_lu), std::move(saddle_a)};
  d.b_sv_min = sv_min;
  d.b_sv_max = sv_max;
  d.lambda_min_sym_a_ker = lambda_min;
  d.elliptic_on_kernel = lambda_min > 0.0;
  d.a_symmetric = is_symmetric(problem.A);
  d.n = problem.n;
  d.m = problem.m;
  return d;
}

std::pair<Vector, Vector> b_right_inverse(const KernelDecomposition& decomp, const Vector& y) {
  const Vector zero(static_cast<std::size_t>(decomp.n), 0.0);
  return decomp.saddle_A.solve(zero, y);
}

void project_noise_A(const KernelDecomposition& decomp, const Vector& h, Vector& out) {
  thread_local Vector coeff;
  multiply(decomp.ZtA, h, coeff);
  decomp.A_ker_lu.solve_in_place(coeff);
  multiply(decomp.Z, coeff, out);
}

Vector project_noise_A(const KernelDecomposition& decomp, const Vector& h) {
  Vector out;
  project_noise_A(decomp, h, out);
  return out;
}

}  // namespace probdae
