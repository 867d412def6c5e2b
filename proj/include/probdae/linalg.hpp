#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "probdae/kernels.hpp"

namespace probdae {

using Vector = std::vector<double>;

/// Dense row-major matrix. Rows are contiguous so the hot paths (gemv,
/// factorizations) run on the kernel primitives.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n) {
    Matrix eye(n, n);
    for (int i = 0; i < n; ++i) eye(i, i) = 1.0;
    return eye;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool empty() const { return data_.empty(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double alpha, const Matrix& a);
Matrix transpose(const Matrix& a);

/// y = A x
void multiply(const Matrix& a, const Vector& x, Vector& y);
Vector multiply(const Matrix& a, const Vector& x);
/// y = Aᵀ x
void multiply_transposed(const Matrix& a, const Vector& x, Vector& y);
Vector multiply_transposed(const Matrix& a, const Vector& x);

double norm_inf(const Vector& v);
double norm_two(const Vector& v);
double max_abs(const Matrix& a);
double norm_one(const Matrix& a);  // max column sum
double frobenius(const Matrix& a);
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);

void axpy(Vector& y, double alpha, const Vector& x);
Vector add_scaled(const Vector& a, double alpha, const Vector& b);

/// LU factorization with partial pivoting of a square matrix.
/// Throws std::runtime_error when a pivot falls below the relative threshold.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a, double rel_pivot_tol = 1e-14);

  int size() const { return static_cast<int>(perm_.size()); }
  void solve_in_place(Vector& rhs) const;
  Vector solve(const Vector& rhs) const;

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

/// Columns form an orthonormal basis of ker(b); deterministic up to the sign
/// convention (largest-magnitude entry of each column made positive).
/// Requires rows < cols; rank handling is the caller's concern.
Matrix nullspace_basis(const Matrix& b);

/// (smallest, largest) singular value of a wide matrix, via the eigenvalues
/// of B Bᵀ. Intended for small row counts.
std::pair<double, double> singular_value_range(const Matrix& b);

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, ascending.
/// When `vectors` is non-null it receives the orthonormal eigenvectors as
/// columns, in the same order.
std::vector<double> symmetric_eigenvalues(const Matrix& s, Matrix* vectors = nullptr);

double spectral_norm(const Matrix& a);

}  // namespace probdae
