#include "probdae/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace probdae {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  const auto& k = kernels::active();
  // ikj ordering: C's row i accumulates axpy contributions of B's rows.
  for (int i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int p = 0; p < a.cols(); ++p) {
      if (ai[p] != 0.0) k.axpy(ci, ai[p], b.row(p), static_cast<std::size_t>(b.cols()));
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum: shape mismatch");
  Matrix c = a;
  kernels::active().axpy(c.data(), 1.0, b.data(), b.size());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference: shape mismatch");
  Matrix c = a;
  kernels::active().axpy(c.data(), -1.0, b.data(), b.size());
  return c;
}

Matrix operator*(double alpha, const Matrix& a) {
  Matrix c = a;
  kernels::active().scal(c.data(), alpha, c.size());
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void multiply(const Matrix& a, const Vector& x, Vector& y) {
  require(static_cast<int>(x.size()) == a.cols(), "gemv: dimension mismatch");
  y.resize(a.rows());
  const auto& k = kernels::active();
  for (int i = 0; i < a.rows(); ++i)
    y[i] = k.dot(a.row(i), x.data(), x.size());
}

Vector multiply(const Matrix& a, const Vector& x) {
  Vector y;
  multiply(a, x, y);
  return y;
}

void multiply_transposed(const Matrix& a, const Vector& x, Vector& y) {
  require(static_cast<int>(x.size()) == a.rows(), "gemv^T: dimension mismatch");
  y.assign(a.cols(), 0.0);
  const auto& k = kernels::active();
  for (int i = 0; i < a.rows(); ++i)
    if (x[i] != 0.0) k.axpy(y.data(), x[i], a.row(i), static_cast<std::size_t>(a.cols()));
}

Vector multiply_transposed(const Matrix& a, const Vector& x) {
  Vector y;
  multiply_transposed(a, x, y);
  return y;
}

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double norm_two(const Vector& v) {
  return std::sqrt(kernels::active().dot(v.data(), v.data(), v.size()));
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double norm_one(const Matrix& a) {
  Vector colsum(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) colsum[j] += std::fabs(a(i, j));
  return a.cols() == 0 ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

double frobenius(const Matrix& a) {
  return std::sqrt(kernels::active().dot(a.data(), a.data(), a.size()));
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, max_abs(a));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::fabs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
  return true;
}

void axpy(Vector& y, double alpha, const Vector& x) {
  require(x.size() == y.size(), "axpy: length mismatch");
  kernels::active().axpy(y.data(), alpha, x.data(), x.size());
}

Vector add_scaled(const Vector& a, double alpha, const Vector& b) {
  require(a.size() == b.size(), "add_scaled: length mismatch");
  Vector out(a.size());
  kernels::active().add_scaled(out.data(), a.data(), alpha, b.data(), a.size());
  return out;
}

LuFactorization::LuFactorization(Matrix a, double rel_pivot_tol) : lu_(std::move(a)) {
  require(lu_.rows() == lu_.cols(), "LU: matrix must be square");
  const int n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  const double pivot_floor = rel_pivot_tol * std::max(max_abs(lu_), 1e-300);
  const auto& k = kernels::active();

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(lu_(col, col));
    for (int i = col + 1; i < n; ++i) {
      const double cand = std::fabs(lu_(i, col));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best <= pivot_floor)
      throw std::runtime_error("LU factorization: matrix is singular to working precision");
    if (piv != col) {
      std::swap_ranges(lu_.row(col), lu_.row(col) + n, lu_.row(piv));
      std::swap(perm_[col], perm_[piv]);
    }
    const double inv = 1.0 / lu_(col, col);
    for (int i = col + 1; i < n; ++i) {
      const double l = lu_(i, col) * inv;
      lu_(i, col) = l;
      if (l != 0.0)
        k.axpy(lu_.row(i) + col + 1, -l, lu_.row(col) + col + 1,
               static_cast<std::size_t>(n - col - 1));
    }
  }
}

void LuFactorization::solve_in_place(Vector& rhs) const {
  const int n = size();
  require(static_cast<int>(rhs.size()) == n, "LU solve: rhs length mismatch");
  thread_local Vector x;
  x.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  // Unit lower-triangular forward substitution.
  const auto& k = kernels::active();
  for (int i = 1; i < n; ++i)
    x[i] -= k.dot(lu_.row(i), x.data(), static_cast<std::size_t>(i));
  // Upper-triangular back substitution.
  for (int i = n - 1; i >= 0; --i) {
    const double tail =
        k.dot(lu_.row(i) + i + 1, x.data() + i + 1, static_cast<std::size_t>(n - i - 1));
    x[i] = (x[i] - tail) / lu_(i, i);
  }
  std::copy(x.begin(), x.end(), rhs.begin());
}

Vector LuFactorization::solve(const Vector& rhs) const {
  Vector x = rhs;
  solve_in_place(x);
  return x;
}

namespace {

struct HouseholderQr {
  Matrix v;            // reflector vectors in the lower trapezoid, column j in rows j..n-1
  std::vector<double> beta;
};

// QR of a tall matrix (rows >= cols) by Householder reflections.
HouseholderQr householder(Matrix a) {
  const int n = a.rows();
  const int m = a.cols();
  HouseholderQr qr;
  qr.beta.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double sigma = 0.0;
    for (int i = j; i < n; ++i) sigma += a(i, j) * a(i, j);
    const double norm = std::sqrt(sigma);
    if (norm == 0.0) continue;  // column already zero below the diagonal
    const double alpha = a(j, j) >= 0.0 ? -norm : norm;
    const double v0 = a(j, j) - alpha;
    qr.beta[j] = -v0 / alpha;  // = 2 / vᵀv after the v0 normalization below
    a(j, j) = alpha;
    // Store v normalized so v[j] = 1.
    for (int i = j + 1; i < n; ++i) a(i, j) /= v0;
    // Apply the reflector to the remaining columns.
    for (int col = j + 1; col < m; ++col) {
      double s = a(j, col);
      for (int i = j + 1; i < n; ++i) s += a(i, j) * a(i, col);
      s *= qr.beta[j];
      a(j, col) -= s;
      for (int i = j + 1; i < n; ++i) a(i, col) -= s * a(i, j);
    }
  }
  qr.v = std::move(a);
  return qr;
}

// x <- H_j x for the j-th stored reflector.
void apply_reflector(const HouseholderQr& qr, int j, Vector& x) {
  const int n = qr.v.rows();
  if (qr.beta[j] == 0.0) return;
  double s = x[j];
  for (int i = j + 1; i < n; ++i) s += qr.v(i, j) * x[i];
  s *= qr.beta[j];
  x[j] -= s;
  for (int i = j + 1; i < n; ++i) x[i] -= s * qr.v(i, j);
}

}  // namespace

Matrix nullspace_basis(const Matrix& b) {
  const int m = b.rows();
  const int n = b.cols();
  require(m < n, "nullspace_basis: need more columns than rows");
  const HouseholderQr qr = householder(transpose(b));

  Matrix z(n, n - m);
  Vector col(n);
  for (int c = m; c < n; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    col[c] = 1.0;
    // Q e_c with Q = H_0 H_1 ... H_{m-1}.
    for (int j = m - 1; j >= 0; --j) apply_reflector(qr, j, col);
    // Sign convention: largest-magnitude entry positive.
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(col[i]) > std::fabs(col[arg])) arg = i;
    const double s = col[arg] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) z(i, c - m) = s * col[i];
  }
  return z;
}

std::pair<double, double> singular_value_range(const Matrix& b) {
  const int m = b.rows();
  Matrix gram(m, m);
  const auto& k = kernels::active();
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      gram(i, j) = gram(j, i) = k.dot(b.row(i), b.row(j), static_cast<std::size_t>(b.cols()));
  const std::vector<double> eig = symmetric_eigenvalues(gram);
  const double lo = std::sqrt(std::max(0.0, eig.front()));
  const double hi = std::sqrt(std::max(0.0, eig.back()));
  return {lo, hi};
}

std::vector<double> symmetric_eigenvalues(const Matrix& s, Matrix* vectors) {
  require(s.rows() == s.cols(), "symmetric_eigenvalues: matrix must be square");
  const int n = s.rows();
  Matrix a = s;
  Matrix v;
  if (vectors != nullptr) v = Matrix::identity(n);

  auto offdiag = [&]() {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  const double scale = std::max(frobenius(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag() <= 1e-14 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - sn * aqi;
          a(q, i) = sn * api + c * aqi;
        }
        if (vectors != nullptr) {
          for (int i = 0; i < n; ++i) {
            const double vip = v(i, p), viq = v(i, q);
            v(i, p) = c * vip - sn * viq;
            v(i, q) = sn * vip + c * viq;
          }
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a(order[i], order[i]);
  if (vectors != nullptr) {
    *vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) (*vectors)(i, j) = v(i, order[j]);
  }
  return eig;
}

double spectral_norm(const Matrix& a) {
  const Matrix gram = transpose(a) * a;
  const std::vector<double> eig = symmetric_eigenvalues(gram);
  return std::sqrt(std::max(0.0, eig.back()));
}

}  // namespace probdae
