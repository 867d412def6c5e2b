#include "probdae/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace probdae {

namespace {

bool all_finite(const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i])) return false;
  return true;
}

// Degree-13 Padé coefficients (Higham's scaling-and-squaring method).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("expm: non-finite entries");
  const int n = m.rows();

  int squarings = 0;
  const double nrm = norm_one(m);
  if (nrm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  }
  Matrix a = std::ldexp(1.0, -squarings) * m;

  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix eye = Matrix::identity(n);

  Matrix w = kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2;
  w = a6 * w;
  w = w + kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * eye;
  const Matrix u = a * w;

  Matrix v = kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2;
  v = a6 * v;
  v = v + kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * eye;

  // Solve (V − U) X = (V + U) column by column.
  const Matrix lhs = v - u;
  const Matrix rhs = v + u;
  LuFactorization lu(lhs);
  Matrix x(n, n);
  Vector col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = rhs(i, j);
    lu.solve_in_place(col);
    for (int i = 0; i < n; ++i) x(i, j) = col[i];
  }

  for (int s = 0; s < squarings; ++s) x = x * x;
  if (!all_finite(x)) throw std::runtime_error("expm: non-finite result");
  return x;
}

double phi_scalar(int k, double z) {
  switch (k) {
    case 0:
      return std::exp(z);
    case 1:
      if (std::fabs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
      return std::expm1(z) / z;
    case 2:
      if (std::fabs(z) < 1e-3)
        return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0;
      return (std::expm1(z) - z) / (z * z);
    default:
      throw std::invalid_argument("phi_scalar: k must be 0, 1 or 2");
  }
}

PhiSet build_phi(const Matrix& a_ker, double tau) {
  if (a_ker.rows() != a_ker.cols())
    throw std::invalid_argument("build_phi: matrix must be square");
  if (!(tau > 0.0)) throw std::invalid_argument("build_phi: tau must be positive");
  if (!all_finite(a_ker)) throw std::invalid_argument("build_phi: non-finite entries");

  const int k = a_ker.rows();
  Matrix aug(3 * k, 3 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) aug(i, j) = -tau * a_ker(i, j);
    aug(i, k + i) = 1.0;
    aug(k + i, 2 * k + i) = 1.0;
  }
  const Matrix e = expm(aug);

  PhiSet set;
  set.tau = tau;
  set.phi0 = Matrix(k, k);
  set.phi1 = Matrix(k, k);
  set.phi2 = Matrix(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      set.phi0(i, j) = e(i, j);
      set.phi1(i, j) = e(i, k + j);
      set.phi2(i, j) = e(i, 2 * k + j);
    }

  const double residual = phi_recursion_residual(a_ker, set);
  const double budget = 1e-10 * std::max(1.0, tau * norm_one(a_ker));
  if (!(residual <= budget))
    throw std::runtime_error("build_phi: recursion residual " + std::to_string(residual) +
                             " exceeds " + std::to_string(budget));
  return set;
}

double phi_recursion_residual(const Matrix& a_ker, const PhiSet& set) {
  const int k = a_ker.rows();
  const Matrix z = -set.tau * a_ker;
  // z·φ₁ − (φ₀ − I) and z·φ₂ − (φ₁ − I), with φ₀(0) = φ₁(0) = 1.
  Matrix r1 = z * set.phi1 - set.phi0;
  Matrix r2 = z * set.phi2 - set.phi1;
  for (int i = 0; i < k; ++i) {
    r1(i, i) += 1.0;
    r2(i, i) += 1.0;
  }
  return std::max(max_abs(r1), max_abs(r2));
}

}  // namespace probdae
