#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "probdae/linalg.hpp"

using namespace probdae;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

Matrix random_spd(std::mt19937_64& rng, int n) {
  const Matrix g = random_matrix(rng, n, n);
  Matrix s = transpose(g) * g;
  for (int i = 0; i < n; ++i) s(i, i) += 0.5;
  return s;
}

Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("matrix product and gemv") {
  Matrix a(2, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
  Matrix b(3, 2);
  b(0, 0) = 7; b(0, 1) = 8;
  b(1, 0) = 9; b(1, 1) = 10;
  b(2, 0) = 11; b(2, 1) = 12;
  const Matrix c = a * b;
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);

  const Vector y = multiply(a, {1.0, 1.0, 1.0});
  CHECK(y[0] == 6);
  CHECK(y[1] == 15);
  const Vector z = multiply_transposed(a, {1.0, 1.0});
  CHECK(z[0] == 5);
  CHECK(z[1] == 7);
  CHECK(z[2] == 9);
}

TEST_CASE("LU solves random systems to high accuracy") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 5, 20, 60}) {
    const Matrix a = random_matrix(rng, n, n);
    const Vector x_true = random_vector(rng, n);
    const Vector b = multiply(a, x_true);
    const LuFactorization lu(a);
    const Vector x = lu.solve(b);
    const Vector residual = add_scaled(multiply(a, x), -1.0, b);
    CHECK(norm_inf(residual) < 1e-10 * (1.0 + norm_inf(b)));
  }
}

TEST_CASE("LU rejects singular matrices") {
  Matrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2;
  a(1, 0) = 2; a(1, 1) = 4;
  CHECK_THROWS_AS(LuFactorization{a}, std::runtime_error);
}

TEST_CASE("nullspace basis is orthonormal and annihilated by B") {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair{1, 4}, {2, 6}, {1, 100}, {3, 31}}) {
    const Matrix b = random_matrix(rng, m, n);
    const Matrix z = nullspace_basis(b);
    REQUIRE(z.rows() == n);
    REQUIRE(z.cols() == n - m);

    const Matrix bz = b * z;
    CHECK(max_abs(bz) < 1e-12 * std::max(1.0, max_abs(b)));

    const Matrix gram = transpose(z) * z;
    const Matrix eye = Matrix::identity(n - m);
    CHECK(max_abs(gram - eye) < 1e-12);
  }
}

TEST_CASE("nullspace sign convention is deterministic") {
  Matrix b(1, 2);
  b(0, 0) = 1;
  b(0, 1) = 1;
  const Matrix z = nullspace_basis(b);
  // (1, -1)/sqrt(2) with the largest-magnitude entry positive.
  CHECK(z(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(z(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("singular value range matches known example") {
  // B = [[3, 0], [0, 4]] padded to 2x3: singular values 3, 4.
  Matrix b(2, 3);
  b(0, 0) = 3;
  b(1, 1) = 4;
  const auto [lo, hi] = singular_value_range(b);
  CHECK(lo == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("jacobi eigenvalues: diagonal and known 2x2") {
  Matrix d(3, 3);
  d(0, 0) = 3; d(1, 1) = -1; d(2, 2) = 2;
  const auto eig = symmetric_eigenvalues(d);
  CHECK(eig[0] == doctest::Approx(-1.0));
  CHECK(eig[1] == doctest::Approx(2.0));
  CHECK(eig[2] == doctest::Approx(3.0));

  Matrix s(2, 2);
  s(0, 0) = 2; s(0, 1) = 1; s(1, 0) = 1; s(1, 1) = 2;
  const auto e2 = symmetric_eigenvalues(s);
  CHECK(e2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e2[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("jacobi eigen decomposition reconstructs the matrix") {
  std::mt19937_64 rng(5);
  const int n = 12;
  Matrix s = random_spd(rng, n);
  Matrix v;
  const auto eig = symmetric_eigenvalues(s, &v);
  // s ≈ V diag(eig) Vᵀ
  Matrix lambda(n, n);
  for (int i = 0; i < n; ++i) lambda(i, i) = eig[i];
  const Matrix rebuilt = v * lambda * transpose(v);
  CHECK(max_abs(rebuilt - s) < 1e-10 * std::max(1.0, max_abs(s)));
  for (int i = 0; i < n; ++i) CHECK(eig[i] > 0.0);
}

TEST_CASE("spectral norm of a diagonal matrix") {
  Matrix d(2, 2);
  d(0, 0) = -7;
  d(1, 1) = 5;
  CHECK(spectral_norm(d) == doctest::Approx(7.0).epsilon(1e-12));
}
