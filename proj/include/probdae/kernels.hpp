#pragma once

#include <cstddef>
#include <string_view>

namespace probdae::kernels {

/// Function table for the vector primitives underneath the dense linear
/// algebra and the ensemble statistics. There is one scalar reference
/// implementation plus SIMD variants; the active table is chosen once at
/// startup from CPU features and can be overridden with the environment
/// variable PROBDAE_KERNELS=scalar|avx2 (or force()) for equivalence tests.
struct Ops {
  const char* name;

  /// sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i w[i]*a[i]*b[i]
  double (*wdot)(const double* w, const double* a, const double* b,
                 std::size_t n);
  /// y += alpha * x
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
  /// x *= alpha
  void (*scal)(double* x, double alpha, std::size_t n);
  /// out = a + alpha * b  (out may alias a)
  void (*add_scaled)(double* out, const double* a, double alpha,
                     const double* b, std::size_t n);
  /// out = x .* x
  void (*hadamard_square)(double* out, const double* x, std::size_t n);
  /// Streaming moment update for the k-th sample (inv_count = 1/k):
  ///   delta = x - mean; mean += delta*inv_count; m2 += delta*(x - mean)
  void (*welford_update)(double* mean, double* m2, const double* x,
                         double inv_count, std::size_t n);
  /// max_i |a[i] - b[i]|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const Ops& scalar_ops();

bool avx2_supported();
/// Valid only when avx2_supported() is true.
const Ops& avx2_ops();

/// The table in use. Resolved once; stable for the process lifetime unless
/// force() is called (intended for tests, not concurrent with compute).
const Ops& active();

/// name: "scalar", "avx2" or "auto". Throws std::invalid_argument otherwise.
void force(std::string_view name);

}  // namespace probdae::kernels
