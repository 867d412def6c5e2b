// AVX2/FMA variants of the vector primitives. Compiled with -mavx2 -mfma in a
// dedicated translation unit; only reached after the runtime CPU check.

#include "probdae/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace probdae::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double wdot_avx2(const double* w, const double* a, const double* b,
                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    acc = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double* x, double alpha, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void add_scaled_avx2(double* out, const double* a, double alpha,
                     const double* b, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + i),
                                      _mm256_loadu_pd(a + i));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

void hadamard_square_avx2(double* out, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) out[i] = x[i] * x[i];
}

void welford_update_avx2(double* mean, double* m2, const double* x,
                         double inv_count, std::size_t n) {
  const __m256d vinv = _mm256_set1_pd(inv_count);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vmean = _mm256_loadu_pd(mean + i);
    const __m256d delta = _mm256_sub_pd(vx, vmean);
    vmean = _mm256_fmadd_pd(delta, vinv, vmean);
    __m256d vm2 = _mm256_loadu_pd(m2 + i);
    vm2 = _mm256_fmadd_pd(delta, _mm256_sub_pd(vx, vmean), vm2);
    _mm256_storeu_pd(mean + i, vmean);
    _mm256_storeu_pd(m2 + i, vm2);
  }
  for (; i < n; ++i) {
    const double delta = x[i] - mean[i];
    mean[i] += delta * inv_count;
    m2[i] += delta * (x[i] - mean[i]);
  }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d absmask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vmax = _mm256_max_pd(vmax, _mm256_and_pd(absmask, d));
  }
  __m128d lo = _mm256_castpd256_pd128(vmax);
  __m128d hi = _mm256_extractf128_pd(vmax, 1);
  lo = _mm_max_pd(lo, hi);
  double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

constexpr Ops kAvx2Ops = {
    "avx2",         dot_avx2,
    wdot_avx2,      axpy_avx2,
    scal_avx2,      add_scaled_avx2,
    hadamard_square_avx2, welford_update_avx2,
    max_abs_diff_avx2,
};

}  // namespace

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& avx2_ops() { return kAvx2Ops; }

}  // namespace probdae::kernels
