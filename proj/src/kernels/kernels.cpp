#include "probdae/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace probdae::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double wdot_scalar(const double* w, const double* a, const double* b,
                   std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void add_scaled_scalar(double* out, const double* a, double alpha,
                       const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

void hadamard_square_scalar(double* out, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void welford_update_scalar(double* mean, double* m2, const double* x,
                           double inv_count, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = x[i] - mean[i];
    mean[i] += delta * inv_count;
    m2[i] += delta * (x[i] - mean[i]);
  }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

constexpr Ops kScalarOps = {
    "scalar",         dot_scalar,
    wdot_scalar,      axpy_scalar,
    scal_scalar,      add_scaled_scalar,
    hadamard_square_scalar, welford_update_scalar,
    max_abs_diff_scalar,
};

const Ops* pick_default() {
  if (const char* env = std::getenv("PROBDAE_KERNELS")) {
    const std::string_view requested(env);
    if (requested == "scalar") return &kScalarOps;
    if (requested == "avx2" && avx2_supported()) return &avx2_ops();
    // Unknown or unavailable request falls through to auto selection.
  }
  if (avx2_supported()) return &avx2_ops();
  return &kScalarOps;
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& active() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (p == nullptr) {
    p = pick_default();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void force(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&kScalarOps, std::memory_order_release);
  } else if (name == "avx2") {
    if (!avx2_supported())
      throw std::invalid_argument("AVX2 kernels are not supported on this CPU");
    g_active.store(&avx2_ops(), std::memory_order_release);
  } else if (name == "auto") {
    g_active.store(pick_default(), std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel set: " + std::string(name));
  }
}

#ifndef PROBDAE_HAVE_AVX2_TU
bool avx2_supported() { return false; }
const Ops& avx2_ops() {
  throw std::runtime_error("built without AVX2 support");
}
#endif

}  // namespace probdae::kernels
