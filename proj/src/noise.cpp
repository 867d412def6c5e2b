#include "probdae/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace probdae {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t absorb(std::uint64_t state, std::uint64_t value) {
  return mix64(state ^ (value * kGolden + kGolden));
}

// Uniform in (0,1): 53 mantissa bits, offset by half an ulp so log() is safe.
inline double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t step, std::uint64_t index) {
  std::uint64_t h = mix64(seed + kGolden);
  h = absorb(h, stream);
  h = absorb(h, step);
  h = absorb(h, index);
  const double u1 = to_unit(mix64(h + kGolden));
  const double u2 = to_unit(mix64(h + 2 * kGolden));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

void sample_perturbation(const NoiseSpec& spec, int dim, double tau,
                         std::int64_t step_index, std::int64_t trajectory_index,
                         Vector& out) {
  if (!(tau > 0.0)) throw std::invalid_argument("sample_perturbation: tau must be positive");
  if (spec.sigma < 0.0) throw std::invalid_argument("sample_perturbation: sigma must be >= 0");
  if (!(spec.p > 0.0)) throw std::invalid_argument("sample_perturbation: p must be positive");

  out.assign(static_cast<std::size_t>(dim), 0.0);
  if (spec.sigma == 0.0) return;

  const double scale = spec.sigma * std::pow(tau, spec.p + 0.5);
  const auto stream = static_cast<std::uint64_t>(trajectory_index);
  const auto step = static_cast<std::uint64_t>(step_index);
  for (int i = 0; i < dim; ++i)
    out[static_cast<std::size_t>(i)] =
        scale * counter_normal(spec.seed, stream, step, static_cast<std::uint64_t>(i));
}

Vector sample_perturbation(const NoiseSpec& spec, int dim, double tau,
                           std::int64_t step_index, std::int64_t trajectory_index) {
  Vector out;
  sample_perturbation(spec, dim, tau, step_index, trajectory_index, out);
  return out;
}

}  // namespace probdae
