#pragma once

#include <cstdint>

#include "probdae/linalg.hpp"

namespace probdae {

/// Parameters of the per-step Gaussian perturbation ξ^n(τ) = σ τ^{p+1/2} ξ̃,
/// with ξ̃ having i.i.d. standard normal components. σ = 0 reproduces the
/// deterministic scheme exactly; p is the noise order in
/// E‖ξ^n(t)‖² ≤ C t^{2p+1}.
struct NoiseSpec {
  double sigma = 0.0;
  double p = 1.0;
  std::uint64_t seed = 0;
};

/// One standard normal draw as a pure function of its indices; independent of
/// evaluation order, so parallel trajectory execution is reproducible.
/// `stream` separates independent substreams (trajectory index; a salted
/// stream is used for the constraint-perturbation demo).
double counter_normal(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t step, std::uint64_t index);

/// Fills `out` (resized to dim) with σ τ^{p+1/2} ξ̃. σ = 0 writes exact zeros
/// without touching the generator.
void sample_perturbation(const NoiseSpec& spec, int dim, double tau,
                         std::int64_t step_index, std::int64_t trajectory_index,
                         Vector& out);
Vector sample_perturbation(const NoiseSpec& spec, int dim, double tau,
                           std::int64_t step_index, std::int64_t trajectory_index);

}  // namespace probdae
