#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "probdae/ensemble.hpp"

namespace probdae {

/// Step-halving error indicator: Eⁿ = uⁿ_{τ,0} − u^{2n}_{τ/2,0}, the
/// componentwise difference of the two deterministic runs at the same
/// physical times. E⁰ = 0.
std::vector<Vector> error_indicator(const SemiExplicitDAE& problem, SchemeId scheme, double tau);

/// Bhattacharyya distance between two univariate Gaussians:
///   d = ¼ (μ₁−μ₂)²/(v₁+v₂) + ¼ ln(¼(v₁/v₂ + v₂/v₁ + 2)).
/// Symmetric, non-negative, zero iff both pairs coincide. Variances must be
/// positive (callers floor degenerate components).
double bhattacharyya(double mu1, double var1, double mu2, double var2);

/// Components of variance below this are floored before the distance.
inline constexpr double kVarianceFloor = 1e-30;

struct CalibrationOptions {
  std::uint64_t seed = 0;  ///< common random numbers across σ evaluations
  int workers = 1;
  double relative_tol = 1e-2;                    ///< golden-section stop on σ
  std::vector<Vector> indicator_override = {};   ///< test hook: supplied Eⁿ
};

/// −log π(σ) = Σₙ Σᵢ d(N(mean, var), N(uⁿ_{τ,0}, (Eⁿ)²)) for an ensemble of M
/// realizations at σ with fixed seeds. Deterministic in σ.
double neg_log_pi(const SemiExplicitDAE& problem, SchemeId scheme, double tau, double sigma,
                  int realizations, const std::vector<Vector>& indicators,
                  const CalibrationOptions& options = {});

struct CalibrationReport {
  double tau = 0.0;
  std::vector<Vector> indicators;                       ///< Eⁿ
  std::vector<std::pair<double, double>> evaluations;   ///< (σ, −log π(σ))
  double sigma_star = 0.0;
  double objective_star = 0.0;
  bool at_boundary = false;
  /// At σ*: per-step mean over components of the marginal variance and of the
  /// marginal standard deviation.
  std::vector<double> mean_marginal_variance;
  std::vector<double> mean_marginal_std;
  EnsembleStats calibrated_stats;
};

/// Golden-section minimization of −log π over log σ in [σ_lo, σ_hi] with
/// common random numbers; σ* at a bracket edge sets the boundary flag.
CalibrationReport calibrate_sigma(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                                  int realizations, std::pair<double, double> bracket,
                                  const CalibrationOptions& options = {});

}  // namespace probdae
