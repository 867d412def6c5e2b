#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "probdae/integrators.hpp"
#include "probdae/problems.hpp"

namespace probdae {

/// Per-time-step mean and componentwise unbiased variance over M
/// realizations. Variance is zero-filled for M < 2.
struct EnsembleStats {
  std::vector<Vector> mean;
  std::vector<Vector> variance;
  int realizations = 0;
};

struct EnsembleOptions {
  bool store_trajectories = false;
  int workers = 1;
  Integrator::Options run = {};
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<Trajectory> trajectories;  ///< filled only when requested
};

/// M independent trajectories with trajectory_index 0…M−1. Statistics are
/// accumulated streaming in index order, so the result is independent of the
/// worker count and scheduling. A failing trajectory aborts the ensemble with
/// its index in the message.
EnsembleResult run_ensemble(const Integrator& integrator, const NoiseSpec& noise, int realizations,
                            const EnsembleOptions& options = {});
EnsembleResult run_ensemble(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                            const NoiseSpec& noise, int realizations,
                            const EnsembleOptions& options = {});

enum class ErrorMode { sup_over_steps, final_time };

/// Per-step root mean square H-norm error, ((1/M) Σ_k ‖u(tⁿ) − Uⁿ_k‖²_H)^{1/2}.
/// The stats route uses the exact decomposition into mean offset plus spread.
std::vector<double> rms_error_per_step(const EnsembleStats& stats, const Trajectory& reference,
                                       const Vector& h_weight);
std::vector<double> rms_error_per_step(const std::vector<Trajectory>& trajectories,
                                       const Trajectory& reference, const Vector& h_weight);

double mse_error(const EnsembleStats& stats, const Trajectory& reference, const Vector& h_weight,
                 ErrorMode mode);
double mse_error(const std::vector<Trajectory>& trajectories, const Trajectory& reference,
                 const Vector& h_weight, ErrorMode mode);

/// Least-squares slope of log(error) against log(τ) with the standard error
/// of the slope as half-width. Needs ≥ 3 strictly positive points.
std::pair<double, double> estimate_order(const std::vector<std::pair<double, double>>& points);

struct ConvergenceTable {
  std::vector<std::pair<double, double>> points;  ///< (τ, rms error), τ decreasing
  double slope = 0.0;
  double half_width = 0.0;
};

struct ConvergenceStudyConfig {
  SchemeId scheme = make_scheme(Method::implicit_euler);
  double sigma = 4.0;
  double noise_order = 1.0;  ///< p
  int realizations = 1000;
  std::vector<double> taus;  ///< strictly decreasing
  ErrorMode mode = ErrorMode::sup_over_steps;
  std::uint64_t seed = 0;
  int workers = 1;
  int reference_refine = 20;
};

/// The convergence protocol: one ensemble per step size against a common fine
/// deterministic reference, followed by the log-log fit.
ConvergenceTable convergence_study(const SemiExplicitDAE& problem,
                                   const ConvergenceStudyConfig& config);

/// Step-size ladders and noise-order sweeps of the convergence experiments:
/// τ = T/2^k with k = 2…6 for the implicit schemes and k = 3…7 for the
/// exponential ones; p ∈ {1/2, 1, 3/2} for first-order schemes plus p = 2 for
/// second-order ones.
std::vector<double> default_tau_ladder(Method method, double t_end);
std::vector<double> default_noise_orders(Method method);

}  // namespace probdae
