#include "probdae/calibrate.hpp"

#include <cmath>
#include <stdexcept>

namespace probdae {

namespace {

// Interleaves the states of the τ/2 run onto the τ grid and subtracts.
std::vector<Vector> indicator_from_runs(const Trajectory& coarse, const Trajectory& fine) {
  std::vector<Vector> indicators(coarse.states.size());
  for (std::size_t s = 0; s < coarse.states.size(); ++s)
    indicators[s] = add_scaled(coarse.states[s], -1.0, fine.states[2 * s]);
  return indicators;
}

double objective_from_stats(const EnsembleStats& stats, const Trajectory& deterministic,
                            const std::vector<Vector>& indicators) {
  double total = 0.0;
  for (std::size_t s = 0; s < stats.mean.size(); ++s) {
    const Vector& mean = stats.mean[s];
    const Vector& var = stats.variance[s];
    const Vector& det = deterministic.states[s];
    const Vector& ind = indicators[s];
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double v1 = std::max(var[i], kVarianceFloor);
      const double v2 = std::max(ind[i] * ind[i], kVarianceFloor);
      total += bhattacharyya(mean[i], v1, det[i], v2);
    }
  }
  return total;
}

}  // namespace

std::vector<Vector> error_indicator(const SemiExplicitDAE& problem, SchemeId scheme, double tau) {
  const Integrator coarse(problem, scheme, tau);
  const Integrator fine(problem, scheme, 0.5 * tau);
  return indicator_from_runs(coarse.integrate_deterministic(), fine.integrate_deterministic());
}

double bhattacharyya(double mu1, double var1, double mu2, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0))
    throw std::invalid_argument("bhattacharyya: variances must be positive");
  const double dmu = mu1 - mu2;
  const double ratio = var1 / var2;
  return 0.25 * dmu * dmu / (var1 + var2) +
         0.25 * std::log(0.25 * (ratio + 1.0 / ratio + 2.0));
}

double neg_log_pi(const SemiExplicitDAE& problem, SchemeId scheme, double tau, double sigma,
                  int realizations, const std::vector<Vector>& indicators,
                  const CalibrationOptions& options) {
  if (!(sigma > 0.0)) throw std::invalid_argument("neg_log_pi: sigma must be positive");
  const Integrator integrator(problem, scheme, tau);
  const Trajectory deterministic = integrator.integrate_deterministic();
  if (indicators.size() != deterministic.states.size())
    throw std::invalid_argument("neg_log_pi: indicator grid mismatch");

  NoiseSpec noise{sigma, default_noise_order(scheme.method), options.seed};
  EnsembleOptions opts;
  opts.workers = options.workers;
  const EnsembleResult ensemble = run_ensemble(integrator, noise, realizations, opts);

  const double value = objective_from_stats(ensemble.stats, deterministic, indicators);
  if (!std::isfinite(value))
    throw std::runtime_error("neg_log_pi: objective is not finite at sigma = " +
                             std::to_string(sigma));
  return value;
}

CalibrationReport calibrate_sigma(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                                  int realizations, std::pair<double, double> bracket,
                                  const CalibrationOptions& options) {
  const auto [sigma_lo, sigma_hi] = bracket;
  if (!(sigma_lo > 0.0) || !(sigma_hi > sigma_lo))
    throw std::invalid_argument("calibrate_sigma: need 0 < sigma_lo < sigma_hi");

  CalibrationReport report;
  report.tau = tau;
  report.indicators = options.indicator_override.empty()
                          ? error_indicator(problem, scheme, tau)
                          : options.indicator_override;

  const Integrator integrator(problem, scheme, tau);
  const Trajectory deterministic = integrator.integrate_deterministic();
  if (report.indicators.size() != deterministic.states.size())
    throw std::invalid_argument("calibrate_sigma: indicator grid mismatch");

  NoiseSpec noise{0.0, default_noise_order(scheme.method), options.seed};
  EnsembleOptions opts;
  opts.workers = options.workers;

  auto objective = [&](double sigma) {
    noise.sigma = sigma;
    const EnsembleResult ensemble = run_ensemble(integrator, noise, realizations, opts);
    const double value = objective_from_stats(ensemble.stats, deterministic, report.indicators);
    if (!std::isfinite(value))
      throw std::runtime_error("calibrate_sigma: objective is not finite at sigma = " +
                               std::to_string(sigma));
    report.evaluations.emplace_back(sigma, value);
    return value;
  };

  // Golden-section search on log σ; common random numbers make the objective
  // a deterministic function of σ.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(sigma_lo);
  double b = std::log(sigma_hi);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(std::exp(c));
  double fd = objective(std::exp(d));
  while (b - a > options.relative_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(std::exp(d));
    }
  }
  const double log_star = fc < fd ? c : d;
  report.sigma_star = std::exp(log_star);
  report.objective_star = std::min(fc, fd);
  const double edge_gap = options.relative_tol * 2.0;
  report.at_boundary = (log_star - std::log(sigma_lo) <= edge_gap) ||
                       (std::log(sigma_hi) - log_star <= edge_gap);

  // Diagnostics of the calibrated ensemble.
  noise.sigma = report.sigma_star;
  report.calibrated_stats = run_ensemble(integrator, noise, realizations, opts).stats;
  const std::size_t steps = report.calibrated_stats.variance.size();
  report.mean_marginal_variance.resize(steps);
  report.mean_marginal_std.resize(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const Vector& var = report.calibrated_stats.variance[s];
    double vsum = 0.0, ssum = 0.0;
    for (double v : var) {
      vsum += v;
      ssum += std::sqrt(std::max(0.0, v));
    }
    report.mean_marginal_variance[s] = vsum / static_cast<double>(var.size());
    report.mean_marginal_std[s] = ssum / static_cast<double>(var.size());
  }
  return report;
}

}  // namespace probdae
