#include "probdae/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace probdae {

namespace {

constexpr int kBlock = 32;

void check_grids_match(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("time grids differ in length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::fabs(a[i])))
      throw std::invalid_argument("time grids differ");
}

double weighted_sum_sq(const Vector& v, const Vector& w) {
  return kernels::active().wdot(w.data(), v.data(), v.data(), v.size());
}

double reduce_mode(const std::vector<double>& per_step, ErrorMode mode) {
  if (mode == ErrorMode::final_time) return per_step.back();
  double worst = 0.0;
  for (double e : per_step) worst = std::max(worst, e);
  return worst;
}

}  // namespace

EnsembleResult run_ensemble(const Integrator& integrator, const NoiseSpec& noise,
                            int realizations, const EnsembleOptions& options) {
  if (realizations < 1) throw std::invalid_argument("run_ensemble: need at least one realization");
  const int steps = integrator.steps();
  if (steps < 0)
    throw std::invalid_argument("run_ensemble: t_end/tau must be an integer step count");
  const int n = integrator.problem().n;

  EnsembleResult result;
  result.stats.realizations = realizations;
  result.stats.mean.assign(static_cast<std::size_t>(steps) + 1,
                           Vector(static_cast<std::size_t>(n), 0.0));
  std::vector<Vector> m2(static_cast<std::size_t>(steps) + 1,
                         Vector(static_cast<std::size_t>(n), 0.0));
  if (options.store_trajectories) result.trajectories.reserve(static_cast<std::size_t>(realizations));

  const int workers = std::max(1, options.workers);
  std::vector<Trajectory> block(static_cast<std::size_t>(std::min(kBlock, realizations)));
  std::vector<std::exception_ptr> errors(block.size());

  int accumulated = 0;
  const auto& kr = kernels::active();
  for (int base = 0; base < realizations; base += kBlock) {
    const int count = std::min(kBlock, realizations - base);

    auto compute = [&](int j) {
      try {
        block[static_cast<std::size_t>(j)] = integrator.integrate(noise, base + j, options.run);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    };

    if (workers > 1 && count > 1) {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      const int nthreads = std::min(workers, count);
      pool.reserve(static_cast<std::size_t>(nthreads));
      for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&]() {
          for (int j = next.fetch_add(1); j < count; j = next.fetch_add(1)) compute(j);
        });
      for (auto& th : pool) th.join();
    } else {
      for (int j = 0; j < count; ++j) compute(j);
    }

    for (int j = 0; j < count; ++j) {
      if (errors[static_cast<std::size_t>(j)]) {
        try {
          std::rethrow_exception(errors[static_cast<std::size_t>(j)]);
        } catch (const std::exception& e) {
          throw std::runtime_error("run_ensemble: trajectory " + std::to_string(base + j) +
                                   " failed: " + e.what());
        }
      }
      const Trajectory& traj = block[static_cast<std::size_t>(j)];
      ++accumulated;
      const double inv_count = 1.0 / accumulated;
      for (int s = 0; s <= steps; ++s)
        kr.welford_update(result.stats.mean[static_cast<std::size_t>(s)].data(),
                          m2[static_cast<std::size_t>(s)].data(),
                          traj.states[static_cast<std::size_t>(s)].data(), inv_count,
                          static_cast<std::size_t>(n));
      if (options.store_trajectories)
        result.trajectories.push_back(std::move(block[static_cast<std::size_t>(j)]));
    }
  }

  result.stats.variance.assign(static_cast<std::size_t>(steps) + 1,
                               Vector(static_cast<std::size_t>(n), 0.0));
  if (realizations >= 2) {
    const double inv = 1.0 / (realizations - 1);
    for (int s = 0; s <= steps; ++s)
      for (int i = 0; i < n; ++i)
        result.stats.variance[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] =
            m2[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] * inv;
  }
  return result;
}

EnsembleResult run_ensemble(const SemiExplicitDAE& problem, SchemeId scheme, double tau,
                            const NoiseSpec& noise, int realizations,
                            const EnsembleOptions& options) {
  const Integrator integrator(problem, scheme, tau);
  return run_ensemble(integrator, noise, realizations, options);
}

std::vector<double> rms_error_per_step(const EnsembleStats& stats, const Trajectory& reference,
                                       const Vector& h_weight) {
  if (stats.mean.size() != reference.states.size())
    throw std::invalid_argument("time grids differ in length");
  const int m_count = stats.realizations;
  std::vector<double> out(stats.mean.size());
  Vector diff;
  for (std::size_t s = 0; s < stats.mean.size(); ++s) {
    diff = add_scaled(reference.states[s], -1.0, stats.mean[s]);
    double total = weighted_sum_sq(diff, h_weight);
    if (m_count >= 2) {
      // (1/M) Σ ‖u − U_k‖² = ‖u − Ū‖² + (M−1)/M · Σ_i w_i s²_i
      const double spread = kernels::active().dot(h_weight.data(), stats.variance[s].data(),
                                                  h_weight.size());
      total += spread * (m_count - 1) / static_cast<double>(m_count);
    }
    out[s] = std::sqrt(std::max(0.0, total));
  }
  return out;
}

std::vector<double> rms_error_per_step(const std::vector<Trajectory>& trajectories,
                                       const Trajectory& reference, const Vector& h_weight) {
  if (trajectories.empty())
    throw std::invalid_argument("rms_error_per_step: empty ensemble");
  check_grids_match(trajectories.front().times, reference.times);
  std::vector<double> out(reference.times.size(), 0.0);
  Vector diff;
  for (const Trajectory& traj : trajectories) {
    check_grids_match(traj.times, reference.times);
    for (std::size_t s = 0; s < out.size(); ++s) {
      diff = add_scaled(reference.states[s], -1.0, traj.states[s]);
      out[s] += weighted_sum_sq(diff, h_weight);
    }
  }
  for (double& e : out) e = std::sqrt(std::max(0.0, e / static_cast<double>(trajectories.size())));
  return out;
}

double mse_error(const EnsembleStats& stats, const Trajectory& reference, const Vector& h_weight,
                 ErrorMode mode) {
  return reduce_mode(rms_error_per_step(stats, reference, h_weight), mode);
}

double mse_error(const std::vector<Trajectory>& trajectories, const Trajectory& reference,
                 const Vector& h_weight, ErrorMode mode) {
  return reduce_mode(rms_error_per_step(trajectories, reference, h_weight), mode);
}

std::pair<double, double> estimate_order(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("estimate_order: need at least 3 step sizes");
  const std::size_t k = points.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw std::invalid_argument("estimate_order: step sizes and errors must be positive");
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("estimate_order: step sizes must differ");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = ly[i] - my - slope * (lx[i] - mx);
    ss_res += r * r;
  }
  const double half_width = std::sqrt(ss_res / static_cast<double>(k - 2) / sxx);
  return {slope, half_width};
}

ConvergenceTable convergence_study(const SemiExplicitDAE& problem,
                                   const ConvergenceStudyConfig& config) {
  if (config.taus.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 step sizes");
  for (std::size_t i = 1; i < config.taus.size(); ++i)
    if (!(config.taus[i] < config.taus[i - 1]))
      throw std::invalid_argument("convergence_study: step sizes must be strictly decreasing");

  const double tau_min = config.taus.back();
  // When every τ nests over the finest one, a single fine reference serves all
  // rungs; otherwise each rung gets its own.
  bool nested = true;
  for (double tau : config.taus) {
    const double ratio = tau / tau_min;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9) nested = false;
  }

  Trajectory common_reference;
  if (nested) {
    const int fine_steps = static_cast<int>(std::round(problem.t_end / tau_min));
    std::vector<double> grid(static_cast<std::size_t>(fine_steps) + 1);
    for (int i = 0; i <= fine_steps; ++i) grid[static_cast<std::size_t>(i)] = i * tau_min;
    common_reference = reference_solution(problem, grid, config.reference_refine);
  }

  NoiseSpec noise{config.sigma, config.noise_order, config.seed};
  EnsembleOptions opts;
  opts.workers = config.workers;

  ConvergenceTable table;
  for (double tau : config.taus) {
    const Integrator integrator(problem, config.scheme, tau);
    const int steps = integrator.steps();
    if (steps < 0)
      throw std::invalid_argument("convergence_study: t_end/tau must be an integer for tau = " +
                                  std::to_string(tau));
    const EnsembleResult ensemble = run_ensemble(integrator, noise, config.realizations, opts);

    Trajectory reference;
    if (nested) {
      const int stride = static_cast<int>(std::round(tau / tau_min));
      reference.times.resize(static_cast<std::size_t>(steps) + 1);
      reference.states.resize(static_cast<std::size_t>(steps) + 1);
      for (int s = 0; s <= steps; ++s) {
        reference.times[static_cast<std::size_t>(s)] =
            common_reference.times[static_cast<std::size_t>(s) * stride];
        reference.states[static_cast<std::size_t>(s)] =
            common_reference.states[static_cast<std::size_t>(s) * stride];
      }
    } else {
      std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
      for (int s = 0; s <= steps; ++s) grid[static_cast<std::size_t>(s)] = s * tau;
      reference = reference_solution(problem, grid, config.reference_refine);
    }

    table.points.emplace_back(tau,
                              mse_error(ensemble.stats, reference, problem.h_weight, config.mode));
  }

  const auto [slope, half_width] = estimate_order(table.points);
  table.slope = slope;
  table.half_width = half_width;
  return table;
}

std::vector<double> default_tau_ladder(Method method, double t_end) {
  const bool exponential = method == Method::exp_euler || method == Method::exp2;
  const int k_first = exponential ? 3 : 2;
  std::vector<double> taus;
  for (int k = k_first; k < k_first + 5; ++k) taus.push_back(t_end / std::pow(2.0, k));
  return taus;
}

std::vector<double> default_noise_orders(Method method) {
  if (deterministic_order(method) == 1) return {0.5, 1.0, 1.5};
  return {0.5, 1.0, 1.5, 2.0};
}

}  // namespace probdae
