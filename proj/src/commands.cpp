#include "probdae/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "probdae/calibrate.hpp"
#include "probdae/csv.hpp"
#include "probdae/ensemble.hpp"
#include "probdae/problems.hpp"

namespace probdae {

namespace fs = std::filesystem;

namespace {

SchemeId scheme_from_config(const RunConfig& config) {
  const auto method = parse_method(config.scheme);
  if (!method) throw std::invalid_argument("unknown scheme: " + config.scheme);
  SchemeId scheme = make_scheme(*method);
  const auto path = parse_exp_path(config.path);
  if (!path) throw std::invalid_argument("unknown path: " + config.path);
  scheme.path = *path;
  if (!config.injection.empty()) {
    const auto injection = parse_injection(config.injection);
    if (!injection) throw std::invalid_argument("unknown injection mode: " + config.injection);
    scheme.injection = *injection;
  }
  return scheme;
}

ErrorMode error_mode_from_config(const RunConfig& config) {
  if (config.error_mode == "sup") return ErrorMode::sup_over_steps;
  if (config.error_mode == "final") return ErrorMode::final_time;
  throw std::invalid_argument("unknown error mode: " + config.error_mode +
                              " (expected sup or final)");
}

double noise_order(const RunConfig& config, Method method) {
  return config.p > 0.0 ? config.p : default_noise_order(method);
}

void print_warnings(const Integrator& integrator) {
  for (const auto& w : integrator.warnings()) std::cerr << "warning: " << w << "\n";
}

fs::path prepare_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_trajectories_csv(const fs::path& path, const SemiExplicitDAE& problem,
                            const std::vector<Trajectory>& trajectories) {
  csv::Table table;
  table.columns = {"trajectory", "t"};
  for (int i = 0; i < problem.n; ++i) table.columns.push_back("u" + std::to_string(i));
  table.columns.push_back("constraint_residual");
  Vector bu, g;
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const Trajectory& traj = trajectories[k];
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      std::vector<double> row;
      row.reserve(table.columns.size());
      row.push_back(static_cast<double>(k));
      row.push_back(traj.times[s]);
      for (double v : traj.states[s]) row.push_back(v);
      multiply(problem.B, traj.states[s], bu);
      problem.eval_g(traj.times[s], g);
      row.push_back(kernels::active().max_abs_diff(bu.data(), g.data(), bu.size()));
      table.rows.push_back(std::move(row));
    }
  }
  csv::write(path, table);
}

void write_reference_csv(const fs::path& path, const Trajectory& reference) {
  csv::Table table;
  table.columns = {"t"};
  for (std::size_t i = 0; i < reference.states.front().size(); ++i)
    table.columns.push_back("u" + std::to_string(i));
  for (std::size_t s = 0; s < reference.times.size(); ++s) {
    std::vector<double> row;
    row.push_back(reference.times[s]);
    for (double v : reference.states[s]) row.push_back(v);
    table.rows.push_back(std::move(row));
  }
  csv::write(path, table);
}

double max_deviation_from_reference(const std::vector<Trajectory>& trajectories,
                                    const Trajectory& reference, const Vector& h_weight) {
  const std::vector<double> per_step = rms_error_per_step(trajectories, reference, h_weight);
  return *std::max_element(per_step.begin(), per_step.end());
}

}  // namespace

SemiExplicitDAE make_problem(const RunConfig& config) {
  SemiExplicitDAE problem;
  if (config.problem == "fitzhugh") {
    problem = fitzhugh_nagumo();
  } else if (config.problem == "heat") {
    problem = constrained_heat(config.grid_points);
  } else {
    throw std::invalid_argument("unknown problem: " + config.problem +
                                " (expected fitzhugh or heat)");
  }
  if (config.t_end > 0.0) problem.t_end = config.t_end;
  return problem;
}

int cmd_run(const RunConfig& config) {
  const SemiExplicitDAE problem = make_problem(config);
  const SchemeId scheme = scheme_from_config(config);
  const Integrator integrator(problem, scheme, config.tau);
  print_warnings(integrator);

  NoiseSpec noise{config.sigma, noise_order(config, scheme.method), config.seed};
  EnsembleOptions opts;
  opts.store_trajectories = true;
  opts.workers = config.workers;
  opts.run.perturb_constraint = config.perturb_constraint;
  const EnsembleResult ensemble =
      run_ensemble(integrator, noise, config.realizations, opts);

  const fs::path dir = prepare_out_dir(config);
  write_trajectories_csv(dir / "trajectories.csv", problem, ensemble.trajectories);

  const Trajectory reference =
      reference_solution(problem, ensemble.trajectories.front().times);
  write_reference_csv(dir / "reference.csv", reference);

  double max_residual = 0.0;
  for (const Trajectory& traj : ensemble.trajectories)
    max_residual = std::max(max_residual, max_constraint_residual(problem, traj));
  std::cout << "run: " << config.realizations << " trajectories, max constraint residual "
            << csv::format(max_residual) << "\n";

  if (!config.perturb_constraint && max_residual > 1e-9) {
    std::cerr << "error: constraint residual exceeds 1e-9\n";
    return 1;
  }
  return 0;
}

int cmd_converge(const RunConfig& config) {
  RunConfig effective = config;
  if (config.paper_defaults) {
    effective.problem = "heat";
    effective.grid_points = 100;
    effective.t_end = -1.0;
    effective.sigma = 4.0;
    if (!config.realizations_explicit) effective.realizations = 1000;
    // Final-time error is the convention under which the orders come out
    // clean on this problem; an explicit --error-mode still wins.
    if (!config.error_mode_explicit) effective.error_mode = "final";
  }
  const SemiExplicitDAE problem = make_problem(effective);
  const ErrorMode mode = error_mode_from_config(effective);

  std::vector<Method> methods;
  if (effective.paper_defaults) {
    methods = {Method::implicit_euler, Method::midpoint, Method::exp_euler, Method::exp2};
  } else {
    methods = {scheme_from_config(effective).method};
  }

  const fs::path dir = prepare_out_dir(effective);
  std::ofstream summary(dir / "orders_summary.csv");
  if (!summary) throw std::runtime_error("cannot open orders_summary.csv");
  summary << "scheme,p,slope,half_width,confidence\n";

  for (Method method : methods) {
    SchemeId scheme = make_scheme(method);
    if (!effective.paper_defaults) scheme = scheme_from_config(effective);

    std::vector<double> taus = effective.tau_ladder;
    if (taus.empty()) taus = default_tau_ladder(method, problem.t_end);
    if (taus.size() < 3) throw std::invalid_argument("converge: need >= 3 step sizes");
    std::vector<double> orders = effective.p_list;
    if (orders.empty()) {
      if (effective.p > 0.0)
        orders = {effective.p};
      else
        orders = default_noise_orders(method);
    }

    for (double p : orders) {
      ConvergenceStudyConfig study;
      study.scheme = scheme;
      study.sigma = effective.sigma;
      study.noise_order = p;
      study.realizations = effective.realizations;
      study.taus = taus;
      study.mode = mode;
      study.seed = effective.seed;
      study.workers = effective.workers;
      const ConvergenceTable table = convergence_study(problem, study);

      csv::Table out;
      out.columns = {"tau", "rms_error"};
      for (const auto& [tau, err] : table.points) out.rows.push_back({tau, err});
      std::string tag(method_name(method));
      tag += "_p" + csv::format(p);
      for (char& c : tag)
        if (c == '.') c = '_';
      csv::write(dir / ("conv_" + tag + ".csv"), out);

      summary << method_name(method) << ',' << csv::format(p) << ','
              << csv::format(table.slope) << ',' << csv::format(table.half_width) << ','
              << (table.half_width > 0.3 ? "low" : "ok") << '\n';
      std::cout << "converge: " << method_name(method) << " p=" << p
                << " slope=" << table.slope << " half_width=" << table.half_width << "\n";
    }
  }
  return 0;
}

int cmd_calibrate(const RunConfig& config) {
  const SemiExplicitDAE problem = make_problem(config);
  const SchemeId scheme = scheme_from_config(config);

  CalibrationOptions opts;
  opts.seed = config.seed;
  opts.workers = config.workers;
  const CalibrationReport report =
      calibrate_sigma(problem, scheme, config.tau, config.realizations,
                      {config.sigma_lo, config.sigma_hi}, opts);

  const fs::path dir = prepare_out_dir(config);

  csv::Table objective;
  objective.columns = {"sigma", "neg_log_pi"};
  for (const auto& [sigma, value] : report.evaluations) objective.rows.push_back({sigma, value});
  csv::write(dir / "objective.csv", objective);

  csv::Table summary;
  summary.columns = {"tau", "sigma_star", "objective_star", "at_boundary", "realizations"};
  summary.rows.push_back({report.tau, report.sigma_star, report.objective_star,
                          report.at_boundary ? 1.0 : 0.0,
                          static_cast<double>(config.realizations)});
  csv::write(dir / "calibration_summary.csv", summary);

  // Per-step marginal variances, their means, and the indicator.
  const int n = problem.n;
  csv::Table profile;
  profile.columns = {"t", "mean_marginal_variance", "mean_marginal_std", "indicator_rms"};
  for (int i = 0; i < n; ++i) profile.columns.push_back("var_u" + std::to_string(i));
  for (int i = 0; i < n; ++i) profile.columns.push_back("indicator_u" + std::to_string(i));
  const int steps = static_cast<int>(report.mean_marginal_variance.size()) - 1;
  for (int s = 0; s <= steps; ++s) {
    std::vector<double> row;
    row.push_back(s * config.tau);
    row.push_back(report.mean_marginal_variance[static_cast<std::size_t>(s)]);
    row.push_back(report.mean_marginal_std[static_cast<std::size_t>(s)]);
    const Vector& ind = report.indicators[static_cast<std::size_t>(s)];
    double rms = 0.0;
    for (double e : ind) rms += e * e;
    row.push_back(std::sqrt(rms / static_cast<double>(n)));
    for (double v : report.calibrated_stats.variance[static_cast<std::size_t>(s)])
      row.push_back(v);
    for (double e : ind) row.push_back(e);
    profile.rows.push_back(std::move(row));
  }
  csv::write(dir / "variance_profile.csv", profile);

  std::cout << "calibrate: sigma_star=" << csv::format(report.sigma_star)
            << " objective=" << csv::format(report.objective_star)
            << (report.at_boundary ? " (at bracket boundary)" : "") << "\n";
  return 0;
}

int cmd_demo(const RunConfig& config) {
  // Constrained FitzHugh–Nagumo bundle: perturbation on the constraint vs on
  // the dynamic part at σ = 0.1, plus the σ-sweep on the dynamic part.
  RunConfig base = config;
  base.problem = "fitzhugh";
  base.scheme = "implicit_euler";
  if (config.realizations <= 0) base.realizations = 50;

  const SemiExplicitDAE problem = make_problem(base);
  const SchemeId scheme = scheme_from_config(base);
  const Integrator integrator(problem, scheme, base.tau);
  print_warnings(integrator);

  const fs::path dir = prepare_out_dir(base);
  const int steps = integrator.steps();
  if (steps < 0) throw std::invalid_argument("demo: t_end/tau must be an integer step count");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int s = 0; s <= steps; ++s) grid[static_cast<std::size_t>(s)] = s * base.tau;
  const Trajectory reference = reference_solution(problem, grid);
  write_reference_csv(dir / "reference.csv", reference);

  csv::Table summary;
  summary.columns = {"sigma", "perturb_constraint", "max_rms_deviation", "max_residual"};

  struct Case {
    double sigma;
    bool perturb;
    const char* file;
  };
  const Case cases[] = {
      {0.1, false, "dynamic_sigma0.1.csv"},
      {0.1, true, "constraint_sigma0.1.csv"},
      {0.5, false, "dynamic_sigma0.5.csv"},
      {1.5, false, "dynamic_sigma1.5.csv"},
  };
  for (const Case& c : cases) {
    NoiseSpec noise{c.sigma, noise_order(base, scheme.method), base.seed};
    EnsembleOptions opts;
    opts.store_trajectories = true;
    opts.workers = base.workers;
    opts.run.perturb_constraint = c.perturb;
    const EnsembleResult ensemble = run_ensemble(integrator, noise, base.realizations, opts);
    write_trajectories_csv(dir / c.file, problem, ensemble.trajectories);

    double max_residual = 0.0;
    for (const Trajectory& traj : ensemble.trajectories)
      max_residual = std::max(max_residual, max_constraint_residual(problem, traj));
    const double deviation =
        max_deviation_from_reference(ensemble.trajectories, reference, problem.h_weight);
    summary.rows.push_back({c.sigma, c.perturb ? 1.0 : 0.0, deviation, max_residual});
    std::cout << "demo: sigma=" << c.sigma << (c.perturb ? " (constraint)" : " (dynamic)")
              << " max rms deviation " << csv::format(deviation) << " max residual "
              << csv::format(max_residual) << "\n";
  }
  csv::write(dir / "demo_summary.csv", summary);
  return 0;
}

namespace {

// Flat key=value configuration file; '#' starts a comment. Values apply only
// where the command line did not already set the matching flag.
std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) values[key] = value;
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Probabilistic time integrators for semi-explicit index-2 DAEs"};

  RunConfig config;
  std::string config_file;
  auto add_common = [&](CLI::App* cmd, bool wants_tau_ladder) {
    cmd->add_option("--config", config_file,
                    "flat key=value configuration file; flags override");
    cmd->add_option("--problem", config.problem, "fitzhugh | heat");
    cmd->add_option("--grid-points", config.grid_points, "heat problem interior grid points");
    cmd->add_option("--T", config.t_end, "time horizon (default: problem specific)");
    cmd->add_option("--scheme", config.scheme,
                    "implicit_euler | midpoint | exp_euler | exp2");
    cmd->add_option("--path", config.path, "exponential scheme form: kernel | saddle");
    cmd->add_option("--injection", config.injection, "noise injection: raw | a_projected");
    if (wants_tau_ladder)
      cmd->add_option("--tau", config.tau_ladder, "step-size ladder");
    else
      cmd->add_option("--tau", config.tau, "step size");
    cmd->add_option("--sigma", config.sigma, "noise scale");
    cmd->add_option("--p", config.p, "noise order (default: scheme order)");
    cmd->add_option("--realizations", config.realizations, "ensemble size M");
    cmd->add_option("--seed", config.seed, "base seed");
    cmd->add_option("--workers", config.workers, "parallel trajectory workers");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--error-mode", config.error_mode, "sup | final");
  };

  CLI::App* run = app.add_subcommand("run", "trajectory bundle against the fine reference");
  add_common(run, false);
  run->add_flag("--perturb-constraint", config.perturb_constraint,
                "demo misuse mode: noise on the constraint data");
  run->add_flag("--store-trajectories", config.store_trajectories,
                "keep all trajectories in memory (run always writes them)");

  CLI::App* converge = app.add_subcommand("converge", "mean-square convergence study");
  add_common(converge, true);
  converge->add_option("--p-list", config.p_list, "noise orders to sweep");
  converge->add_flag("--paper-defaults", config.paper_defaults,
                     "heat problem, sigma=4, M=1000, all four schemes, built-in ladders");

  CLI::App* calibrate = app.add_subcommand("calibrate", "noise-scale calibration");
  add_common(calibrate, false);
  calibrate->add_option("--sigma-lo", config.sigma_lo, "bracket lower edge");
  calibrate->add_option("--sigma-hi", config.sigma_hi, "bracket upper edge");

  CLI::App* demo = app.add_subcommand("demo", "constraint vs dynamic perturbation bundle");
  add_common(demo, false);

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CLI::App* active = run->parsed() ? run
                       : converge->parsed() ? converge
                       : calibrate->parsed() ? calibrate
                                             : demo;
    if (const CLI::Option* opt = active->get_option_no_throw("--error-mode");
        opt != nullptr && opt->count() > 0)
      config.error_mode_explicit = true;
    if (const CLI::Option* opt = active->get_option_no_throw("--realizations");
        opt != nullptr && opt->count() > 0)
      config.realizations_explicit = true;
    if (!config_file.empty()) {
      const auto file = read_flat_config(config_file);
      auto unset = [&](const char* flag) {
        const CLI::Option* opt = active->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
      };
      auto get = [&](const char* key) -> const std::string* {
        const auto it = file.find(key);
        return it == file.end() ? nullptr : &it->second;
      };
      if (const auto* v = get("problem"); v && unset("--problem")) config.problem = *v;
      if (const auto* v = get("grid-points"); v && unset("--grid-points"))
        config.grid_points = std::stoi(*v);
      if (const auto* v = get("T"); v && unset("--T")) config.t_end = std::stod(*v);
      if (const auto* v = get("scheme"); v && unset("--scheme")) config.scheme = *v;
      if (const auto* v = get("path"); v && unset("--path")) config.path = *v;
      if (const auto* v = get("injection"); v && unset("--injection")) config.injection = *v;
      if (const auto* v = get("tau"); v && unset("--tau")) {
        if (active == converge)
          config.tau_ladder = parse_double_list(*v);
        else
          config.tau = std::stod(*v);
      }
      if (const auto* v = get("sigma"); v && unset("--sigma")) config.sigma = std::stod(*v);
      if (const auto* v = get("p"); v && unset("--p")) config.p = std::stod(*v);
      if (const auto* v = get("p-list"); v && unset("--p-list"))
        config.p_list = parse_double_list(*v);
      if (const auto* v = get("realizations"); v && unset("--realizations")) {
        config.realizations = std::stoi(*v);
        config.realizations_explicit = true;
      }
      if (const auto* v = get("seed"); v && unset("--seed"))
        config.seed = std::stoull(*v);
      if (const auto* v = get("workers"); v && unset("--workers"))
        config.workers = std::stoi(*v);
      if (const auto* v = get("out"); v && unset("--out")) config.out_dir = *v;
      if (const auto* v = get("error-mode"); v && unset("--error-mode")) {
        config.error_mode = *v;
        config.error_mode_explicit = true;
      }
      if (const auto* v = get("perturb-constraint"); v && unset("--perturb-constraint"))
        config.perturb_constraint = (*v == "1" || *v == "true");
      if (const auto* v = get("paper-defaults"); v && unset("--paper-defaults"))
        config.paper_defaults = (*v == "1" || *v == "true");
      if (const auto* v = get("sigma-lo"); v && unset("--sigma-lo"))
        config.sigma_lo = std::stod(*v);
      if (const auto* v = get("sigma-hi"); v && unset("--sigma-hi"))
        config.sigma_hi = std::stod(*v);
    }

    if (run->parsed()) return cmd_run(config);
    if (converge->parsed()) return cmd_converge(config);
    if (calibrate->parsed()) return cmd_calibrate(config);
    if (demo->parsed()) return cmd_demo(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace probdae
