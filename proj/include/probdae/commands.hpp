#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probdae/problem.hpp"

namespace probdae {

/// Everything the CLI subcommands need; flat so it maps 1:1 onto flags and
/// config-file keys.
struct RunConfig {
  std::string problem = "fitzhugh";  ///< "fitzhugh" | "heat"
  int grid_points = 100;
  double t_end = -1.0;  ///< < 0 → problem default
  std::string scheme = "implicit_euler";
  std::string path = "kernel";    ///< exponential schemes: "kernel" | "saddle"
  std::string injection;          ///< "raw" | "a_projected"; empty → scheme default
  double tau = 0.04;
  std::vector<double> tau_ladder;  ///< converge; empty → built-in ladder
  std::vector<double> p_list;      ///< converge; empty → built-in sweep
  double sigma = 0.1;
  double p = -1.0;  ///< < 0 → deterministic order of the scheme
  int realizations = 50;
  bool realizations_explicit = false;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "out";
  bool perturb_constraint = false;
  bool store_trajectories = false;
  std::string error_mode = "sup";  ///< "sup" | "final"
  bool error_mode_explicit = false;
  bool paper_defaults = false;
  double sigma_lo = 1e-3;
  double sigma_hi = 10.0;
};

SemiExplicitDAE make_problem(const RunConfig& config);

int cmd_run(const RunConfig& config);
int cmd_converge(const RunConfig& config);
int cmd_calibrate(const RunConfig& config);
int cmd_demo(const RunConfig& config);

/// Full argv interface of the probdae tool.
int run_cli(int argc, const char* const* argv);

}  // namespace probdae
