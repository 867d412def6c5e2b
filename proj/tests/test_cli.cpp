#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "probdae/commands.hpp"
#include "probdae/csv.hpp"
#include "probdae/ensemble.hpp"

using namespace probdae;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("probdae_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("csv format round-trips doubles exactly") {
  for (double x : {1.0 / 3.0, 2.5038e-05, -0.0073867, 1e-300, 123456789.123456}) {
    CHECK(std::stod(csv::format(x)) == x);
  }
}

TEST_CASE("csv write/read round trip") {
  const fs::path dir = temp_dir("csv");
  csv::Table table;
  table.columns = {"a", "b"};
  table.rows = {{0.1, -2.0}, {3.5, 1.0 / 7.0}};
  csv::write(dir / "t.csv", table);
  const csv::Table back = csv::read(dir / "t.csv");
  REQUIRE(back.columns == table.columns);
  REQUIRE(back.rows.size() == 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(back.rows[r][c] == table.rows[r][c]);
}

TEST_CASE("cmd_run writes trajectory bundle and enforces the residual gate") {
  const fs::path dir = temp_dir("run");
  RunConfig config;
  config.problem = "fitzhugh";
  config.scheme = "implicit_euler";
  config.t_end = 1.0;
  config.tau = 0.05;
  config.sigma = 0.1;
  config.realizations = 8;
  config.out_dir = (dir / "out").string();
  CHECK(cmd_run(config) == 0);

  const csv::Table traj = csv::read(dir / "out" / "trajectories.csv");
  CHECK(traj.columns.front() == "trajectory");
  CHECK(traj.columns.back() == "constraint_residual");
  // 8 trajectories x 21 grid points.
  CHECK(traj.rows.size() == 8 * 21);
  for (const auto& row : traj.rows) CHECK(row.back() <= 1e-9);

  const csv::Table ref = csv::read(dir / "out" / "reference.csv");
  CHECK(ref.rows.size() == 21);
}

TEST_CASE("cmd_run with sigma 0 writes the deterministic path byte-stably") {
  const fs::path dir = temp_dir("run0");
  RunConfig config;
  config.problem = "fitzhugh";
  config.t_end = 1.0;
  config.tau = 0.05;
  config.sigma = 0.0;
  config.realizations = 1;
  config.out_dir = (dir / "a").string();
  CHECK(cmd_run(config) == 0);
  config.out_dir = (dir / "b").string();
  CHECK(cmd_run(config) == 0);

  std::ifstream fa(dir / "a" / "trajectories.csv"), fb(dir / "b" / "trajectories.csv");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
}

TEST_CASE("cmd_run perturb-constraint produces visible residuals") {
  const fs::path dir = temp_dir("runp");
  RunConfig config;
  config.problem = "fitzhugh";
  config.t_end = 1.0;
  config.tau = 0.05;
  config.sigma = 0.1;
  config.realizations = 6;
  config.perturb_constraint = true;
  config.out_dir = (dir / "out").string();
  CHECK(cmd_run(config) == 0);
  const csv::Table traj = csv::read(dir / "out" / "trajectories.csv");
  double max_residual = 0.0;
  for (const auto& row : traj.rows) max_residual = std::max(max_residual, row.back());
  CHECK(max_residual > 1e-3);
}

TEST_CASE("cmd_converge emits round-trippable tables") {
  const fs::path dir = temp_dir("conv");
  RunConfig config;
  config.problem = "heat";
  config.grid_points = 30;
  config.scheme = "implicit_euler";
  config.sigma = 4.0;
  config.p_list = {2.0};
  config.tau_ladder = {0.0125, 0.00625, 0.003125, 0.0015625};
  config.realizations = 60;
  config.error_mode = "final";
  config.out_dir = (dir / "out").string();
  CHECK(cmd_converge(config) == 0);

  const csv::Table conv = csv::read(dir / "out" / "conv_implicit_euler_p2.csv");
  REQUIRE(conv.columns == std::vector<std::string>{"tau", "rms_error"});
  REQUIRE(conv.rows.size() == 4);

  // Recompute the fit from the emitted table and compare with the summary.
  std::vector<std::pair<double, double>> points;
  for (const auto& row : conv.rows) points.emplace_back(row[0], row[1]);
  const auto [slope, half_width] = estimate_order(points);

  std::ifstream summary(dir / "out" / "orders_summary.csv");
  std::string header, line;
  REQUIRE(std::getline(summary, header));
  CHECK(header == "scheme,p,slope,half_width,confidence");
  REQUIRE(std::getline(summary, line));
  std::stringstream ss(line);
  std::string scheme, p_str, slope_str, hw_str, conf;
  std::getline(ss, scheme, ',');
  std::getline(ss, p_str, ',');
  std::getline(ss, slope_str, ',');
  std::getline(ss, hw_str, ',');
  std::getline(ss, conf, ',');
  CHECK(scheme == "implicit_euler");
  CHECK(std::stod(p_str) == 2.0);
  CHECK(std::fabs(std::stod(slope_str) - slope) <= 1e-12);
  CHECK(std::fabs(std::stod(hw_str) - half_width) <= 1e-12);
  CHECK((conf == "ok" || conf == "low"));
  // min{p, q} = 1 for this configuration.
  CHECK(std::fabs(slope - 1.0) < 0.3);
}

TEST_CASE("cmd_converge rejects too-short ladders") {
  RunConfig config;
  config.problem = "heat";
  config.grid_points = 20;
  config.scheme = "implicit_euler";
  config.tau_ladder = {0.025};
  config.realizations = 4;
  config.out_dir = (temp_dir("convshort") / "out").string();
  // Direct command call surfaces the error; run_cli turns it into exit 1.
  CHECK_THROWS_AS(cmd_converge(config), std::invalid_argument);
}

TEST_CASE("cmd_calibrate writes the report files and is reproducible") {
  const fs::path dir = temp_dir("calib");
  RunConfig config;
  config.problem = "fitzhugh";
  config.t_end = 2.0;
  config.scheme = "implicit_euler";
  config.tau = 0.04;
  config.realizations = 25;
  config.seed = 3;
  config.sigma_lo = 1e-3;
  config.sigma_hi = 10.0;
  config.out_dir = (dir / "a").string();
  CHECK(cmd_calibrate(config) == 0);
  config.out_dir = (dir / "b").string();
  CHECK(cmd_calibrate(config) == 0);

  const csv::Table sum_a = csv::read(dir / "a" / "calibration_summary.csv");
  const csv::Table sum_b = csv::read(dir / "b" / "calibration_summary.csv");
  REQUIRE(sum_a.rows.size() == 1);
  CHECK(sum_a.rows[0][1] == sum_b.rows[0][1]);  // sigma_star identical

  const csv::Table profile = csv::read(dir / "a" / "variance_profile.csv");
  CHECK(profile.rows.size() == 51);  // N + 1 steps
  CHECK(profile.columns[0] == "t");
  CHECK(profile.columns[3] == "indicator_rms");

  const csv::Table objective = csv::read(dir / "a" / "objective.csv");
  CHECK(objective.rows.size() >= 5);
}

TEST_CASE("cmd_demo emits the four-case bundle with the expected contrast") {
  const fs::path dir = temp_dir("demo");
  RunConfig config;
  config.t_end = 10.0;
  config.tau = 0.04;
  config.realizations = 12;
  config.out_dir = (dir / "out").string();
  CHECK(cmd_demo(config) == 0);

  for (const char* name : {"reference.csv", "dynamic_sigma0.1.csv", "constraint_sigma0.1.csv",
                           "dynamic_sigma0.5.csv", "dynamic_sigma1.5.csv", "demo_summary.csv"})
    CHECK(fs::exists(dir / "out" / name));

  const csv::Table summary = csv::read(dir / "out" / "demo_summary.csv");
  REQUIRE(summary.rows.size() == 4);
  // Row 0: dynamic at sigma 0.1; row 1: constraint at sigma 0.1.
  CHECK(summary.rows[0][3] <= 1e-9);
  CHECK(summary.rows[1][3] > 1e-3);
}

TEST_CASE("run_cli dispatches and reports bad flags") {
  const fs::path dir = temp_dir("cli");
  const std::string out = (dir / "out").string();
  const char* argv[] = {"probdae", "run",  "--problem", "fitzhugh", "--T",    "1.0",
                        "--tau",   "0.05", "--sigma",   "0",        "--realizations", "1",
                        "--out",   out.c_str()};
  CHECK(run_cli(static_cast<int>(std::size(argv)), argv) == 0);
  CHECK(fs::exists(dir / "out" / "trajectories.csv"));

  const char* bad[] = {"probdae", "run", "--scheme", "rk99", "--T", "1.0"};
  CHECK(run_cli(static_cast<int>(std::size(bad)), bad) != 0);

  const char* none[] = {"probdae"};
  CHECK(run_cli(1, none) != 0);
}

TEST_CASE("config file provides defaults that flags override") {
  const fs::path dir = temp_dir("cfg");
  const fs::path cfg = dir / "run.ini";
  {
    std::ofstream out(cfg);
    out << "problem=fitzhugh\nT=1.0\ntau=0.05\nsigma=0\nrealizations=2\nout="
        << (dir / "from_config").string() << "\n";
  }
  const std::string cfg_str = cfg.string();
  const char* argv[] = {"probdae", "run", "--config", cfg_str.c_str()};
  CHECK(run_cli(static_cast<int>(std::size(argv)), argv) == 0);
  CHECK(fs::exists(dir / "from_config" / "trajectories.csv"));

  const std::string out2 = (dir / "overridden").string();
  const char* argv2[] = {"probdae", "run", "--config", cfg_str.c_str(), "--out", out2.c_str()};
  CHECK(run_cli(static_cast<int>(std::size(argv2)), argv2) == 0);
  CHECK(fs::exists(dir / "overridden" / "trajectories.csv"));
}
