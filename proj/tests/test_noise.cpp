#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "probdae/noise.hpp"

using namespace probdae;

TEST_CASE("sigma = 0 yields exact zeros") {
  NoiseSpec spec{0.0, 1.0, 123};
  const Vector v = sample_perturbation(spec, 7, 0.01, 3, 5);
  for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("fixed indices reproduce the same vector") {
  NoiseSpec spec{2.0, 1.5, 987654321};
  const Vector a = sample_perturbation(spec, 16, 0.02, 11, 4);
  const Vector b = sample_perturbation(spec, 16, 0.02, 11, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // Different indices give different draws.
  const Vector c = sample_perturbation(spec, 16, 0.02, 12, 4);
  CHECK(kernels::active().max_abs_diff(a.data(), c.data(), a.size()) > 0.0);
}

TEST_CASE("scaling law in tau is exact") {
  NoiseSpec spec{4.0, 1.0, 77};
  const double tau = 0.01;
  const Vector a = sample_perturbation(spec, 32, tau, 2, 9);
  const Vector b = sample_perturbation(spec, 32, 2.0 * tau, 2, 9);
  // Same ξ̃ draws, scale multiplied by 2^{p+1/2}.
  const double factor = std::pow(2.0, spec.p + 0.5);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(b[i] == doctest::Approx(factor * a[i]).epsilon(1e-13));
}

TEST_CASE("moments match sigma tau^{p+1/2} at 1e5 samples") {
  NoiseSpec spec{4.0, 1.0, 2024};
  const double tau = 0.01;
  const double expected_std = 4.0 * std::pow(tau, 1.5);  // 4e-3

  const int samples = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector v = sample_perturbation(spec, 1, tau, 0, k);
    sum += v[0];
    sumsq += v[0] * v[0];
  }
  const double mean = sum / samples;
  const double var = sumsq / samples - mean * mean;
  const double std_dev = std::sqrt(var);

  // Law of large numbers with a 3-sigma acceptance band.
  const double mean_band = 3.0 * expected_std / std::sqrt(static_cast<double>(samples));
  CHECK(std::fabs(mean) < mean_band);
  CHECK(std_dev == doctest::Approx(expected_std).epsilon(0.02));
}

TEST_CASE("streams across steps and trajectories are uncorrelated") {
  NoiseSpec spec{1.0, 1.0, 5150};
  const int samples = 10000;

  auto correlation = [&](auto draw_a, auto draw_b) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int k = 0; k < samples; ++k) {
      const double a = draw_a(k);
      const double b = draw_b(k);
      sa += a;
      sb += b;
      saa += a * a;
      sbb += b * b;
      sab += a * b;
    }
    const double cov = sab / samples - (sa / samples) * (sb / samples);
    const double va = saa / samples - (sa / samples) * (sa / samples);
    const double vb = sbb / samples - (sb / samples) * (sb / samples);
    return cov / std::sqrt(va * vb);
  };

  // Adjacent steps within one trajectory.
  const double rho_step = correlation(
      [&](int k) { return counter_normal(spec.seed, 0, k, 0); },
      [&](int k) { return counter_normal(spec.seed, 0, k + 1, 0); });
  CHECK(std::fabs(rho_step) < 0.05);

  // Same step, adjacent trajectories.
  const double rho_traj = correlation(
      [&](int k) { return counter_normal(spec.seed, k, 7, 0); },
      [&](int k) { return counter_normal(spec.seed, k + 1, 7, 0); });
  CHECK(std::fabs(rho_traj) < 0.05);

  // Adjacent components.
  const double rho_comp = correlation(
      [&](int k) { return counter_normal(spec.seed, 3, k, 0); },
      [&](int k) { return counter_normal(spec.seed, 3, k, 1); });
  CHECK(std::fabs(rho_comp) < 0.05);
}

TEST_CASE("parameter validation") {
  NoiseSpec spec{1.0, 1.0, 1};
  CHECK_THROWS_AS(sample_perturbation(spec, 4, 0.0, 0, 0), std::invalid_argument);
  spec.p = 0.0;
  CHECK_THROWS_AS(sample_perturbation(spec, 4, 0.1, 0, 0), std::invalid_argument);
  spec.p = 1.0;
  spec.sigma = -1.0;
  CHECK_THROWS_AS(sample_perturbation(spec, 4, 0.1, 0, 0), std::invalid_argument);
}
