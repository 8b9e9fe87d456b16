#include <cmath>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "wqed/analysis.hpp"
#include "wqed/errors.hpp"
#include "wqed/spectral.hpp"
#include "wqed/two_atom.hpp"

using namespace wqed::analysis;

namespace {

std::pair<std::vector<double>, std::vector<double>> sampled_exponential(
    double amplitude, double rate, double t_max, double dt) {
  std::vector<double> times, pop;
  for (double t = 0.0; t <= t_max + 1e-12; t += dt) {
    times.push_back(t);
    pop.push_back(amplitude * std::exp(-rate * t));
  }
  return {times, pop};
}

}  // namespace

TEST_CASE("decay rate of an exact exponential is flat") {
  const auto [times, pop] = sampled_exponential(1.0, 2.0, 4.0, 1e-3);
  const auto rate = decay_rate_curve(pop, times, 5);
  for (double g : rate) CHECK(std::abs(g - 2.0) <= 1e-6);
}

TEST_CASE("decay rate input validation") {
  const auto [times, pop] = sampled_exponential(1.0, 1.0, 1.0, 0.1);
  CHECK_THROWS_AS(decay_rate_curve(pop, times, 4), std::invalid_argument);
  CHECK_THROWS_AS(decay_rate_curve(pop, times, -1), std::invalid_argument);
  auto bad = pop;
  bad[3] = 0.0;
  CHECK_THROWS_AS(decay_rate_curve(bad, times, 5), std::invalid_argument);
  std::vector<double> short_t{0.0, 0.1};
  std::vector<double> short_p{1.0, 0.9};
  CHECK_THROWS_AS(decay_rate_curve(short_p, short_t, 1), std::invalid_argument);
}

TEST_CASE("exponential fit recovers rate and reports r^2") {
  const auto [times, pop] = sampled_exponential(3.0, 0.7, 10.0, 0.01);
  const auto fit = fit_exponential(pop, times, 0.0, 10.0);
  CHECK(fit.gamma_fit == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit.r_squared > 0.999999);
  CHECK(fit.n_points == static_cast<int>(times.size()));

  // scale invariance: slope of a log
  auto scaled = pop;
  for (double& v : scaled) v *= 2.5;
  const auto fit2 = fit_exponential(scaled, times, 0.0, 10.0);
  CHECK(fit2.gamma_fit == doctest::Approx(fit.gamma_fit).epsilon(1e-12));
}

TEST_CASE("exponential fit guards") {
  const auto [times, pop] = sampled_exponential(1.0, 1.0, 10.0, 0.5);
  CHECK_THROWS_AS(fit_exponential(pop, times, 9.0, 9.4), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponential(pop, times, 4.0, 2.0), std::invalid_argument);
  auto bad = pop;
  bad[5] = -1.0;
  CHECK_THROWS_AS(fit_exponential(bad, times, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("two-emitter run: gamma inferred per window matches theory") {
  const auto params = wqed::twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const auto traj = wqed::twoatom::evolve_dark_state(params, 8.0, 1e-3);

  // flat at gamma = 2 before the photon arrives (kink at t = T excluded)
  const auto rate = decay_rate_curve(traj.population, traj.times, 5);
  for (std::size_t i = 10; i < traj.times.size(); ++i) {
    if (traj.times[i] >= 0.99) break;
    CHECK(std::abs(rate[i] - 2.0) <= 1e-3);
  }

  // suppressed late window agrees with the dominant characteristic root
  const double spectral =
      wqed::spectral::dominant_decay_rate(wqed::spectral::characteristic_roots(params, 3));
  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < 5.0 || traj.times[i] > 8.0) continue;
    mean += rate[i];
    ++n;
  }
  mean /= static_cast<double>(n);
  CHECK(mean < 1.0);
  CHECK(std::abs(mean - spectral) / spectral <= 0.02);
}

TEST_CASE("centroid velocity of a rigidly moving profile") {
  const int n_sites = 200;
  const int nt = 50;
  Eigen::MatrixXd prob = Eigen::MatrixXd::Zero(n_sites, nt);
  std::vector<double> times(nt);
  for (int i = 0; i < nt; ++i) {
    times[static_cast<std::size_t>(i)] = 0.1 * i;
    const double center = 40.0 + 3.0 * times[static_cast<std::size_t>(i)];
    for (int x = 0; x < n_sites; ++x) {
      const double d = (x + 1) - center;
      prob(x, i) = std::exp(-d * d / 18.0);
    }
  }
  CHECK(std::abs(centroid_velocity(prob, times) - 3.0) <= 1e-6);
}

TEST_CASE("centroid velocity refuses packets touching the boundary") {
  const int n_sites = 60;
  const int nt = 12;
  Eigen::MatrixXd prob = Eigen::MatrixXd::Zero(n_sites, nt);
  std::vector<double> times(nt);
  for (int i = 0; i < nt; ++i) {
    times[static_cast<std::size_t>(i)] = 0.5 * i;
    const double center = 40.0 + 4.0 * times[static_cast<std::size_t>(i)];
    for (int x = 0; x < n_sites; ++x) {
      const double d = (x + 1) - center;
      prob(x, i) = std::exp(-d * d / 8.0);
    }
  }
  CHECK_THROWS_AS(centroid_velocity(prob, times), wqed::numerical_error);
}
