#include "wqed/analysis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wqed/errors.hpp"

namespace wqed::analysis {

namespace {

void check_positive(std::span<const double> population, const char* who) {
  for (double p : population) {
    if (!(p > 0.0)) {
      std::ostringstream msg;
      msg << who << ": population must be strictly positive (ln undefined)";
      throw std::invalid_argument(msg.str());
    }
  }
}

// slope and intercept of y over x by ordinary least squares
std::pair<double, double> ols(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx == 0.0 ? 0.0 : sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

std::vector<double> decay_rate_curve(std::span<const double> population,
                                     std::span<const double> times,
                                     int smooth_window) {
  if (population.size() != times.size())
    throw std::invalid_argument("decay_rate_curve: series length mismatch");
  if (population.size() < 3)
    throw std::invalid_argument("decay_rate_curve: need at least 3 samples");
  if (smooth_window < 1 || smooth_window % 2 == 0)
    throw std::invalid_argument("decay_rate_curve: smooth_window must be odd and >= 1");
  check_positive(population, "decay_rate_curve");

  const std::size_t n = population.size();
  std::vector<double> lnp(n);
  for (std::size_t i = 0; i < n; ++i) lnp[i] = std::log(population[i]);

  std::vector<double> rate(n);
  rate[0] = -(lnp[1] - lnp[0]) / (times[1] - times[0]);
  rate[n - 1] = -(lnp[n - 1] - lnp[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    rate[i] = -(lnp[i + 1] - lnp[i - 1]) / (times[i + 1] - times[i - 1]);

  if (smooth_window == 1) return rate;

  const int half = smooth_window / 2;
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half));
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half));
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += rate[j];
    smooth[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return smooth;
}

FitResult fit_exponential(std::span<const double> population,
                          std::span<const double> times, double window_start,
                          double window_end) {
  if (population.size() != times.size())
    throw std::invalid_argument("fit_exponential: series length mismatch");
  if (!(window_start < window_end))
    throw std::invalid_argument("fit_exponential: window_start must be < window_end");

  std::vector<double> tx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window_start || times[i] > window_end) continue;
    if (!(population[i] > 0.0))
      throw std::invalid_argument("fit_exponential: population must be positive on the window");
    tx.push_back(times[i]);
    ly.push_back(std::log(population[i]));
  }
  if (tx.size() < 10) {
    std::ostringstream msg;
    msg << "fit_exponential: only " << tx.size() << " samples in [" << window_start
        << ", " << window_end << "], need at least 10";
    throw std::invalid_argument(msg.str());
  }

  const auto [slope, intercept] = ols(tx, ly);

  double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
  for (double v : ly) mean += v;
  mean /= static_cast<double>(ly.size());
  for (std::size_t i = 0; i < ly.size(); ++i) {
    const double fit = slope * tx[i] + intercept;
    ss_res += (ly[i] - fit) * (ly[i] - fit);
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }

  FitResult result;
  result.gamma_fit = -slope;
  result.window_start = window_start;
  result.window_end = window_end;
  result.n_points = static_cast<int>(tx.size());
  result.r_squared = ss_tot == 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
  if (!std::isfinite(result.gamma_fit))
    throw numerical_error("fit_exponential: non-finite fitted rate");
  return result;
}

double centroid_velocity(const Eigen::MatrixXd& photon_prob,
                         std::span<const double> times) {
  const auto nt = static_cast<std::size_t>(photon_prob.cols());
  if (nt != times.size())
    throw std::invalid_argument("centroid_velocity: time count mismatch");
  if (nt < 10) throw std::invalid_argument("centroid_velocity: need at least 10 samples");
  const Eigen::Index n = photon_prob.rows();

  constexpr double edge_tolerance = 1e-6;
  std::vector<double> centroid(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    const auto col = photon_prob.col(static_cast<Eigen::Index>(i));
    const double total = col.sum();
    if (!(total > 0.0))
      throw std::invalid_argument("centroid_velocity: empty photon column");
    if (col[0] + col[n - 1] > edge_tolerance * total)
      throw numerical_error("centroid_velocity: packet reached the lattice edge inside the fit window");
    double first_moment = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
      first_moment += static_cast<double>(x + 1) * col[x];
    centroid[i] = first_moment / total;
  }
  const auto [slope, intercept] = ols(times, centroid);
  (void)intercept;
  return slope;
}

}  // namespace wqed::analysis
