#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wqed::analysis {

struct FitResult {
  double gamma_fit = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

/// Instantaneous decay rate -d/dt ln P: central differences in the interior,
/// one-sided at the ends, then moving-average smoothing over `smooth_window`
/// points (odd, >= 1; truncated at the ends). Throws on nonpositive P.
std::vector<double> decay_rate_curve(std::span<const double> population,
                                     std::span<const double> times,
                                     int smooth_window = 5);

/// Ordinary least squares on (t, ln P) inside [window_start, window_end];
/// gamma_fit = -slope. Needs at least 10 samples in the window.
FitResult fit_exponential(std::span<const double> population,
                          std::span<const double> times, double window_start,
                          double window_end);

/// Slope of the photon centroid <x>(t) = sum_x x |c_x|^2 / sum_x |c_x|^2,
/// fitted over all provided samples. `photon_prob` holds |c_x|^2 with sites
/// (1-based coordinates) in rows and times in columns. Throws if the packet
/// touches the chain ends within the fit window.
double centroid_velocity(const Eigen::MatrixXd& photon_prob,
                         std::span<const double> times);

}  // namespace wqed::analysis
