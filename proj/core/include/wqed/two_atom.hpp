#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wqed::twoatom {

/// Parameters of the two-emitter continuum-waveguide model. Units: rates in
/// inverse time, the group velocity is 1, so the emitter separation equals
/// the retardation (emitter A sits at x = 0, emitter B at x = delay).
struct TwoAtomParams {
  double gamma0 = 1.0;     // local (free-space) decay rate
  double beta = 0.0;       // coupling efficiency gamma1d / gamma
  double delay = 0.0;      // photon travel time T between the emitters
  double phase_phi = 0.0;  // propagation phase, enters as e^{i phi}
  double gamma1d = 0.0;    // guided-mode decay rate (derived)
  double gamma = 0.0;      // total single-emitter rate gamma0 + gamma1d

  /// Standard lossy mode: gamma0 > 0, 0 <= beta < 1.
  static TwoAtomParams make(double gamma0, double beta, double delay,
                            double phase_phi = 0.0);

  /// Lossless diagnostic mode: gamma0 = 0, beta = 1, guided rate given
  /// directly. The only way to construct beta = 1.
  static TwoAtomParams lossless(double gamma1d, double delay,
                                double phase_phi = 0.0);
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> amp_a;  // cA(t)
  std::vector<std::complex<double>> amp_b;  // cB(t)
  std::vector<double> population;           // |cA|^2 + |cB|^2
  double dt = 0.0;
};

/// Space-time intensity map I(x, t) >= 0 of the guided field,
/// rows indexed by t, columns by x.
struct FieldGrid {
  std::vector<double> x;
  std::vector<double> t;
  Eigen::MatrixXd intensity;
};

/// Evolves the dark state cA(0) = 1/sqrt(2), cB(0) = -1/sqrt(2) under the
/// retarded pair equations dc_i/dt = -(gamma/2)[c_i + beta e^{i phi}
/// c_j(t - T) Θ(t - T)].
Trajectory evolve_dark_state(const TwoAtomParams& params, double t_max, double dt);

/// Closed-form method-of-steps solution of the antisymmetric reduction
/// (requires phi = 0):  c(t) = sum_{n=0}^{floor(t/T)} (gamma beta/2)^n
/// (t - nT)^n / n! * e^{-gamma (t - nT)/2} * c(0)  with c(0) = 1/sqrt(2).
/// For T = 0 the series degenerates and the closed form
/// c(t) = e^{-gamma (1-beta) t / 2} c(0) is returned instead.
std::complex<double> series_solution(const TwoAtomParams& params, double t);

/// Elementwise |cA|^2 + |cB|^2.
std::vector<double> population(const Trajectory& traj);

/// Guided-field intensity at one space-time point, reconstructed from the
/// retarded emitter amplitudes (right- plus left-moving envelope power).
/// Exactly zero outside both light cones.
double field_intensity(const TwoAtomParams& params, const Trajectory& traj,
                       double x, double t);

/// Intensity map sampled on the given grids. The trajectory must cover
/// max(t_grid); amplitudes at off-node retarded times are read by cubic
/// interpolation.
FieldGrid field_intensity_map(const TwoAtomParams& params, const Trajectory& traj,
                              std::span<const double> x_grid,
                              std::span<const double> t_grid);

/// Default map grids: 801 x-points on [-2T, 3T]; trajectory times subsampled
/// to at most 600 rows.
std::vector<double> default_field_x_grid(const TwoAtomParams& params);
std::vector<double> default_field_t_grid(const Trajectory& traj);

}  // namespace wqed::twoatom
