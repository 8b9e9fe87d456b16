#include "wqed/two_atom.hpp"

#include <cmath>
#include <stdexcept>

#include "wqed/dde.hpp"

namespace wqed::twoatom {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

using complex = std::complex<double>;

// cubic Lagrange interpolation of one amplitude series on its uniform grid;
// clamped 4-point stencil, exact at nodes
complex interp_amplitude(const std::vector<complex>& c, double dt, double t) {
  const auto n = static_cast<std::ptrdiff_t>(c.size());
  const double u = t / dt;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  double theta = u - static_cast<double>(i);
  if (theta > 1.0 - 1e-9) {
    ++i;
    theta = 0.0;
  }
  if (i < 0) {
    i = 0;
    theta = 0.0;
  }
  if (i > n - 1) {
    i = n - 1;
    theta = 0.0;
  }
  if (theta < 1e-9 || i >= n - 1) return c[static_cast<std::size_t>(std::min(i, n - 1))];
  if (n < 4) {  // degenerate short series: linear
    const auto j = static_cast<std::size_t>(i);
    return (1.0 - theta) * c[j] + theta * c[j + 1];
  }

  auto i0 = i - 1;
  if (i0 < 0) i0 = 0;
  if (i0 > n - 4) i0 = n - 4;
  const double s = u - static_cast<double>(i0);  // in [0,3] over the stencil
  // Lagrange weights for nodes 0..3
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  const auto b = static_cast<std::size_t>(i0);
  return w0 * c[b] + w1 * c[b + 1] + w2 * c[b + 2] + w3 * c[b + 3];
}

}  // namespace

TwoAtomParams TwoAtomParams::make(double gamma0, double beta, double delay,
                                  double phase_phi) {
  if (!(gamma0 > 0.0))
    throw std::invalid_argument("TwoAtomParams: gamma0 must be > 0 (use lossless() for gamma0 = 0)");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("TwoAtomParams: beta must lie in [0, 1); beta = 1 requires lossless()");
  if (!(delay >= 0.0)) throw std::invalid_argument("TwoAtomParams: delay must be >= 0");
  TwoAtomParams p;
  p.gamma0 = gamma0;
  p.beta = beta;
  p.delay = delay;
  p.phase_phi = phase_phi;
  p.gamma1d = beta * gamma0 / (1.0 - beta);
  p.gamma = gamma0 + p.gamma1d;
  return p;
}

TwoAtomParams TwoAtomParams::lossless(double gamma1d, double delay, double phase_phi) {
  if (!(gamma1d > 0.0)) throw std::invalid_argument("TwoAtomParams: gamma1d must be > 0");
  if (!(delay >= 0.0)) throw std::invalid_argument("TwoAtomParams: delay must be >= 0");
  TwoAtomParams p;
  p.gamma0 = 0.0;
  p.beta = 1.0;
  p.delay = delay;
  p.phase_phi = phase_phi;
  p.gamma1d = gamma1d;
  p.gamma = gamma1d;
  return p;
}

Trajectory evolve_dark_state(const TwoAtomParams& params, double t_max, double dt) {
  dde::DdeProblem problem;
  problem.instantaneous = -(params.gamma / 2.0) * Eigen::MatrixXcd::Identity(2, 2);
  const complex coupling =
      -(params.gamma * params.beta / 2.0) * std::exp(complex(0.0, params.phase_phi));
  problem.delayed = Eigen::MatrixXcd::Zero(2, 2);
  problem.delayed(0, 1) = coupling;
  problem.delayed(1, 0) = coupling;
  problem.delay = params.delay;
  problem.initial = Eigen::VectorXcd(2);
  problem.initial << complex(kInvSqrt2, 0.0), complex(-kInvSqrt2, 0.0);

  const dde::DdeTrajectory raw = dde::integrate(problem, t_max, dt);

  Trajectory traj;
  traj.dt = raw.dt;
  traj.times = raw.times;
  const std::size_t n = raw.states.size();
  traj.amp_a.resize(n);
  traj.amp_b.resize(n);
  traj.population.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    traj.amp_a[i] = raw.states[i][0];
    traj.amp_b[i] = raw.states[i][1];
    traj.population[i] = std::norm(traj.amp_a[i]) + std::norm(traj.amp_b[i]);
  }
  return traj;
}

std::complex<double> series_solution(const TwoAtomParams& params, double t) {
  if (params.phase_phi != 0.0)
    throw std::invalid_argument("series_solution: valid only for phi = 0");
  if (t < 0.0) return {0.0, 0.0};
  const double lambda = params.gamma / 2.0;
  if (params.delay == 0.0)
    return kInvSqrt2 * std::exp(-params.gamma * (1.0 - params.beta) * t / 2.0);
  const double a = params.gamma * params.beta / 2.0;
  const auto n_max = static_cast<long>(std::floor(t / params.delay));
  double sum = 0.0;
  double envelope = 1.0;  // (a t)^n / n!, bounds every remaining term
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) envelope *= a * t / static_cast<double>(n);
    const double tau = t - static_cast<double>(n) * params.delay;
    if (tau < 0.0) continue;  // guards floor() landing one past the kink
    // a^n tau^n / n! accumulated in log-free product form
    double term = 1.0;
    for (long k = 1; k <= n; ++k) term *= a * tau / static_cast<double>(k);
    sum += term * std::exp(-lambda * tau);
    // all terms are nonnegative and bounded by the Poisson envelope, so the
    // tail past 2at is below ~2 envelope; tiny delays need not run to n_max
    if (static_cast<double>(n) >= 2.0 * a * t + 2.0 && envelope < 1e-18 * sum) break;
  }
  return {kInvSqrt2 * sum, 0.0};
}

std::vector<double> population(const Trajectory& traj) {
  std::vector<double> p(traj.amp_a.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::norm(traj.amp_a[i]) + std::norm(traj.amp_b[i]);
  return p;
}

double field_intensity(const TwoAtomParams& params, const Trajectory& traj,
                       double x, double t) {
  if (traj.times.empty()) throw std::invalid_argument("field_intensity: empty trajectory");
  if (t < 0.0) return 0.0;
  if (t > traj.times.back() + 1e-9 * traj.dt)
    throw std::invalid_argument("field_intensity: t exceeds the trajectory range");

  // emitter A at x = 0, emitter B at x = delay (v_g = 1); carrier phase per
  // unit length chosen so the inter-emitter leg accumulates exactly phi
  const double x_a = 0.0;
  const double x_b = params.delay;
  const double k_phase = (params.delay > 0.0) ? params.phase_phi / params.delay : 0.0;
  const double amp_scale = std::sqrt(params.gamma1d / 2.0);

  complex e_right{0.0, 0.0};
  complex e_left{0.0, 0.0};
  const struct {
    double pos;
    const std::vector<complex>* amps;
  } emitters[2] = {{x_a, &traj.amp_a}, {x_b, &traj.amp_b}};

  for (const auto& em : emitters) {
    const double d_right = x - em.pos;
    if (d_right >= 0.0 && t - d_right >= 0.0) {
      const complex c = interp_amplitude(*em.amps, traj.dt, t - d_right);
      e_right += c * std::exp(complex(0.0, k_phase * d_right));
    }
    const double d_left = em.pos - x;
    if (d_left >= 0.0 && t - d_left >= 0.0) {
      const complex c = interp_amplitude(*em.amps, traj.dt, t - d_left);
      e_left += c * std::exp(complex(0.0, k_phase * d_left));
    }
  }
  return amp_scale * amp_scale * (std::norm(e_right) + std::norm(e_left));
}

FieldGrid field_intensity_map(const TwoAtomParams& params, const Trajectory& traj,
                              std::span<const double> x_grid,
                              std::span<const double> t_grid) {
  FieldGrid grid;
  grid.x.assign(x_grid.begin(), x_grid.end());
  grid.t.assign(t_grid.begin(), t_grid.end());
  grid.intensity.resize(static_cast<Eigen::Index>(t_grid.size()),
                        static_cast<Eigen::Index>(x_grid.size()));
  for (std::size_t it = 0; it < t_grid.size(); ++it)
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix)
      grid.intensity(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ix)) =
          field_intensity(params, traj, x_grid[ix], t_grid[it]);
  return grid;
}

std::vector<double> default_field_x_grid(const TwoAtomParams& params) {
  const double span_unit = params.delay > 0.0 ? params.delay : 1.0;
  const double lo = -2.0 * span_unit;
  const double hi = 3.0 * span_unit;
  const int n = 801;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return x;
}

std::vector<double> default_field_t_grid(const Trajectory& traj) {
  const std::size_t max_rows = 600;
  const std::size_t n = traj.times.size();
  const std::size_t stride = (n + max_rows - 1) / max_rows;
  std::vector<double> t;
  for (std::size_t i = 0; i < n; i += stride) t.push_back(traj.times[i]);
  return t;
}

}  // namespace wqed::twoatom
