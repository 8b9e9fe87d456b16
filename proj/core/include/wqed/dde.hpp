#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace wqed::dde {

/// Dense solution history of one integration run with cubic Hermite
/// interpolation between nodes. Nodes lie on a uniform grid; each interval
/// stores the segment-consistent derivative at both ends, so interpolation
/// stays correct across the derivative jumps at multiples of the delay.
/// Evaluation at a node time reproduces the stored value exactly; times
/// before zero evaluate to the zero pre-history.
class HistoryBuffer {
public:
  HistoryBuffer(Eigen::Index dimension, double step, double delay);

  /// Appends the interval [t0, t0 + step]. `f0`/`f1` are the derivatives at
  /// the ends as seen from inside the interval's segment.
  void push_interval(double t0, const Eigen::VectorXcd& y0,
                     const Eigen::VectorXcd& f0, const Eigen::VectorXcd& y1,
                     const Eigen::VectorXcd& f1);

  Eigen::VectorXcd eval(double t) const;
  void eval_into(double t, Eigen::VectorXcd& out) const;

  Eigen::Index dimension() const { return dim_; }
  double step() const { return step_; }
  double delay() const { return delay_; }
  std::size_t sample_count() const;
  double sample_time(std::size_t i) const;
  const Eigen::VectorXcd& sample_value(std::size_t i) const;

private:
  Eigen::Index dim_;
  double step_;
  double delay_;
  // node i holds y(t_i); interval i holds the derivatives (f at t_i from the
  // right, f at t_{i+1} from the left)
  std::vector<Eigen::VectorXcd> values_;
  std::vector<Eigen::VectorXcd> deriv_right_;  // size = intervals
  std::vector<Eigen::VectorXcd> deriv_left_;   // size = intervals
};

/// Linear fixed-delay problem  dy/dt = A y(t) + B y(t - T) Θ(t - T),
/// with y ≡ 0 for t < 0 and y(0) given.
struct DdeProblem {
  Eigen::MatrixXcd instantaneous;  // A
  Eigen::MatrixXcd delayed;        // B
  double delay = 0.0;              // T ≥ 0
  Eigen::VectorXcd initial;        // y(0)

  Eigen::Index dimension() const { return initial.size(); }
  void validate() const;  // throws std::invalid_argument on shape/sign errors
};

struct DdeTrajectory {
  std::vector<double> times;  // uniform grid starting at 0
  std::vector<Eigen::VectorXcd> states;
  double dt = 0.0;  // effective step (may differ from the requested one)
};

/// Integrates the problem on [0, t_max] with classical RK4 using the method
/// of steps: the grid is aligned so every multiple of T is a node (dt is
/// adjusted to the nearest divisor of T), no step straddles a derivative
/// breakpoint, and delayed values are read from the history buffer. For
/// t < T the delayed term is skipped entirely, so that stretch is
/// bit-identical to integrating dy/dt = A y. T = 0 reduces to the ODE
/// dy/dt = (A + B) y.
///
/// Throws std::invalid_argument for nonpositive dt or malformed problems,
/// wqed::numerical_error when dt > T/10 (accuracy guard) or when the state
/// stops being finite.
DdeTrajectory integrate(const DdeProblem& problem, double t_max, double dt);

}  // namespace wqed::dde
