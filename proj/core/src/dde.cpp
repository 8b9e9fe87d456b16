#include "wqed/dde.hpp"

#include <cmath>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed::dde {

namespace {

bool all_finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace

HistoryBuffer::HistoryBuffer(Eigen::Index dimension, double step, double delay)
    : dim_(dimension), step_(step), delay_(delay) {
  if (dimension < 1) throw std::invalid_argument("HistoryBuffer: dimension must be >= 1");
  if (step <= 0.0) throw std::invalid_argument("HistoryBuffer: step must be positive");
}

void HistoryBuffer::push_interval(double t0, const Eigen::VectorXcd& y0,
                                  const Eigen::VectorXcd& f0,
                                  const Eigen::VectorXcd& y1,
                                  const Eigen::VectorXcd& f1) {
  if (values_.empty()) {
    if (std::abs(t0) > 1e-12 * step_)
      throw std::invalid_argument("HistoryBuffer: first interval must start at t = 0");
    values_.push_back(y0);
  }
  values_.push_back(y1);
  deriv_right_.push_back(f0);
  deriv_left_.push_back(f1);
}

std::size_t HistoryBuffer::sample_count() const { return values_.size(); }

double HistoryBuffer::sample_time(std::size_t i) const { return static_cast<double>(i) * step_; }

const Eigen::VectorXcd& HistoryBuffer::sample_value(std::size_t i) const { return values_.at(i); }

Eigen::VectorXcd HistoryBuffer::eval(double t) const {
  Eigen::VectorXcd out(dim_);
  eval_into(t, out);
  return out;
}

void HistoryBuffer::eval_into(double t, Eigen::VectorXcd& out) const {
  if (t < 0.0) {  // vacuum pre-history
    out.setZero(dim_);
    return;
  }
  if (deriv_right_.empty()) throw std::invalid_argument("HistoryBuffer: empty");
  const auto n_intervals = static_cast<std::ptrdiff_t>(deriv_right_.size());
  const double u = t / step_;
  auto idx = static_cast<std::ptrdiff_t>(std::floor(u));
  double theta = u - static_cast<double>(idx);
  // snap to the node when the query is a stored sample time up to rounding
  if (theta > 1.0 - 1e-9) {
    ++idx;
    theta = 0.0;
  }
  if (idx < 0) {
    idx = 0;
    theta = 0.0;
  }
  const auto max_node = static_cast<std::ptrdiff_t>(values_.size()) - 1;
  if (idx > max_node) {
    idx = max_node;
    theta = 0.0;
  }
  if (theta < 1e-9) {
    out = values_[static_cast<std::size_t>(idx)];
    return;
  }
  if (idx >= n_intervals) idx = n_intervals - 1;
  // cubic Hermite basis on [0, 1]
  const double th2 = theta * theta;
  const double th3 = th2 * theta;
  const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
  const double h10 = th3 - 2.0 * th2 + theta;
  const double h01 = -2.0 * th3 + 3.0 * th2;
  const double h11 = th3 - th2;
  const auto i = static_cast<std::size_t>(idx);
  out = h00 * values_[i] + (h10 * step_) * deriv_right_[i] + h01 * values_[i + 1] +
        (h11 * step_) * deriv_left_[i];
}

void DdeProblem::validate() const {
  const Eigen::Index n = dimension();
  if (n < 1) throw std::invalid_argument("DdeProblem: dimension must be >= 1");
  if (instantaneous.rows() != n || instantaneous.cols() != n)
    throw std::invalid_argument("DdeProblem: instantaneous matrix must be square of the state dimension");
  if (delayed.rows() != n || delayed.cols() != n)
    throw std::invalid_argument("DdeProblem: delayed matrix must be square of the state dimension");
  if (!(delay >= 0.0)) throw std::invalid_argument("DdeProblem: delay must be >= 0");
}

DdeTrajectory integrate(const DdeProblem& problem, double t_max, double dt) {
  problem.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("integrate: t_max must be positive");

  const double T = problem.delay;
  const bool has_delay = T > 0.0 && !problem.delayed.isZero(0.0);

  // Accuracy guard, and grid alignment so that every multiple of T is a node.
  double h = dt;
  long steps_per_segment = 0;
  if (T > 0.0) {
    if (dt > T / 10.0 * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "integrate: accuracy guard requires dt <= T/10 (dt = " << dt << ", T = " << T << ")";
      throw numerical_error(msg.str());
    }
    steps_per_segment = std::lround(T / dt);
    h = T / static_cast<double>(steps_per_segment);
  }

  // For T = 0 the Heaviside factor is identically one: fold B into A.
  Eigen::MatrixXcd a_eff = problem.instantaneous;
  if (T == 0.0) a_eff += problem.delayed;
  const Eigen::MatrixXcd& b = problem.delayed;

  const auto n_steps = static_cast<long>(std::ceil(t_max / h - 1e-9));
  const Eigen::Index dim = problem.dimension();

  HistoryBuffer history(dim, h, T);
  DdeTrajectory traj;
  traj.dt = h;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(problem.initial);

  Eigen::VectorXcd y = problem.initial;
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), ynext(dim), hist(dim);

  // derivative as seen from inside segment `seg` (delay term active for seg >= 1)
  const auto deriv = [&](double t, const Eigen::VectorXcd& state, long seg,
                         Eigen::VectorXcd& out) {
    out.noalias() = a_eff * state;
    if (has_delay && seg >= 1) {
      history.eval_into(t - T, hist);
      out.noalias() += b * hist;
    }
  };

  for (long n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const long seg = (T > 0.0) ? n / steps_per_segment : 0;

    deriv(t, y, seg, k1);
    stage = y + (0.5 * h) * k1;
    deriv(t + 0.5 * h, stage, seg, k2);
    stage = y + (0.5 * h) * k2;
    deriv(t + 0.5 * h, stage, seg, k3);
    stage = y + h * k3;
    deriv(t + h, stage, seg, k4);
    ynext = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!all_finite(ynext)) {
      std::ostringstream msg;
      msg << "integrate: non-finite state at t = " << t + h << " (divergence)";
      throw numerical_error(msg.str());
    }

    // left-limit derivative at the interval end, same segment
    deriv(t + h, ynext, seg, k2);
    history.push_interval(t, y, k1, ynext, k2);

    y.swap(ynext);
    traj.times.push_back(static_cast<double>(n + 1) * h);
    traj.states.push_back(y);
  }
  return traj;
}

}  // namespace wqed::dde
