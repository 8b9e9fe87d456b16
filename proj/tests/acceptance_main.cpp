// Acceptance suite: end-to-end checks of the headline physics and the CLI
// contract, one printed line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "wqed/analysis.hpp"
#include "wqed/lattice.hpp"
#include "wqed/spectral.hpp"
#include "wqed/two_atom.hpp"

namespace fs = std::filesystem;
using namespace wqed;

namespace {

int failures = 0;

class Criterion {
public:
  Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    if (!ok && detail_.empty()) detail_ = detail;
  }

  void require_runtime_below(double seconds) { runtime_bound_ = seconds; }

  ~Criterion() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (runtime_bound_ > 0.0 && elapsed >= runtime_bound_) {
      ok_ = false;
      if (detail_.empty())
        detail_ = "runtime " + std::to_string(elapsed) + " s exceeds bound";
    }
    std::printf("[%s] %02d  %-58s (%.2f s)%s%s\n", ok_ ? "PASS" : "FAIL", number_,
                title_.c_str(), elapsed, detail_.empty() ? "" : "  -- ",
                detail_.c_str());
    std::fflush(stdout);
    if (!ok_) ++failures;
  }

private:
  int number_;
  std::string title_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::string detail_;
  double runtime_bound_ = 0.0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double late_fit(const twoatom::TwoAtomParams& p, double t_mult_lo = 5.0,
                double t_mult_hi = 8.0) {
  const auto traj = twoatom::evolve_dark_state(p, t_mult_hi * p.delay, 1e-3);
  return analysis::fit_exponential(traj.population, traj.times, t_mult_lo * p.delay,
                                   t_mult_hi * p.delay)
      .gamma_fit;
}

void criterion_1_pre_arrival() {
  Criterion c(1, "pre-arrival decay at the full pair rate");
  c.require_runtime_below(1.0);
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const auto traj = twoatom::evolve_dark_state(p, 0.99, 1e-3);
  double max_err = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    max_err = std::max(max_err,
                       std::abs(traj.population[i] - std::exp(-2.0 * traj.times[i])));
  c.check(max_err <= 1e-6, "max|P - e^{-2t}| = " + fmt(max_err));
}

void criterion_2_markovian_limit() {
  Criterion c(2, "dominant rate approaches gamma0 as T -> 0");
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1e-6);
  const double rate = spectral::dominant_decay_rate(spectral::characteristic_roots(p, 3));
  c.check(std::abs(rate - 1.0) <= 1e-4, "Gamma = " + fmt(rate));
}

void criterion_3_small_t_formula() {
  Criterion c(3, "small-T rate formula within 1% (15% at gamma1d T = 1)");
  for (double t : {0.01, 0.05, 0.1}) {
    const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, t);  // gamma1d = 1
    const double exact = spectral::dominant_decay_rate(spectral::characteristic_roots(p, 3));
    const double approx = spectral::asymptotic_rate(p);
    c.check(std::abs(exact - approx) / exact <= 0.01,
            "gamma1d T = " + fmt(t) + ": rel diff " + fmt(std::abs(exact - approx) / exact));
  }
  const auto p1 = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const double exact = spectral::dominant_decay_rate(spectral::characteristic_roots(p1, 3));
  const double rel = std::abs(exact - spectral::asymptotic_rate(p1)) / exact;
  c.check(rel <= 0.15, "gamma1d T = 1: rel diff " + fmt(rel));
}

void criterion_4_suppression_below_gamma0() {
  Criterion c(4, "late decay below gamma0, monotone in beta and T");
  c.require_runtime_below(10.0);
  double prev = 1e9;
  for (double beta : {0.2, 0.5, 0.8}) {
    const double rate = late_fit(twoatom::TwoAtomParams::make(1.0, beta, 1.0));
    c.check(rate < 1.0, "beta = " + fmt(beta) + ": Gamma = " + fmt(rate));
    c.check(rate < prev, "not monotone in beta at beta = " + fmt(beta));
    prev = rate;
  }
  prev = 1e9;
  for (double delay : {0.5, 1.0, 2.0}) {
    const double rate = late_fit(twoatom::TwoAtomParams::make(1.0, 0.5, delay));
    c.check(rate < 1.0, "T = " + fmt(delay) + ": Gamma = " + fmt(rate));
    c.check(rate < prev, "not monotone in T at T = " + fmt(delay));
    prev = rate;
  }
}

void criterion_5_series_oracle() {
  Criterion c(5, "integrator vs method-of-steps series <= 1e-8 relative");
  for (double beta : {0.2, 0.5, 0.8}) {
    for (double delay : {0.5, 1.0, 2.0}) {
      const auto p = twoatom::TwoAtomParams::make(1.0, beta, delay);
      const auto traj = twoatom::evolve_dark_state(p, 10.0 * delay, 1e-3);
      double max_rel = 0.0;
      for (std::size_t i = 0; i < traj.times.size(); i += 3) {
        const auto expect = twoatom::series_solution(p, traj.times[i]);
        max_rel = std::max(max_rel,
                           std::abs(traj.amp_a[i] - expect) / std::abs(expect));
      }
      c.check(max_rel <= 1e-8,
              "beta " + fmt(beta) + ", T " + fmt(delay) + ": rel " + fmt(max_rel));
    }
  }
}

void criterion_6_field_conservation() {
  Criterion c(6, "lossless field map conserves probability, causality exact");
  const auto p = twoatom::TwoAtomParams::lossless(1.0, 1.0);
  const double dt = 1e-3;
  const auto traj = twoatom::evolve_dark_state(p, 5.0, dt);
  for (double t : {1.0, 2.0, 3.0, 5.0}) {
    const auto lo_cells = static_cast<long>(std::lround((t + 0.05) / dt));
    const double lo = -static_cast<double>(lo_cells) * dt;
    const double hi = p.delay + t + 0.05;
    const auto cells = static_cast<long>(std::lround((hi - lo) / dt));
    double integral = 0.0;
    for (long i = 0; i < cells; ++i)
      integral += twoatom::field_intensity(p, traj, lo + (i + 0.5) * dt, t);
    integral *= dt;
    const auto idx = static_cast<std::size_t>(std::lround(t / traj.dt));
    const double total = traj.population[idx] + integral;
    c.check(std::abs(total - 1.0) <= 1e-3, "t = " + fmt(t) + ": P + |E|^2 = " + fmt(total));
  }
  c.check(twoatom::field_intensity(p, traj, -2.0, 1.5) == 0.0, "left cone leak");
  c.check(twoatom::field_intensity(p, traj, 3.8, 2.5) == 0.0, "right cone leak");
  c.check(twoatom::field_intensity(p, traj, 0.5, 0.2) == 0.0, "interior pre-arrival leak");
}

void criterion_7_field_confinement() {
  Criterion c(7, "post-feedback field confined between the emitters");
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const auto traj = twoatom::evolve_dark_state(p, 4.0, 1e-3);
  const auto x_grid = twoatom::default_field_x_grid(p);
  const auto t_grid = twoatom::default_field_t_grid(traj);
  const auto grid = twoatom::field_intensity_map(p, traj, x_grid, t_grid);

  double peak_interior = 0.0;
  for (Eigen::Index r = 0; r < grid.intensity.rows(); ++r)
    for (Eigen::Index cx = 0; cx < grid.intensity.cols(); ++cx)
      if (grid.x[static_cast<std::size_t>(cx)] > 0.0 &&
          grid.x[static_cast<std::size_t>(cx)] < p.delay)
        peak_interior = std::max(peak_interior, grid.intensity(r, cx));

  std::size_t row = 0;
  for (std::size_t i = 0; i < grid.t.size(); ++i)
    if (std::abs(grid.t[i] - 3.0) < std::abs(grid.t[row] - 3.0)) row = i;
  double mean_outside = 0.0;
  std::size_t count = 0;
  for (std::size_t cx = 0; cx < grid.x.size(); ++cx) {
    if (grid.x[cx] > 0.0 && grid.x[cx] < p.delay) continue;
    mean_outside += grid.intensity(static_cast<Eigen::Index>(row),
                                   static_cast<Eigen::Index>(cx));
    ++count;
  }
  mean_outside /= static_cast<double>(count);
  c.check(mean_outside <= 0.05 * peak_interior,
          "outside/interior = " + fmt(mean_outside / peak_interior));
}

void criterion_8_lattice_markovian_rate() {
  Criterion c(8, "chain emission rate g^2/J before feedback");
  c.require_runtime_below(30.0);
  lattice::CavityParams p;
  p.n_sites = 201;
  p.tunneling = 1.0;
  p.site_a = 96;
  p.site_b = 106;
  p.g_a = 0.2;
  p.g_b = 2.0;
  p.gamma0 = 0.0;
  const auto traj = lattice::evolve(p, lattice::InitialState::single_atom(), 10.0, 0.01);
  const auto fit =
      analysis::fit_exponential(traj.population_a(), traj.times, 0.0, 8.0);
  c.check(std::abs(fit.gamma_fit - 0.04) / 0.04 <= 0.10,
          "fitted " + fmt(fit.gamma_fit) + " vs 0.04");
}

void criterion_9_group_velocity() {
  Criterion c(9, "wave-packet centroid speed matches the dispersion");
  lattice::CavityParams p;
  p.n_sites = 401;
  p.tunneling = 1.0;
  p.site_a = 101;
  p.site_b = 301;
  p.g_a = 0.0;
  p.g_b = 0.0;
  const double pi = 3.14159265358979323846;
  const auto speed = [&](double k0) {
    const auto traj = lattice::evolve(
        p, lattice::InitialState::photon_packet(k0, 0.1, 100), 50.0, 0.01, 10);
    return analysis::centroid_velocity(traj.photon_probabilities(), traj.times);
  };
  const double v_half = speed(pi / 2);
  c.check(std::abs(v_half - 2.0) / 2.0 <= 0.02, "k0 = pi/2: v = " + fmt(v_half));
  const double v_quarter = speed(pi / 4);
  c.check(std::abs(v_quarter - std::sqrt(2.0)) / std::sqrt(2.0) <= 0.02,
          "k0 = pi/4: v = " + fmt(v_quarter));
}

struct LatticeRates {
  double early;
  double late;
};

LatticeRates lattice_rates(double g_a, int delta_x, int n_a,
                           lattice::InitialState init) {
  const double t_horizon = 4.0 * delta_x;
  const auto p = lattice::CavityParams::resonant_pair(1.0, delta_x, t_horizon, g_a, 2.0,
                                                      n_a, 1, 0.05);
  const double delay = lattice::round_trip_time(p);
  const auto traj = lattice::evolve(p, init, t_horizon, 0.01, 4);
  const auto pop = traj.population_a();
  return {analysis::fit_exponential(pop, traj.times, 0.0, 0.8 * delay).gamma_fit,
          analysis::fit_exponential(pop, traj.times, 2.0 * delay, 3.0 * delay).gamma_fit};
}

void criterion_10_lattice_suppression() {
  Criterion c(10, "lattice suppression below gamma0 and ensemble ordering");
  c.require_runtime_below(300.0);
  const auto single = lattice::InitialState::single_atom();
  const auto sup = lattice::InitialState::superradiant();
  constexpr double gamma0 = 0.05;

  const auto r0210 = lattice_rates(0.2, 10, 1, single);
  const auto r0220 = lattice_rates(0.2, 20, 1, single);
  const auto r0410 = lattice_rates(0.4, 10, 1, single);
  const auto r0420 = lattice_rates(0.4, 20, 1, single);
  for (const auto* r : {&r0210, &r0220, &r0410, &r0420})
    c.check(r->late < gamma0, "late rate " + fmt(r->late) + " not below gamma0");
  c.check(r0410.late < r0210.late && r0420.late < r0220.late, "not monotone in g_A");
  c.check(r0220.late < r0210.late && r0420.late < r0410.late, "not monotone in delta_x");

  const auto sa4 = lattice_rates(0.2, 10, 4, single);
  const auto sup4 = lattice_rates(0.2, 10, 4, sup);
  c.check(sa4.early < r0210.early,
          "4-atom single excitation early rate " + fmt(sa4.early) + " vs " +
              fmt(r0210.early));
  c.check(sup4.early > r0210.early,
          "superradiant early rate " + fmt(sup4.early) + " vs " + fmt(r0210.early));
  c.check(sup4.late < r0210.late,
          "superradiant late rate " + fmt(sup4.late) + " vs " + fmt(r0210.late));
}

void criterion_11_standing_wave_nodes() {
  Criterion c(11, "emitters sit at the nodes of the late-time photon wave");
  const auto p = lattice::CavityParams::resonant_pair(1.0, 10, 40.0, 0.2, 2.0, 1, 1, 0.05);
  const auto traj = lattice::evolve(p, lattice::InitialState::single_atom(), 40.0, 0.01, 4);
  const auto prob = traj.photon_probabilities();
  const double delay = lattice::round_trip_time(p);

  Eigen::VectorXd avg = Eigen::VectorXd::Zero(p.n_sites);
  int count = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] <= 2.0 * delay) continue;
    avg += prob.col(static_cast<Eigen::Index>(i));
    ++count;
  }
  avg /= count;
  double interior_peak = 0.0;
  for (int x = p.site_a + 1; x < p.site_b; ++x)
    interior_peak = std::max(interior_peak, avg[x - 1]);
  c.check(avg[p.site_a - 1] <= 0.05 * interior_peak,
          "node at x_A carries " + fmt(avg[p.site_a - 1] / interior_peak));
  c.check(avg[p.site_b - 1] <= 0.05 * interior_peak,
          "node at x_B carries " + fmt(avg[p.site_b - 1] / interior_peak));
}

void criterion_12_lattice_oracle() {
  Criterion c(12, "rk evolution vs exact diagonalization <= 1e-6");
  const auto p = lattice::CavityParams::resonant_pair(1.0, 10, 40.0, 0.2, 2.0, 1, 1, 0.05);
  const auto traj = lattice::evolve(p, lattice::InitialState::single_atom(), 40.0, 0.005, 40);
  const auto oracle =
      lattice::exact_diag_oracle(p, lattice::InitialState::single_atom(), traj.times);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    max_dev = std::max(max_dev, (traj.states.col(static_cast<Eigen::Index>(i)) -
                                 oracle.states.col(static_cast<Eigen::Index>(i)))
                                    .cwiseAbs()
                                    .maxCoeff());
  c.check(max_dev <= 1e-6, "max amplitude deviation " + fmt(max_dev));
}

void criterion_13_cli_determinism() {
  Criterion c(13, "identical configs produce byte-identical outputs");
  const fs::path dir = fs::temp_directory_path() / "wqed_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto invoke = [&](const std::string& out) {
    const std::string cmd = std::string(WQED_CLI_PATH) + " preset fig1b --out " +
                            (dir / out).string() + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  c.check(invoke("a") && invoke("b"), "CLI invocation failed");
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    const auto rel = fs::relative(entry.path(), dir / "a");
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(dir / "b" / rel, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) c.check(false, "mismatch in " + rel.string());
    ++compared;
  }
  c.check(compared == 10, "expected 10 data files, compared " + std::to_string(compared));
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("wqed acceptance suite\n");
  criterion_1_pre_arrival();
  criterion_2_markovian_limit();
  criterion_3_small_t_formula();
  criterion_4_suppression_below_gamma0();
  criterion_5_series_oracle();
  criterion_6_field_conservation();
  criterion_7_field_confinement();
  criterion_8_lattice_markovian_rate();
  criterion_9_group_velocity();
  criterion_10_lattice_suppression();
  criterion_11_standing_wave_nodes();
  criterion_12_lattice_oracle();
  criterion_13_cli_determinism();
  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 13 criteria passed\n");
  return 0;
}
