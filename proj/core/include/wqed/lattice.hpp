#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace wqed::lattice {

/// Tight-binding cavity array with two atom ensembles. Sites are 1-based.
/// Energies in units of the tunneling J unless stated otherwise; the local
/// decay gamma0 enters the effective Hamiltonian as -i gamma0/2 on the
/// atomic diagonal.
struct CavityParams {
  int n_sites = 0;         // N
  double tunneling = 1.0;  // J > 0
  double omega_c = 0.0;    // cavity frequency
  int site_a = 0;          // x_A
  int site_b = 0;          // x_B, with x_A < x_B and x_B - x_A even
  int n_atoms_a = 1;       // N_A
  int n_atoms_b = 1;       // N_B
  double g_a = 0.0;
  double g_b = 0.0;
  double omega_a = 0.0;
  double omega_b = 0.0;
  double gamma0 = 0.0;

  int delta_x() const { return site_b - site_a; }
  int dimension() const { return n_atoms_a + n_atoms_b + n_sites; }

  void validate() const;  // static invariants; throws std::invalid_argument

  /// On-resonance pair (omega_c = omega_a = omega_b = 0) centred in a chain
  /// sized so end reflections stay causally disconnected up to
  /// `t_max_horizon`: N = 2 ceil(2 J t_max) + delta_x + 1.
  static CavityParams resonant_pair(double tunneling, int delta_x,
                                    double t_max_horizon, double g_a, double g_b,
                                    int n_atoms_a = 1, int n_atoms_b = 1,
                                    double gamma0 = 0.0);
};

enum class InitialStateKind { single_atom, superradiant, photon_wave_packet };

struct InitialState {
  InitialStateKind kind = InitialStateKind::single_atom;
  double packet_k0 = 0.0;       // carrier momentum, photon packets only
  double packet_sigma_k = 0.1;  // momentum-space std deviation
  int packet_center = 0;        // site; 0 = quarter of the chain

  static InitialState single_atom() { return {InitialStateKind::single_atom}; }
  static InitialState superradiant() { return {InitialStateKind::superradiant}; }
  static InitialState photon_packet(double k0, double sigma_k = 0.1, int center = 0) {
    return {InitialStateKind::photon_wave_packet, k0, sigma_k, center};
  }
};

/// Single-excitation amplitudes split by sector.
struct LatticeState {
  Eigen::VectorXcd atoms_a;
  Eigen::VectorXcd atoms_b;
  Eigen::VectorXcd photons;

  double norm_sq() const;
  Eigen::VectorXcd flatten() const;  // [atoms_a, atoms_b, photons]
  static LatticeState unflatten(const Eigen::VectorXcd& v, const CavityParams& p);
};

struct LatticeTrajectory {
  std::vector<double> times;
  Eigen::MatrixXcd states;  // dimension x n_times, ordering [atoms_a, atoms_b, photons]
  int n_atoms_a = 0;
  int n_atoms_b = 0;
  int n_sites = 0;

  std::vector<double> population_a() const;  // sum_j |c_{A,j}|^2
  std::vector<double> population_b() const;
  std::vector<double> norm_sq() const;
  /// |c_x|^2 for all sites (rows) over time (cols).
  Eigen::MatrixXd photon_probabilities() const;
};

/// Effective single-excitation Hamiltonian in the lab frame: photon block
/// tridiagonal (diagonal omega_c, off-diagonal -J), atomic diagonal
/// omega_i - i gamma0/2, coupling g_i between every atom of ensemble i and
/// its site. Complex symmetric.
Eigen::SparseMatrix<std::complex<double>> build_effective_hamiltonian(const CavityParams& params);

LatticeState make_initial_state(const CavityParams& params, const InitialState& init);

/// RK4 propagation of i dpsi/dt = H psi in the frame rotating at omega_c.
/// The Hamiltonian is applied as a tridiagonal-plus-couplings action and is
/// never densified. Requires dt <= 0.02/J; when any coupling is nonzero the
/// chain must keep min(x_A - 1, N - x_B) >= 2 J t_max so the open ends stay
/// causally disconnected. `store_every` keeps every k-th sample.
LatticeTrajectory evolve(const CavityParams& params, const InitialState& init,
                         double t_max, double dt, int store_every = 1);

/// Dense eigendecomposition oracle (same rotating frame as evolve): state at
/// the requested times by spectral synthesis. Dimension capped at 400;
/// reports ill-conditioned eigenvector matrices instead of silently
/// returning garbage.
LatticeTrajectory exact_diag_oracle(const CavityParams& params, const InitialState& init,
                                    std::span<const double> times);

/// Feedback round-trip time 2 delta_x / v_g^max = delta_x / J.
double round_trip_time(const CavityParams& params);

struct RoundTripPhase {
  double total;      // |k_m| 2 delta_x + pi
  double reduced;    // total mod 2 pi
  bool destructive;  // reduced == pi (even delta_x)
};

/// Accumulated phase over one A -> B -> A round trip at the peak-velocity
/// momentum |k_m| = pi/2, including the pi from reflection at B. Odd
/// delta_x flags a constructive (non-suppressing) geometry.
RoundTripPhase round_trip_phase(int delta_x);
RoundTripPhase round_trip_phase(const CavityParams& params);

}  // namespace wqed::lattice
