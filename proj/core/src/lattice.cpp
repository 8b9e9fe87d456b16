#include "wqed/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "wqed/errors.hpp"

namespace wqed::lattice {

namespace {

using complex = std::complex<double>;

// d psi / dt = -i H_rot psi with the photonic diagonal shifted to zero
struct HamiltonianAction {
  const CavityParams& p;
  double detuning_a;  // omega_a - omega_c
  double detuning_b;

  explicit HamiltonianAction(const CavityParams& params)
      : p(params),
        detuning_a(params.omega_a - params.omega_c),
        detuning_b(params.omega_b - params.omega_c) {}

  void operator()(const Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi) const {
    const int na = p.n_atoms_a;
    const int nb = p.n_atoms_b;
    const int n = p.n_sites;
    const int ph = na + nb;
    const int ia = ph + p.site_a - 1;
    const int ib = ph + p.site_b - 1;
    const complex minus_i(0.0, -1.0);
    const complex atom_diag_a(detuning_a, -p.gamma0 / 2.0);
    const complex atom_diag_b(detuning_b, -p.gamma0 / 2.0);
    const double j = p.tunneling;

    complex sum_a(0.0, 0.0);
    for (int k = 0; k < na; ++k) sum_a += psi[k];
    complex sum_b(0.0, 0.0);
    for (int k = 0; k < nb; ++k) sum_b += psi[na + k];

    for (int k = 0; k < na; ++k)
      dpsi[k] = minus_i * (atom_diag_a * psi[k] + p.g_a * psi[ia]);
    for (int k = 0; k < nb; ++k)
      dpsi[na + k] = minus_i * (atom_diag_b * psi[na + k] + p.g_b * psi[ib]);

    for (int x = 0; x < n; ++x) {
      complex h = complex(0.0, 0.0);
      if (x > 0) h -= j * psi[ph + x - 1];
      if (x < n - 1) h -= j * psi[ph + x + 1];
      dpsi[ph + x] = minus_i * h;
    }
    dpsi[ia] += minus_i * (p.g_a * sum_a);
    dpsi[ib] += minus_i * (p.g_b * sum_b);
  }
};

}  // namespace

void CavityParams::validate() const {
  if (n_sites < 2) throw std::invalid_argument("CavityParams: n_sites must be >= 2");
  if (!(tunneling > 0.0)) throw std::invalid_argument("CavityParams: tunneling must be > 0");
  if (site_a < 1 || site_b > n_sites || site_a >= site_b)
    throw std::invalid_argument("CavityParams: need 1 <= site_a < site_b <= n_sites");
  if (delta_x() % 2 != 0)
    throw std::invalid_argument("CavityParams: site_b - site_a must be even (destructive round trip)");
  if (n_atoms_a < 1 || n_atoms_b < 1)
    throw std::invalid_argument("CavityParams: ensemble sizes must be >= 1");
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("CavityParams: gamma0 must be >= 0");
}

CavityParams CavityParams::resonant_pair(double tunneling, int delta_x,
                                         double t_max_horizon, double g_a, double g_b,
                                         int n_atoms_a, int n_atoms_b, double gamma0) {
  if (!(t_max_horizon > 0.0))
    throw std::invalid_argument("CavityParams: t_max_horizon must be > 0");
  CavityParams p;
  p.tunneling = tunneling;
  const int pad = static_cast<int>(std::ceil(2.0 * tunneling * t_max_horizon));
  p.n_sites = 2 * pad + delta_x + 1;
  p.site_a = pad + 1;
  p.site_b = p.site_a + delta_x;
  p.n_atoms_a = n_atoms_a;
  p.n_atoms_b = n_atoms_b;
  p.g_a = g_a;
  p.g_b = g_b;
  p.gamma0 = gamma0;
  p.validate();
  return p;
}

double LatticeState::norm_sq() const {
  return atoms_a.squaredNorm() + atoms_b.squaredNorm() + photons.squaredNorm();
}

Eigen::VectorXcd LatticeState::flatten() const {
  Eigen::VectorXcd v(atoms_a.size() + atoms_b.size() + photons.size());
  v << atoms_a, atoms_b, photons;
  return v;
}

LatticeState LatticeState::unflatten(const Eigen::VectorXcd& v, const CavityParams& p) {
  if (v.size() != p.dimension())
    throw std::invalid_argument("LatticeState: flat vector size mismatch");
  LatticeState s;
  s.atoms_a = v.segment(0, p.n_atoms_a);
  s.atoms_b = v.segment(p.n_atoms_a, p.n_atoms_b);
  s.photons = v.segment(p.n_atoms_a + p.n_atoms_b, p.n_sites);
  return s;
}

Eigen::SparseMatrix<std::complex<double>> build_effective_hamiltonian(const CavityParams& params) {
  params.validate();
  const int na = params.n_atoms_a;
  const int nb = params.n_atoms_b;
  const int n = params.n_sites;
  const int ph = na + nb;
  const int dim = params.dimension();

  std::vector<Eigen::Triplet<complex>> trip;
  trip.reserve(static_cast<std::size_t>(dim + 2 * (n - 1) + 2 * (na + nb)));

  const complex diag_a(params.omega_a, -params.gamma0 / 2.0);
  const complex diag_b(params.omega_b, -params.gamma0 / 2.0);
  for (int k = 0; k < na; ++k) trip.emplace_back(k, k, diag_a);
  for (int k = 0; k < nb; ++k) trip.emplace_back(na + k, na + k, diag_b);
  for (int x = 0; x < n; ++x)
    trip.emplace_back(ph + x, ph + x, complex(params.omega_c, 0.0));
  for (int x = 0; x < n - 1; ++x) {
    trip.emplace_back(ph + x, ph + x + 1, complex(-params.tunneling, 0.0));
    trip.emplace_back(ph + x + 1, ph + x, complex(-params.tunneling, 0.0));
  }
  const int ia = ph + params.site_a - 1;
  const int ib = ph + params.site_b - 1;
  for (int k = 0; k < na; ++k) {
    trip.emplace_back(k, ia, complex(params.g_a, 0.0));
    trip.emplace_back(ia, k, complex(params.g_a, 0.0));
  }
  for (int k = 0; k < nb; ++k) {
    trip.emplace_back(na + k, ib, complex(params.g_b, 0.0));
    trip.emplace_back(ib, na + k, complex(params.g_b, 0.0));
  }

  Eigen::SparseMatrix<complex> h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

LatticeState make_initial_state(const CavityParams& params, const InitialState& init) {
  params.validate();
  LatticeState s;
  s.atoms_a = Eigen::VectorXcd::Zero(params.n_atoms_a);
  s.atoms_b = Eigen::VectorXcd::Zero(params.n_atoms_b);
  s.photons = Eigen::VectorXcd::Zero(params.n_sites);

  switch (init.kind) {
    case InitialStateKind::single_atom:
      s.atoms_a[0] = 1.0;
      break;
    case InitialStateKind::superradiant: {
      const double amp = 1.0 / std::sqrt(static_cast<double>(params.n_atoms_a));
      s.atoms_a.setConstant(complex(amp, 0.0));
      break;
    }
    case InitialStateKind::photon_wave_packet: {
      if (!(init.packet_sigma_k > 0.0))
        throw std::invalid_argument("InitialState: packet_sigma_k must be > 0");
      const int center = init.packet_center > 0 ? init.packet_center
                                                : std::max(1, params.n_sites / 4);
      if (center < 1 || center > params.n_sites)
        throw std::invalid_argument("InitialState: packet_center outside the chain");
      const double sigma_x = 1.0 / (2.0 * init.packet_sigma_k);
      for (int x = 1; x <= params.n_sites; ++x) {
        const double d = static_cast<double>(x - center);
        const double envelope = std::exp(-d * d / (4.0 * sigma_x * sigma_x));
        s.photons[x - 1] = envelope * std::exp(complex(0.0, init.packet_k0 * x));
      }
      const double norm = std::sqrt(s.photons.squaredNorm());
      s.photons /= norm;
      break;
    }
  }
  return s;
}

std::vector<double> LatticeTrajectory::population_a() const {
  std::vector<double> p(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    p[i] = states.col(static_cast<Eigen::Index>(i)).segment(0, n_atoms_a).squaredNorm();
  return p;
}

std::vector<double> LatticeTrajectory::population_b() const {
  std::vector<double> p(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    p[i] = states.col(static_cast<Eigen::Index>(i)).segment(n_atoms_a, n_atoms_b).squaredNorm();
  return p;
}

std::vector<double> LatticeTrajectory::norm_sq() const {
  std::vector<double> p(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    p[i] = states.col(static_cast<Eigen::Index>(i)).squaredNorm();
  return p;
}

Eigen::MatrixXd LatticeTrajectory::photon_probabilities() const {
  const auto nt = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd prob(n_sites, nt);
  for (Eigen::Index i = 0; i < nt; ++i)
    prob.col(i) = states.col(i).segment(n_atoms_a + n_atoms_b, n_sites).cwiseAbs2();
  return prob;
}

LatticeTrajectory evolve(const CavityParams& params, const InitialState& init,
                         double t_max, double dt, int store_every) {
  params.validate();
  if (!(t_max > 0.0)) throw std::invalid_argument("evolve: t_max must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (store_every < 1) throw std::invalid_argument("evolve: store_every must be >= 1");
  if (dt > 0.02 / params.tunneling * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "evolve: accuracy guard requires dt <= 0.02/J (dt = " << dt
        << ", J = " << params.tunneling << ")";
    throw numerical_error(msg.str());
  }
  const bool coupled = params.g_a != 0.0 || params.g_b != 0.0;
  if (coupled) {
    const double pad = static_cast<double>(std::min(params.site_a - 1, params.n_sites - params.site_b));
    if (pad < 2.0 * params.tunneling * t_max) {
      std::ostringstream msg;
      msg << "evolve: causal padding violated: min(x_A - 1, N - x_B) = " << pad
          << " < 2 J t_max = " << 2.0 * params.tunneling * t_max;
      throw numerical_error(msg.str());
    }
  }

  const HamiltonianAction action(params);
  const int dim = params.dimension();
  Eigen::VectorXcd psi = make_initial_state(params, init).flatten();
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);

  const auto n_steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));
  const long n_stored = n_steps / store_every + 1;

  LatticeTrajectory traj;
  traj.n_atoms_a = params.n_atoms_a;
  traj.n_atoms_b = params.n_atoms_b;
  traj.n_sites = params.n_sites;
  traj.states.resize(dim, n_stored);
  traj.times.reserve(static_cast<std::size_t>(n_stored));

  long stored = 0;
  traj.times.push_back(0.0);
  traj.states.col(stored++) = psi;

  for (long n = 0; n < n_steps; ++n) {
    action(psi, k1);
    stage = psi + (0.5 * dt) * k1;
    action(stage, k2);
    stage = psi + (0.5 * dt) * k2;
    action(stage, k3);
    stage = psi + dt * k3;
    action(stage, k4);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if ((n + 1) % store_every == 0 && stored < n_stored) {
      if (!psi.allFinite()) throw numerical_error("evolve: non-finite state (divergence)");
      traj.times.push_back(static_cast<double>(n + 1) * dt);
      traj.states.col(stored++) = psi;
    }
  }
  traj.states.conservativeResize(dim, stored);
  return traj;
}

LatticeTrajectory exact_diag_oracle(const CavityParams& params, const InitialState& init,
                                    std::span<const double> times) {
  params.validate();
  const int dim = params.dimension();
  if (dim > 400)
    throw std::invalid_argument("exact_diag_oracle: dimension capped at 400");

  Eigen::MatrixXcd h = Eigen::MatrixXcd(build_effective_hamiltonian(params));
  // same rotating frame as evolve()
  h.diagonal().array() -= complex(params.omega_c, 0.0);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw numerical_error("exact_diag_oracle: eigendecomposition failed");
  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  const Eigen::VectorXcd& vals = solver.eigenvalues();

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(vecs);
  const double cond_proxy = vecs.cwiseAbs().colwise().sum().maxCoeff() *
                            lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
  if (!(cond_proxy < 1e10)) {
    std::ostringstream msg;
    msg << "exact_diag_oracle: eigenvector matrix ill-conditioned (cond ~ " << cond_proxy
        << "), Hamiltonian close to defective";
    throw numerical_error(msg.str());
  }

  const Eigen::VectorXcd coeff = lu.solve(make_initial_state(params, init).flatten());

  LatticeTrajectory traj;
  traj.n_atoms_a = params.n_atoms_a;
  traj.n_atoms_b = params.n_atoms_b;
  traj.n_sites = params.n_sites;
  traj.times.assign(times.begin(), times.end());
  traj.states.resize(dim, static_cast<Eigen::Index>(times.size()));
  Eigen::VectorXcd phased(dim);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (int k = 0; k < dim; ++k)
      phased[k] = coeff[k] * std::exp(complex(0.0, -1.0) * vals[k] * times[i]);
    traj.states.col(static_cast<Eigen::Index>(i)).noalias() = vecs * phased;
  }
  return traj;
}

double round_trip_time(const CavityParams& params) {
  return static_cast<double>(params.delta_x()) / params.tunneling;
}

RoundTripPhase round_trip_phase(int delta_x) {
  if (delta_x < 1) throw std::invalid_argument("round_trip_phase: delta_x must be >= 1");
  const double pi = std::numbers::pi;
  RoundTripPhase r;
  r.total = pi * static_cast<double>(delta_x) + pi;  // |k_m| * 2 dx + pi, k_m = pi/2
  r.reduced = (delta_x % 2 == 0) ? pi : 0.0;
  r.destructive = delta_x % 2 == 0;
  return r;
}

RoundTripPhase round_trip_phase(const CavityParams& params) {
  return round_trip_phase(params.delta_x());
}

}  // namespace wqed::lattice
