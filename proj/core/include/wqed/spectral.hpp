#pragma once

#include <complex>
#include <vector>

#include "wqed/two_atom.hpp"

namespace wqed::spectral {

/// One complex root s of the characteristic equation
/// s + gamma/2 = (gamma beta / 2) e^{-sT} of the antisymmetric pair mode.
struct CharacteristicRoot {
  std::complex<double> s;
  int branch = 0;   // Lambert-W branch index the root came from
  double residual = 0.0;
};

/// Lambert W function W_k(z): solutions of w e^w = z on branch k.
/// Asymptotic/series seed plus Halley refinement.
std::complex<double> lambert_w(std::complex<double> z, int branch = 0);

/// Roots of the characteristic equation via s = W_k((gamma beta T / 2)
/// e^{gamma T / 2}) / T - gamma/2, Newton-polished, sorted by descending
/// real part. Requires phi = 0. For T = 0 or beta = 0 the single
/// non-transcendental root is returned.
std::vector<CharacteristicRoot> characteristic_roots(
    const twoatom::TwoAtomParams& params, int n_branches = 5);

/// Long-time population decay rate Gamma = -2 max_k Re s_k.
double dominant_decay_rate(const std::vector<CharacteristicRoot>& roots);

/// Small-retardation approximation Gamma ~= gamma0 / (1 + gamma1d T / 2).
double asymptotic_rate(const twoatom::TwoAtomParams& params);

}  // namespace wqed::spectral
