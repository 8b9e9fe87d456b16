#include "wqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wqed/errors.hpp"

namespace wqed::spectral {

namespace {

using complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

complex halley_refine(complex w, complex z) {
  for (int it = 0; it < 64; ++it) {
    const complex ew = std::exp(w);
    const complex f = w * ew - z;
    if (std::abs(f) <= 1e-15 * (1.0 + std::abs(z))) break;
    const complex fp = ew * (w + 1.0);
    const complex denom = fp - f * (w + 2.0) / (2.0 * w + 2.0);
    const complex step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

std::complex<double> lambert_w(std::complex<double> z, int branch) {
  if (z == 0.0) {
    if (branch == 0) return {0.0, 0.0};
    throw std::invalid_argument("lambert_w: z = 0 is a singularity for branches k != 0");
  }
  complex w;
  if (branch == 0 && std::abs(z) < 0.5) {
    // series seed about the origin
    w = z * (1.0 - z * (1.0 - 1.5 * z));
  } else {
    // asymptotic seed w ~ log z + 2 pi i k - log(log z + 2 pi i k)
    complex l1 = std::log(z) + complex(0.0, kTwoPi * branch);
    if (branch == 0 && std::abs(l1) < 1.0) l1 += 1.0;  // keep the seed away from log(0)
    w = l1 - std::log(l1);
  }
  w = halley_refine(w, z);
  const double resid = std::abs(w * std::exp(w) - z);
  if (!(resid <= 1e-10 * (1.0 + std::abs(z)))) {
    std::ostringstream msg;
    msg << "lambert_w: no convergence for z = (" << z.real() << ", " << z.imag()
        << "), branch " << branch;
    throw numerical_error(msg.str());
  }
  return w;
}

std::vector<CharacteristicRoot> characteristic_roots(
    const twoatom::TwoAtomParams& params, int n_branches) {
  if (params.phase_phi != 0.0)
    throw std::invalid_argument("characteristic_roots: valid only for phi = 0");
  if (n_branches < 1) throw std::invalid_argument("characteristic_roots: n_branches must be >= 1");

  const double gamma = params.gamma;
  const double lambda = gamma / 2.0;
  const double a = gamma * params.beta / 2.0;
  const double T = params.delay;

  if (T == 0.0 || params.beta == 0.0) {
    CharacteristicRoot root;
    root.s = complex(-(lambda - (T == 0.0 ? a : 0.0)), 0.0);
    root.branch = 0;
    root.residual = 0.0;
    return {root};
  }

  const auto char_fn = [&](complex s) { return s + lambda - a * std::exp(-s * T); };
  const auto char_deriv = [&](complex s) { return complex(1.0, 0.0) + a * T * std::exp(-s * T); };

  const complex z = a * T * std::exp(lambda * T);
  std::vector<CharacteristicRoot> roots;
  // Re W_k decreases with |k| for our real positive argument, so the
  // candidate set {0, +-1, ..., +-ceil((n-1)/2)} already contains the
  // n_branches rightmost roots.
  const int k_pairs = (n_branches - 1 + 1) / 2;
  for (int k = -k_pairs; k <= k_pairs; ++k) {
    complex s = lambert_w(z, k) / T - lambda;
    // Newton polish on the characteristic function itself; acceptance floor
    // scales with |s| since s + lambda alone carries |s| eps of rounding
    const auto accepted = [&](complex v, double resid) {
      return resid <= 1e-13 * gamma ||
             resid <= 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(v) + gamma);
    };
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const complex f = char_fn(s);
      if (accepted(s, std::abs(f))) {
        converged = true;
        break;
      }
      s -= f / char_deriv(s);
    }
    if (!converged && !accepted(s, std::abs(char_fn(s))))
      throw numerical_error("characteristic_roots: Newton refinement did not converge");
    CharacteristicRoot root;
    root.s = s;
    root.branch = k;
    root.residual = std::abs(char_fn(s));
    roots.push_back(root);
  }

  std::sort(roots.begin(), roots.end(), [](const CharacteristicRoot& u, const CharacteristicRoot& v) {
    if (u.s.real() != v.s.real()) return u.s.real() > v.s.real();
    return u.s.imag() > v.s.imag();
  });
  roots.resize(static_cast<std::size_t>(n_branches));
  return roots;
}

double dominant_decay_rate(const std::vector<CharacteristicRoot>& roots) {
  if (roots.empty()) throw std::invalid_argument("dominant_decay_rate: empty root list");
  double max_re = roots.front().s.real();
  for (const auto& r : roots) max_re = std::max(max_re, r.s.real());
  return -2.0 * max_re;
}

double asymptotic_rate(const twoatom::TwoAtomParams& params) {
  return params.gamma0 / (1.0 + params.gamma1d * params.delay / 2.0);
}

}  // namespace wqed::spectral
