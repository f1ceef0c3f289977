#pragma once

// Occupation-fluctuation response of the cavity and the resulting pure
// decoherence of the transmitted field.
//
// The cavity occupation fluctuates around n_bar with exponentially
// decaying symmetric correlations (Keldysh component alpha_k); the phase
// accumulated by a transmitted photon performs a driven random walk whose
// variance growth is the decoherence exponent D(t).  exp(-D) multiplies
// every interference-sensitive observable.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "kerrflux/params.hpp"

namespace kerrflux {

// Symmetric (classical) occupation correlator at time separation t:
//   alpha_k(t) = c * exp(-2 Gamma |t|),
//   c = 4 gamma_l f (gamma + gamma_l f) / gamma^2.
inline double alpha_k_time(const SystemParams& p, double t) {
  const double g = p.gamma();
  const double c =
      4.0 * p.gamma_l * p.f_occ * (g + p.gamma_l * p.f_occ) / (g * g);
  return c * std::exp(-2.0 * g * std::abs(t));
}

// Fourier transform of alpha_k_time: a Lorentzian of halfwidth 2 Gamma.
inline double alpha_k_freq(const SystemParams& p, double omega) {
  const double g = p.gamma();
  return 16.0 * p.gamma_l * p.f_occ * (g + p.gamma_l * p.f_occ) /
         (g * (4.0 * g * g + omega * omega));
}

// Retarded/advanced occupation response in frequency space (low-frequency
// limit, band-edge dominated):  alpha_{r/a} = +/- 16 i eps f^2 gamma_l^2
// / (pi gamma delta^3).
inline std::complex<double> alpha_ra(const SystemParams& p, bool retarded) {
  const double g = p.gamma();
  const double mag = 16.0 * p.epsilon * p.f_occ * p.f_occ * p.gamma_l *
                     p.gamma_l /
                     (std::numbers::pi * g * p.delta * p.delta * p.delta);
  return std::complex<double>(0.0, retarded ? mag : -mag);
}

// Residual of the equilibrium fluctuation-dissipation relation at
// frequency omega (relative to the shifted resonance):
//   alpha_k(omega) - [Im alpha_r - Im alpha_a] * (1 + 2 n_ac(omega_0 + omega)).
// A nonzero value is the hallmark of the driven steady state.
inline double fdt_violation(const SystemParams& p,
                            const DistributionFunction& n_left,
                            const DistributionFunction& n_right,
                            double omega) {
  const double im_diff =
      (alpha_ra(p, true) - alpha_ra(p, false)).imag();
  const double occ = n_ac(p, n_left, n_right, p.omega0 + omega);
  return alpha_k_freq(p, omega) - im_diff * (1.0 + 2.0 * occ);
}

inline double fdt_violation(const SystemParams& p, double omega) {
  const auto band = DistributionFunction::flat_band(p.omega0, p.delta, p.f_occ);
  return fdt_violation(p, band, DistributionFunction::vacuum(), omega);
}

// g(x) = x + exp(-x) - 1, the phase-variance growth law: quadratic for
// small x, linear for large x.  The series branch keeps full relative
// accuracy where the direct form cancels.
inline double phase_growth(double x) {
  if (x < 0.5) {
    // sum_{k>=2} (-x)^k / k!
    double term = 0.5 * x * x;  // k = 2
    double sum = term;
    for (int k = 3; k < 40; ++k) {
      term *= -x / static_cast<double>(k);
      const double next = sum + term;
      if (next == sum) break;
      sum = next;
    }
    return sum;
  }
  return x + std::expm1(-x);
}

// Decoherence exponent D(t) = (kappa^2 / (2 Gamma^2)) g(2 Gamma |t|).
// D(t) ~ kappa^2 t^2 for t << 1/Gamma, D(t) ~ (kappa^2/Gamma) |t| after.
inline double decoherence_exponent_raw(double gamma, double kappa, double t) {
  return kappa * kappa / (2.0 * gamma * gamma) *
         phase_growth(2.0 * gamma * std::abs(t));
}

inline double decoherence_exponent(const SystemParams& p, double t) {
  const auto d = derive(p);
  return decoherence_exponent_raw(d.gamma, d.kappa, t);
}

// Coherence envelope z(t) = exp(-D(t)).
inline double envelope(const SystemParams& p, double t) {
  return std::exp(-decoherence_exponent(p, t));
}

}  // namespace kerrflux
