#pragma once

// Zero-frequency current noise, its spectrum, the Fano factor, and the
// noise-current scaling exponent.
//
// The noise side of the theory is parametrized by the measured current j
// (together with gamma, gamma_r and epsilon) rather than by the incident
// occupation; kappa_from_current converts between the two pictures.  The
// current-current correlator is
//   S(t) = (j^2 / 2) exp(-2 gamma |t|) z(t)^2,
// so the zero-frequency noise is the delta = 0 value of the shared
// cosine-transform kernel with doubled rate and doubled exponent.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kerrflux/decoherence.hpp"
#include "kerrflux/params.hpp"
#include "kerrflux/transport.hpp"

namespace kerrflux {

// Dephasing-free (epsilon = 0) noise spectrum
//   S0(omega) = 8 f^2 gamma_l^2 gamma_r^2 / (gamma (omega^2 + 4 gamma^2)),
// a Lorentzian of halfwidth 2 gamma with S0(0) = j^2 / (2 gamma).
inline double s0_spectrum(const SystemParams& p, double omega) {
  const double g = p.gamma();
  const double flg = p.f_occ * p.gamma_l * p.gamma_r;
  return 8.0 * flg * flg / (g * (omega * omega + 4.0 * g * g));
}

// Finite-frequency noise spectrum at detuning omega from zero frequency.
inline double noise_spectrum(double gamma, double gamma_r, double epsilon,
                             double j, double omega, double rel_tol = 1e-9) {
  if (!(gamma > 0.0) || !(gamma_r > 0.0) || j < 0.0) {
    throw std::invalid_argument("noise: needs gamma, gamma_r > 0 and j >= 0");
  }
  if (j == 0.0) return 0.0;
  const double kappa = kappa_from_current(gamma_r, epsilon, j);
  EvenDecayTransform tr;
  tr.prefactor = 0.5 * j * j;
  tr.rate = 2.0 * gamma;
  tr.gaussian_scale = std::numbers::sqrt2 * kappa;
  auto expo = [&](double t) {
    return 2.0 * decoherence_exponent_raw(gamma, kappa, t);
  };
  return fourier_even_decay(tr, expo, omega, rel_tol);
}

// Zero-frequency noise S = j^2 Int_0^inf exp(-2 gamma t) z(t)^2 dt.
inline double s_zero_freq(double gamma, double gamma_r, double epsilon,
                          double j, double rel_tol = 1e-9) {
  return noise_spectrum(gamma, gamma_r, epsilon, j, 0.0, rel_tol);
}

inline double s_zero_freq_at(const SystemParams& p, double rel_tol = 1e-9) {
  const auto d = derive(p);
  return s_zero_freq(d.gamma, p.gamma_r, p.epsilon, d.current_j, rel_tol);
}

// ---------------------------------------------------------------------------
// Closed form of the strong-dephasing (Gaussian-envelope) limit and the
// thermal / shot / fractional asymptotes it interpolates.

// S = sqrt(pi/2) (gamma_r / |eps|) j / sqrt(1 + 2 gamma_r / j)
//   = j^2 sqrt(pi/8) / kappa; diverges (returns +inf) at eps = 0.
inline double s_closed_form(double gamma_r, double epsilon, double j) {
  if (epsilon == 0.0) return std::numeric_limits<double>::infinity();
  if (j == 0.0) return 0.0;
  return std::sqrt(std::numbers::pi / 2.0) * gamma_r / std::abs(epsilon) * j /
         std::sqrt(1.0 + 2.0 * gamma_r / j);
}

inline double s_thermal(double gamma, double j) { return j * j / (2.0 * gamma); }

inline double s_shot(double gamma_r, double epsilon, double j) {
  return std::sqrt(std::numbers::pi / 2.0) * gamma_r / std::abs(epsilon) * j;
}

inline double s_shot_frac(double gamma_r, double epsilon, double j) {
  return std::sqrt(std::numbers::pi * gamma_r) / (2.0 * std::abs(epsilon)) *
         j * std::sqrt(j);
}

// ---------------------------------------------------------------------------
// Fano factor S / j and its asymptotes.

inline double fano(double gamma, double gamma_r, double epsilon, double j,
                   double rel_tol = 1e-9) {
  if (j == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return s_zero_freq(gamma, gamma_r, epsilon, j, rel_tol) / j;
}

inline double fano_thermal(double gamma, double j) { return j / (2.0 * gamma); }

inline double fano_shot(double gamma, double epsilon) {
  return std::sqrt(std::numbers::pi / 8.0) * gamma / std::abs(epsilon);
}

inline double fano_frac(double gamma_r, double epsilon, double j) {
  return std::sqrt(std::numbers::pi * gamma_r * j) / (2.0 * std::abs(epsilon));
}

// ---------------------------------------------------------------------------
// Local scaling exponent d ln S / d ln j, by a centered log-derivative
// over a factor 10^{+-0.005} in current.

inline double scaling_exponent(double gamma, double gamma_r, double epsilon,
                               double j, double rel_tol = 1e-9) {
  if (!(j > 0.0)) {
    throw std::invalid_argument("scaling_exponent: needs j > 0");
  }
  const double step = std::pow(10.0, 0.005);
  const double s_hi = s_zero_freq(gamma, gamma_r, epsilon, j * step, rel_tol);
  const double s_lo = s_zero_freq(gamma, gamma_r, epsilon, j / step, rel_tol);
  return (std::log(s_hi) - std::log(s_lo)) / (0.01 * std::numbers::ln10);
}

// ---------------------------------------------------------------------------
// Noise regime of a (j, epsilon) point.  Boundaries carry a factor-`guard`
// band on each side; points inside a band are crossover.  Weak
// nonlinearity never produces the fractional power law.

enum class NoiseRegime { thermal, fractional, shot, crossover };

inline const char* to_string(NoiseRegime r) {
  switch (r) {
    case NoiseRegime::thermal: return "thermal";
    case NoiseRegime::fractional: return "fractional";
    case NoiseRegime::shot: return "shot";
    case NoiseRegime::crossover: return "crossover";
  }
  return "crossover";
}

inline NoiseRegime classify_regime(double gamma, double epsilon, double j,
                                   double guard = 10.0) {
  const double e = std::abs(epsilon);
  if (e == 0.0) return NoiseRegime::thermal;
  if (e <= gamma / guard) {
    const double j_cross = gamma * gamma / e;  // thermal -> shot boundary
    if (j <= j_cross / guard) return NoiseRegime::thermal;
    if (j >= guard * j_cross) return NoiseRegime::shot;
    return NoiseRegime::crossover;
  }
  if (e >= guard * gamma) {
    const double j_lo = gamma * gamma * gamma / (e * e);  // -> fractional
    const double j_hi = gamma;                            // -> shot
    if (j <= j_lo / guard) return NoiseRegime::thermal;
    if (j >= guard * j_hi) return NoiseRegime::shot;
    if (j >= guard * j_lo && j <= j_hi / guard) return NoiseRegime::fractional;
    return NoiseRegime::crossover;
  }
  return NoiseRegime::crossover;
}

// One row of a noise sweep.
struct NoisePoint {
  double j_over_gamma = 0.0;
  double eps_over_gamma = 0.0;
  double s = 0.0;
  double fano = 0.0;
  double scaling_gamma = 0.0;
  NoiseRegime regime = NoiseRegime::crossover;
};

}  // namespace kerrflux
