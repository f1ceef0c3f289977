#pragma once

// Photon transmission through the cavity: bare Lorentzian transmission,
// the decoherence-broadened transmission amplitude and spectrum, its
// Gaussian strong-dephasing asymptote, the integrated spectral weight
// (with its exact sum rule), and the Landauer current.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kerrflux/decoherence.hpp"
#include "kerrflux/params.hpp"
#include "kerrflux/quadrature.hpp"

namespace kerrflux {

// Bare (epsilon = 0) transmission probability at frequency omega.
inline double tau_lorentzian(const SystemParams& p, double omega) {
  const double g = p.gamma();
  const double d = omega - p.omega0;
  return 4.0 * p.gamma_l * p.gamma_r / (d * d + g * g);
}

// Resonant transmission probability 2 gamma_l gamma_r / gamma: the weight
// prefactor of the time-domain amplitude and of the sum rule.
inline double resonant_weight(const SystemParams& p) {
  return 2.0 * p.gamma_l * p.gamma_r / p.gamma();
}

// Time-domain transmission amplitude
//   T(t) = (2 gamma_l gamma_r / gamma) z(t) exp(-gamma |t| - i omega_ac t).
inline std::complex<double> transmission_time(const SystemParams& p,
                                              double t) {
  const auto d = derive(p);
  const double mag = resonant_weight(p) * envelope(p, t) *
                     std::exp(-d.gamma * std::abs(t));
  return std::polar(mag, -d.omega_ac * t);
}

// ---------------------------------------------------------------------------
// Shared spectral kernel: the cosine transform
//   F(delta) = 2 * prefactor * Int_0^inf exp(-rate t - expo(t)) cos(delta t) dt
// for a monotone non-decreasing exponent expo with expo(0) = 0.  The
// integrand is cut where rate*t + expo(t) reaches ln(1e12) (relative
// truncation ~1e-12) and panels are kept below 1/8 of the shortest scale
// among 1/rate, 1/gaussian_scale and 1/|delta|.

struct EvenDecayTransform {
  double prefactor = 1.0;
  double rate = 1.0;            // exponential decay rate of the kernel
  double gaussian_scale = 0.0;  // short-time curvature scale of expo (>= 0)
};

template <class Expo>
inline double fourier_even_decay(const EvenDecayTransform& tr, Expo&& expo,
                                 double delta_freq, double rel_tol = 1e-9) {
  if (!(tr.rate > 0.0)) {
    throw std::invalid_argument("fourier_even_decay: rate must be > 0");
  }
  const double target = std::log(1e12);
  double hi = 50.0 / tr.rate;
  if (tr.rate * hi + expo(hi) > target) {
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (tr.rate * mid + expo(mid) < target ? lo : hi) = mid;
    }
  }
  const double tmax = hi;

  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  double scale = tr.rate;
  if (tr.gaussian_scale > 0.0) scale = std::max(scale, tr.gaussian_scale);
  if (delta_freq != 0.0) scale = std::max(scale, std::abs(delta_freq));
  opt.max_panel_width = 1.0 / (8.0 * scale);

  auto f = [&](double t) {
    return std::exp(-tr.rate * t - expo(t)) * std::cos(delta_freq * t);
  };
  const auto r = integrate_adaptive<double>(f, 0.0, tmax, opt);
  return 2.0 * tr.prefactor * r.value;
}

// ---------------------------------------------------------------------------
// Transmission probability spectrum: cosine transform of |T(t)|, even in
// the detuning from the shifted resonance omega_ac.

inline double transmission_point(const SystemParams& p, double omega,
                                 double rel_tol = 1e-9) {
  const auto d = derive(p);
  EvenDecayTransform tr;
  tr.prefactor = resonant_weight(p);
  tr.rate = d.gamma;
  tr.gaussian_scale = d.kappa;
  auto expo = [&](double t) { return decoherence_exponent(p, t); };
  return fourier_even_decay(tr, expo, omega - d.omega_ac, rel_tol);
}

inline std::vector<double> transmission_spectrum(
    const SystemParams& p, const std::vector<double>& omegas,
    double rel_tol = 1e-9) {
  std::vector<double> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(transmission_point(p, w, rel_tol));
  return out;
}

// Strong-dephasing (kappa >> gamma) limit: a Gaussian of width 2 kappa,
//   T(omega) = 2 sqrt(pi) (gamma_l gamma_r / (gamma kappa))
//              exp(-(omega - omega_ac)^2 / (4 kappa^2)).
inline double gaussian_asymptote(const SystemParams& p, double omega) {
  const auto d = derive(p);
  if (!(d.kappa > 0.0)) {
    throw std::domain_error(
        "gaussian_asymptote: needs kappa > 0 (finite dephasing)");
  }
  const double delta = omega - d.omega_ac;
  const double u = delta / (2.0 * d.kappa);
  return 2.0 * std::sqrt(std::numbers::pi) * p.gamma_l * p.gamma_r /
         (d.gamma * d.kappa) * std::exp(-u * u);
}

// ---------------------------------------------------------------------------
// Integrated spectral weight Int T(omega) domega / (2 pi).  Dephasing
// redistributes the spectrum but the weight obeys the exact sum rule
// 2 gamma_l gamma_r / gamma.  The numerical window [0, W] in detuning is
// extended by the analytic Lorentzian tail 2 tau0 gamma / delta^2.

struct SpectralWeightResult {
  double weight = 0.0;        // numerically integrated spectral weight
  double exact = 0.0;         // sum-rule value 2 gamma_l gamma_r / gamma
  double rel_deviation = 0.0; // |weight/exact - 1|
  double imag_residue = 0.0;  // identically 0: the transform is real-even
};

inline SpectralWeightResult spectral_weight(const SystemParams& p,
                                            double rel_tol = 1e-6) {
  const auto d = derive(p);
  const double window = std::max(60.0 * d.gamma, 25.0 * d.kappa);
  const double tau0 = resonant_weight(p);

  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.max_panel_width = window / 16.0;
  opt.breakpoints = {d.gamma, 10.0 * d.gamma};
  if (d.kappa > 0.0) {
    opt.breakpoints.push_back(d.kappa);
    opt.breakpoints.push_back(4.0 * d.kappa);
  }

  auto f = [&](double delta) {
    return transmission_point(p, d.omega_ac + delta, 0.1 * rel_tol);
  };
  const auto r = integrate_adaptive<double>(f, 0.0, window, opt);

  SpectralWeightResult out;
  const double tail =
      2.0 * tau0 / std::numbers::pi * std::atan(d.gamma / window);
  out.weight = r.value / std::numbers::pi + tail;
  out.exact = tau0;
  out.rel_deviation = std::abs(out.weight / out.exact - 1.0);
  out.imag_residue = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Landauer current through the bare transmission:
//   J = Int tau(omega) [N_L(omega) - N_R(omega)] domega / (2 pi).

inline double landauer_current(const SystemParams& p,
                               const DistributionFunction& n_left,
                               const DistributionFunction& n_right,
                               double rel_tol = 1e-10) {
  validate(p);
  if (n_left.is_zero() && n_right.is_zero()) return 0.0;
  auto [l_lo, l_hi] = n_left.support();
  auto [r_lo, r_hi] = n_right.support();
  double lo, hi;
  if (n_left.is_zero()) {
    lo = r_lo, hi = r_hi;
  } else if (n_right.is_zero()) {
    lo = l_lo, hi = l_hi;
  } else {
    lo = std::min(l_lo, r_lo), hi = std::max(l_hi, r_hi);
  }

  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  for (double b : n_left.breakpoints()) opt.breakpoints.push_back(b);
  for (double b : n_right.breakpoints()) opt.breakpoints.push_back(b);
  const double g = p.gamma();
  for (double s : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
    const double x = p.omega0 + s * g;
    if (x > lo && x < hi) opt.breakpoints.push_back(x);
  }

  auto f = [&](double w) {
    return tau_lorentzian(p, w) *
           (n_left.value_or_zero(w) - n_right.value_or_zero(w));
  };
  const auto r = integrate_adaptive<double>(f, lo, hi, opt);
  return r.value / (2.0 * std::numbers::pi);
}

// Closed form for a flat band of halfwidth delta centered on the cavity:
//   J = (2 f gamma_l gamma_r / gamma) (2/pi) atan(delta / gamma).
inline double landauer_current_flat(const SystemParams& p) {
  validate(p);
  return 2.0 * p.f_occ * p.gamma_l * p.gamma_r / p.gamma() * 2.0 /
         std::numbers::pi * std::atan(p.delta / p.gamma());
}

}  // namespace kerrflux
