#pragma once

// Field coherence functions of the transmitted light.  The first-order
// coherence g1 carries the full dephasing envelope; the intensity
// correlation g2 follows from it by the Gaussian-field (Wick) relation
// g2 = 1 + |g1|^2, so g2(0) = 2 identically (chaotic light).

#include <cmath>
#include <complex>
#include <string>

#include "kerrflux/decoherence.hpp"
#include "kerrflux/params.hpp"

namespace kerrflux {

// g1(t) = z(t) exp(-gamma |t|) exp(-i omega_ac t), normalized to g1(0)=1.
inline std::complex<double> g1(const SystemParams& p, double t) {
  const auto d = derive(p);
  const double mag = envelope(p, t) * std::exp(-d.gamma * std::abs(t));
  return std::polar(mag, -d.omega_ac * t);
}

// g2(t) = 1 + z(t)^2 exp(-2 gamma |t|).
inline double g2(const SystemParams& p, double t) {
  const double z = envelope(p, t);
  return 1.0 + z * z * std::exp(-2.0 * p.gamma() * std::abs(t));
}

// Shape of the g2 - 1 decay, set by the current relative to the
// crossover scale j_star: exponential (Lorentzian spectrum) for weak
// dephasing, Gaussian for strong, mixed in between.
enum class G2Regime { lorentzian, gaussian, crossover };

inline const char* to_string(G2Regime r) {
  switch (r) {
    case G2Regime::lorentzian: return "lorentzian";
    case G2Regime::gaussian: return "gaussian";
    case G2Regime::crossover: return "crossover";
  }
  return "crossover";
}

inline G2Regime g2_regime(const SystemParams& p, double guard = 10.0) {
  const auto d = derive(p);
  if (!std::isfinite(d.j_star)) return G2Regime::lorentzian;  // epsilon == 0
  if (d.current_j < d.j_star / guard) return G2Regime::lorentzian;
  if (d.current_j > guard * d.j_star) return G2Regime::gaussian;
  return G2Regime::crossover;
}

}  // namespace kerrflux
