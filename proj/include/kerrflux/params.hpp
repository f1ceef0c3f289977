#pragma once

// System parameters, derived quantities, incident-band distribution
// functions, the frequency-hierarchy check, and the mean-field shift
// (saddle point) solvers.
//
// Units: all rates and frequencies share one unit; the CLI defaults to
// gamma_l + gamma_r = 1.  epsilon may be negative (attractive
// nonlinearity): it enters quadratically everywhere except the signed
// shifts phi0 and omega_ac.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kerrflux/quadrature.hpp"

namespace kerrflux {

struct SystemParams {
  double omega0 = 1000.0;   // cavity carrier frequency
  double epsilon = 2.0;     // Kerr shift per photon
  double gamma_l = 0.5;     // left waveguide coupling rate
  double gamma_r = 0.5;     // right waveguide coupling rate
  double delta = 100.0;     // incident band halfwidth
  double f_occ = 2.0;       // flat-band occupation of the left waveguide

  double gamma() const { return gamma_l + gamma_r; }
};

inline void validate(const SystemParams& p) {
  auto bad = [](const std::string& what) {
    throw std::invalid_argument("params: " + what);
  };
  if (!std::isfinite(p.omega0) || !std::isfinite(p.epsilon) ||
      !std::isfinite(p.gamma_l) || !std::isfinite(p.gamma_r) ||
      !std::isfinite(p.delta) || !std::isfinite(p.f_occ)) {
    bad("all entries must be finite");
  }
  if (p.gamma_l <= 0.0) bad("gamma_l must be > 0");
  if (p.gamma_r <= 0.0) bad("gamma_r must be > 0");
  if (p.delta <= 0.0) bad("delta must be > 0");
  if (p.omega0 <= 0.0) bad("omega0 must be > 0");
  if (p.f_occ < 0.0) bad("f_occ must be >= 0");
}

struct DerivedQuantities {
  double gamma = 0.0;      // total linewidth
  double kappa = 0.0;      // decoherence rate (short-time Gaussian width)
  double omega_ac = 0.0;   // interaction-shifted resonance
  double phi0 = 0.0;       // mean-field shift, flat wideband solution
  double current_j = 0.0;  // steady photon current
  double n_bar = 0.0;      // mean cavity occupation
  double j_star = 0.0;     // thermal/quantum crossover current
};

// kappa expressed through the current instead of the occupation.
inline double kappa_from_current(double gamma_r, double epsilon, double j) {
  return std::abs(epsilon) / (2.0 * gamma_r) * std::sqrt(j * (j + 2.0 * gamma_r));
}

inline double crossover_current(double gamma, double epsilon) {
  if (epsilon == 0.0) return std::numeric_limits<double>::infinity();
  const double r = gamma / epsilon;
  return 0.5 * gamma * (std::sqrt(1.0 + 4.0 * r * r) - 1.0);
}

inline DerivedQuantities derive(const SystemParams& p) {
  validate(p);
  DerivedQuantities d;
  d.gamma = p.gamma();
  const double x = p.gamma_l / d.gamma;
  d.kappa = std::abs(p.epsilon) * std::sqrt(x * (p.f_occ + x * p.f_occ * p.f_occ));
  d.omega_ac = p.omega0 - p.epsilon + p.f_occ * p.epsilon * x;
  d.phi0 = p.epsilon * (1.0 + p.f_occ * x);
  d.current_j = 2.0 * p.f_occ * p.gamma_l * p.gamma_r / d.gamma;
  d.n_bar = p.f_occ * x;
  d.j_star = crossover_current(d.gamma, p.epsilon);
  return d;
}

// ---------------------------------------------------------------------------
// Frequency hierarchy: omega0 >> delta >> epsilon, gamma_l, gamma_r.
// Violations warn rather than fail; kappa/delta is surfaced as a diagnostic.

struct HierarchyReport {
  bool ok = true;
  double carrier_ratio = 0.0;    // omega0 / delta
  double band_ratio = 0.0;       // delta / max(|epsilon|, gamma_l, gamma_r)
  double kappa_over_delta = 0.0;
  std::vector<std::string> warnings;
};

inline HierarchyReport check_hierarchy(const SystemParams& p,
                                       double factor = 10.0) {
  validate(p);
  HierarchyReport r;
  const double small = std::max({std::abs(p.epsilon), p.gamma_l, p.gamma_r});
  r.carrier_ratio = p.omega0 / p.delta;
  r.band_ratio = small > 0.0 ? p.delta / small
                             : std::numeric_limits<double>::infinity();
  r.kappa_over_delta = derive(p).kappa / p.delta;
  if (r.carrier_ratio < factor) {
    r.ok = false;
    r.warnings.push_back("carrier/band ratio omega0/delta = " +
                         std::to_string(r.carrier_ratio) + " is below " +
                         std::to_string(factor));
  }
  if (r.band_ratio < factor) {
    r.ok = false;
    r.warnings.push_back("band/linewidth ratio delta/max(|eps|,rates) = " +
                         std::to_string(r.band_ratio) + " is below " +
                         std::to_string(factor));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Incident occupation of one waveguide: a flat band or a tabulated profile.
// Tabulated evaluation outside the grid is an error (no extrapolation);
// flat-band evaluation outside the band is 0.

class DistributionFunction {
 public:
  static DistributionFunction flat_band(double center, double halfwidth,
                                        double occupation) {
    if (!(halfwidth > 0.0)) {
      throw std::invalid_argument("distribution: halfwidth must be > 0");
    }
    if (occupation < 0.0 || !std::isfinite(occupation)) {
      throw std::invalid_argument("distribution: occupation must be >= 0");
    }
    DistributionFunction d;
    d.flat_ = true;
    d.center_ = center;
    d.halfwidth_ = halfwidth;
    d.occupation_ = occupation;
    return d;
  }

  static DistributionFunction tabulated(std::vector<double> grid,
                                        std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size()) {
      throw std::invalid_argument(
          "distribution: tabulated input needs >= 2 matching grid/value pairs");
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (!(grid[i] < grid[i + 1])) {
        throw std::invalid_argument(
            "distribution: tabulated grid must be strictly increasing");
      }
    }
    for (double v : values) {
      if (v < 0.0 || !std::isfinite(v)) {
        throw std::invalid_argument(
            "distribution: occupation must be finite and >= 0");
      }
    }
    DistributionFunction d;
    d.flat_ = false;
    d.grid_ = std::move(grid);
    d.values_ = std::move(values);
    return d;
  }

  // Empty waveguide: identically zero occupation.
  static DistributionFunction vacuum() { return flat_band(0.0, 1.0, 0.0); }

  double operator()(double omega) const {
    if (flat_) {
      return std::abs(omega - center_) <= halfwidth_ ? occupation_ : 0.0;
    }
    if (omega < grid_.front() || omega > grid_.back()) {
      throw std::domain_error(
          "distribution: omega outside tabulated grid, no extrapolation");
    }
    return interpolate(omega);
  }

  // Evaluation for integrals over the support: never throws, 0 outside.
  double value_or_zero(double omega) const {
    if (flat_) {
      return std::abs(omega - center_) <= halfwidth_ ? occupation_ : 0.0;
    }
    if (omega < grid_.front() || omega > grid_.back()) return 0.0;
    return interpolate(omega);
  }

  std::pair<double, double> support() const {
    if (flat_) return {center_ - halfwidth_, center_ + halfwidth_};
    return {grid_.front(), grid_.back()};
  }

  std::vector<double> breakpoints() const {
    if (flat_) return {center_ - halfwidth_, center_ + halfwidth_};
    return grid_;
  }

  double max_occupation() const {
    if (flat_) return occupation_;
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  bool is_zero() const { return max_occupation() == 0.0; }
  bool is_flat() const { return flat_; }

 private:
  DistributionFunction() = default;

  double interpolate(double omega) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), omega);
    if (it == grid_.begin()) return values_.front();
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    if (hi == grid_.size()) return values_.back();
    const std::size_t lo = hi - 1;
    const double w = (omega - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
  }

  bool flat_ = true;
  double center_ = 0.0, halfwidth_ = 1.0, occupation_ = 0.0;
  std::vector<double> grid_, values_;
};

// Coupling-weighted incident occupation seen by the cavity.
inline double n_ac(const SystemParams& p, const DistributionFunction& n_left,
                   const DistributionFunction& n_right, double omega) {
  return (p.gamma_l * n_left(omega) + p.gamma_r * n_right(omega)) / p.gamma();
}

// ---------------------------------------------------------------------------
// Mean-field shift.  Flat wideband closed form and the general
// self-consistent root of
//   phi = eps + (eps*Gamma/pi) Int n_ac(w) dw / ((w - (w0 - eps + phi))^2 + Gamma^2).

inline double saddle_point_flat(const SystemParams& p) {
  validate(p);
  return p.epsilon * (1.0 + p.f_occ * p.gamma_l / p.gamma());
}

struct SaddleOptions {
  double rel_tol = 1e-10;
  int max_iter = 200;
};

namespace detail {

// Int N(w) / ((w - center)^2 + g^2) dw over the support of N.
inline double lorentzian_weighted(const DistributionFunction& n, double center,
                                  double g, double rel_tol) {
  if (n.is_zero()) return 0.0;
  auto [lo, hi] = n.support();
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.breakpoints = n.breakpoints();
  for (double s : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
    const double x = center + s * g;
    if (x > lo && x < hi) opt.breakpoints.push_back(x);
  }
  auto f = [&](double w) {
    const double d = w - center;
    return n.value_or_zero(w) / (d * d + g * g);
  };
  return integrate_adaptive<double>(f, lo, hi, opt).value;
}

}  // namespace detail

inline double saddle_point_general(const SystemParams& p,
                                   const DistributionFunction& n_left,
                                   const DistributionFunction& n_right,
                                   const SaddleOptions& opt = {}) {
  validate(p);
  const double g = p.gamma();
  const double quad_tol = std::min(1e-12, 0.01 * opt.rel_tol);

  auto rhs = [&](double phi) {
    const double center = p.omega0 - p.epsilon + phi;
    const double il = detail::lorentzian_weighted(n_left, center, g, quad_tol);
    const double ir = detail::lorentzian_weighted(n_right, center, g, quad_tol);
    const double weighted = (p.gamma_l * il + p.gamma_r * ir) / g;
    return p.epsilon + (p.epsilon * g / std::numbers::pi) * weighted;
  };

  const double scale = std::max(std::abs(p.epsilon), 1e-300);
  double x = p.epsilon;
  const double damping = 0.7;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iter; ++it) {
    const double target = rhs(x);
    residual = std::abs(target - x);
    if (residual <= opt.rel_tol * std::max(std::abs(target), scale)) {
      return target;
    }
    x += damping * (target - x);
  }

  // Bisection fallback on h(x) = x - rhs(x); the bracket uses the bound
  // |rhs - eps| <= |eps| * n_max.
  const double n_max =
      std::max(n_left.max_occupation(), n_right.max_occupation());
  double a = p.epsilon, b = p.epsilon * (1.0 + n_max);
  if (a > b) std::swap(a, b);
  a -= 1e-6 * scale;
  b += 1e-6 * scale;
  double ha = a - rhs(a), hb = b - rhs(b);
  if (ha * hb <= 0.0) {
    for (int it = 0; it < opt.max_iter; ++it) {
      const double m = 0.5 * (a + b);
      const double hm = m - rhs(m);
      residual = std::abs(hm);
      if (residual <= opt.rel_tol * std::max(std::abs(m), scale) ||
          (b - a) <= opt.rel_tol * scale) {
        return m;
      }
      if (ha * hm <= 0.0) {
        b = m;
      } else {
        a = m;
        ha = hm;
      }
    }
  }
  throw NumericalError(
      "saddle point: no convergence after " + std::to_string(opt.max_iter) +
      " iterations, last residual " + std::to_string(residual));
}

}  // namespace kerrflux
