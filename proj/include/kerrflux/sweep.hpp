#pragma once

// Parameter sweeps: sampled spectra and g2 curves, noise-versus-current
// curves, and 2-D (current, nonlinearity) maps of regime and Fano factor.
// Sweep points are independent; they are distributed over worker threads
// by index, so output does not depend on the thread count.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kerrflux/correlators.hpp"
#include "kerrflux/noise.hpp"
#include "kerrflux/params.hpp"
#include "kerrflux/transport.hpp"

namespace kerrflux {

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid: need at least 2 points");
  if (!(hi > lo)) throw std::invalid_argument("grid: need hi > lo");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = hi;
  return g;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid: need at least 2 points");
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("grid: log grid needs 0 < lo < hi");
  }
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace detail {

template <class Fn>
inline void parallel_for_indexed(std::size_t n, unsigned threads, Fn&& fn) {
  unsigned n_threads = threads != 0
                           ? threads
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sampled 1-D curves.

struct SampledCurve {
  std::vector<double> abscissa;
  std::vector<double> values;
};

// Transmission spectrum on a window centered at the bare resonance; the
// abscissa is omega - omega0.  The default window covers the shifted,
// dephasing-broadened peak.
inline double default_half_window(const SystemParams& p) {
  const auto d = derive(p);
  return std::max(10.0 * d.gamma, 4.0 * d.kappa) + std::abs(d.omega_ac - p.omega0);
}

inline SampledCurve spectrum_curve(const SystemParams& p, double half_window,
                                   std::size_t n_points,
                                   double rel_tol = 1e-8,
                                   unsigned threads = 0) {
  validate(p);
  if (!(half_window > 0.0)) {
    throw std::invalid_argument("spectrum: half_window must be > 0");
  }
  SampledCurve c;
  c.abscissa = linear_grid(-half_window, half_window, n_points);
  c.values.resize(n_points);
  detail::parallel_for_indexed(n_points, threads, [&](std::size_t i) {
    c.values[i] = transmission_point(p, p.omega0 + c.abscissa[i], rel_tol);
  });
  return c;
}

// Intensity correlation g2(t) on t in [0, t_max].
inline SampledCurve g2_curve(const SystemParams& p, double t_max,
                             std::size_t n_points) {
  validate(p);
  if (!(t_max > 0.0)) throw std::invalid_argument("g2: t_max must be > 0");
  SampledCurve c;
  c.abscissa = linear_grid(0.0, t_max, n_points);
  c.values.reserve(n_points);
  for (double t : c.abscissa) c.values.push_back(g2(p, t));
  return c;
}

// ---------------------------------------------------------------------------
// Noise along a current sweep at fixed nonlinearity.

inline std::vector<NoisePoint> noise_curve(double gamma, double gamma_r,
                                           double epsilon,
                                           const std::vector<double>& currents,
                                           double rel_tol = 1e-9,
                                           unsigned threads = 0) {
  if (!(gamma > 0.0) || !(gamma_r > 0.0) || !(gamma_r < gamma)) {
    throw std::invalid_argument("noise curve: needs 0 < gamma_r < gamma");
  }
  std::vector<NoisePoint> out(currents.size());
  detail::parallel_for_indexed(currents.size(), threads, [&](std::size_t i) {
    const double j = currents[i];
    NoisePoint pt;
    pt.j_over_gamma = j / gamma;
    pt.eps_over_gamma = epsilon / gamma;
    pt.s = s_zero_freq(gamma, gamma_r, epsilon, j, rel_tol);
    pt.fano = j > 0.0 ? pt.s / j : std::numeric_limits<double>::quiet_NaN();
    pt.scaling_gamma = scaling_exponent(gamma, gamma_r, epsilon, j, rel_tol);
    pt.regime = classify_regime(gamma, epsilon, j);
    out[i] = pt;
  });
  return out;
}

// ---------------------------------------------------------------------------
// 2-D maps over (current, nonlinearity).  values is row-major with one row
// per eps_axis entry; j_star holds the crossover current of each row.

struct MapResult {
  std::vector<double> j_axis;
  std::vector<double> eps_axis;
  std::vector<double> j_star;
  std::vector<double> values;

  double& at(std::size_t row, std::size_t col) {
    return values[row * j_axis.size() + col];
  }
  double at(std::size_t row, std::size_t col) const {
    return values[row * j_axis.size() + col];
  }
};

// Regime map; cells hold a small integer code.
inline constexpr double regime_code(NoiseRegime r) {
  switch (r) {
    case NoiseRegime::thermal: return 0.0;
    case NoiseRegime::fractional: return 1.0;
    case NoiseRegime::shot: return 2.0;
    case NoiseRegime::crossover: return 3.0;
  }
  return 3.0;
}

inline MapResult phase_map(double gamma, std::vector<double> j_axis,
                           std::vector<double> eps_axis) {
  if (!(gamma > 0.0)) throw std::invalid_argument("phase map: gamma must be > 0");
  MapResult m;
  m.j_axis = std::move(j_axis);
  m.eps_axis = std::move(eps_axis);
  m.j_star.reserve(m.eps_axis.size());
  for (double e : m.eps_axis) m.j_star.push_back(crossover_current(gamma, e));
  m.values.resize(m.j_axis.size() * m.eps_axis.size());
  for (std::size_t r = 0; r < m.eps_axis.size(); ++r) {
    for (std::size_t c = 0; c < m.j_axis.size(); ++c) {
      m.at(r, c) = regime_code(classify_regime(gamma, m.eps_axis[r], m.j_axis[c]));
    }
  }
  return m;
}

// Fano-factor map on the same axes.
inline MapResult fano_map(double gamma, double gamma_r,
                          std::vector<double> j_axis,
                          std::vector<double> eps_axis,
                          double rel_tol = 1e-7, unsigned threads = 0) {
  if (!(gamma > 0.0) || !(gamma_r > 0.0) || !(gamma_r < gamma)) {
    throw std::invalid_argument("fano map: needs 0 < gamma_r < gamma");
  }
  MapResult m;
  m.j_axis = std::move(j_axis);
  m.eps_axis = std::move(eps_axis);
  m.j_star.reserve(m.eps_axis.size());
  for (double e : m.eps_axis) m.j_star.push_back(crossover_current(gamma, e));
  m.values.resize(m.j_axis.size() * m.eps_axis.size());
  const std::size_t n_cols = m.j_axis.size();
  detail::parallel_for_indexed(
      m.values.size(), threads, [&](std::size_t idx) {
        const std::size_t r = idx / n_cols, c = idx % n_cols;
        m.values[idx] =
            fano(gamma, gamma_r, m.eps_axis[r], m.j_axis[c], rel_tol);
      });
  return m;
}

}  // namespace kerrflux
