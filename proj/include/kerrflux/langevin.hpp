#pragma once

// Independent stochastic check of the analytic envelope.
//
// The cavity occupation fluctuation xi(t) is an Ornstein-Uhlenbeck process
// with autocorrelation <xi(t) xi(0)> = (1/2) alpha_k(t), i.e. stationary
// variance sigma^2 = (1/2) alpha_k(0) and relaxation rate 2 gamma.  The
// transmitted-photon phase Phi(t) = epsilon Int_0^t xi dt' (trapezoid rule)
// then yields the envelope as <exp(i Phi)> and the phase variance as
// Var(Phi) = 2 D(t).
//
// Reproducibility: every trajectory draws from its own counter-seeded
// stream, trajectories are accumulated in fixed-size blocks, and blocks
// are reduced in index order, so results are bit-identical for any thread
// count.  The step-halving report couples the two resolutions through one
// noise path: because the one-step update is exact for the OU process,
// the coarse chain's xi values are the even-index samples of the fine
// chain, and the comparison isolates the trapezoid discretization error
// of Phi from the Monte Carlo noise.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kerrflux/decoherence.hpp"
#include "kerrflux/params.hpp"

namespace kerrflux {

namespace rng {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Element `index` of the splitmix64 stream seeded by `seed`: used as a
// counter-based per-trajectory seed.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed + index * 0x9E3779B97F4A7C15ULL;
  return splitmix64_next(s);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64_next(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0, 1]: strictly positive, safe under log.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Standard normals via Box-Muller, one spare cached.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.uniform();
    const double u2 = gen_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  Xoshiro256pp gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rng

// ---------------------------------------------------------------------------

struct OracleConfig {
  std::size_t n_traj = 200000;
  double dt = 5e-3;        // integrator step (units of 1/gamma scale)
  double t_max = 5.0;      // horizon; snapped to whole sampling steps
  std::size_t n_samples = 20;
  std::uint64_t seed = 20260815ULL;
  unsigned threads = 0;    // 0: hardware concurrency
};

inline void validate(const OracleConfig& c) {
  if (c.n_traj == 0) throw std::invalid_argument("oracle: n_traj must be > 0");
  if (!(c.dt > 0.0)) throw std::invalid_argument("oracle: dt must be > 0");
  if (!(c.t_max > 0.0)) throw std::invalid_argument("oracle: t_max must be > 0");
  if (c.n_samples == 0) {
    throw std::invalid_argument("oracle: n_samples must be > 0");
  }
}

struct EnsembleStats {
  std::vector<double> grid;            // sample times (excludes t = 0)
  std::vector<double> mean_z;          // <cos Phi>
  std::vector<double> mean_z_imag;     // <sin Phi>, consistent with 0
  std::vector<double> stderr_z;
  std::vector<double> var_phi;         // sample variance of Phi
  std::vector<double> var_phi_stderr;  // from the fourth moment
  std::size_t n_traj = 0;
  double dt = 0.0;
};

namespace detail {

constexpr std::size_t kBlockTraj = 4096;

// Running sums for one block of trajectories at each sample time.
struct BlockSums {
  std::vector<double> c1, s1, c2, p1, p2, p3, p4;
  explicit BlockSums(std::size_t n)
      : c1(n), s1(n), c2(n), p1(n), p2(n), p3(n), p4(n) {}

  void record(std::size_t k, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double q = phi * phi;
    c1[k] += c;
    s1[k] += s;
    c2[k] += c * c;
    p1[k] += phi;
    p2[k] += q;
    p3[k] += q * phi;
    p4[k] += q * q;
  }

  void add(const BlockSums& o) {
    for (std::size_t k = 0; k < c1.size(); ++k) {
      c1[k] += o.c1[k];
      s1[k] += o.s1[k];
      c2[k] += o.c2[k];
      p1[k] += o.p1[k];
      p2[k] += o.p2[k];
      p3[k] += o.p3[k];
      p4[k] += o.p4[k];
    }
  }
};

// Runs fn(sums, trajectory_index) for every trajectory, blockwise; the
// per-block partial sums are reduced in block order afterwards.
template <class PerTraj>
inline BlockSums run_blocks(std::size_t n_traj, std::size_t n_samples,
                            unsigned threads, PerTraj&& fn) {
  const std::size_t n_blocks = (n_traj + kBlockTraj - 1) / kBlockTraj;
  std::vector<BlockSums> partial(n_blocks, BlockSums(n_samples));

  unsigned n_threads = threads != 0 ? threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, n_blocks));

  std::atomic<std::size_t> next_block{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const std::size_t lo = b * kBlockTraj;
      const std::size_t hi = std::min(lo + kBlockTraj, n_traj);
      for (std::size_t i = lo; i < hi; ++i) fn(partial[b], i);
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BlockSums total(n_samples);
  for (const auto& b : partial) total.add(b);
  return total;
}

inline EnsembleStats finalize(const BlockSums& sums,
                              const std::vector<double>& grid,
                              std::size_t n_traj, double dt) {
  const auto n_samples = grid.size();
  const double n = static_cast<double>(n_traj);
  EnsembleStats out;
  out.grid = grid;
  out.n_traj = n_traj;
  out.dt = dt;
  out.mean_z.resize(n_samples);
  out.mean_z_imag.resize(n_samples);
  out.stderr_z.resize(n_samples);
  out.var_phi.resize(n_samples);
  out.var_phi_stderr.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double mc = sums.c1[k] / n;
    out.mean_z[k] = mc;
    out.mean_z_imag[k] = sums.s1[k] / n;
    const double var_c =
        n > 1.0 ? std::max(0.0, (sums.c2[k] - n * mc * mc) / (n - 1.0)) : 0.0;
    out.stderr_z[k] = std::sqrt(var_c / n);

    const double m1 = sums.p1[k] / n;
    const double m2 = std::max(0.0, sums.p2[k] / n - m1 * m1);
    const double raw3 = sums.p3[k] / n;
    const double raw4 = sums.p4[k] / n;
    const double m4 = std::max(
        0.0, raw4 - 4.0 * raw3 * m1 + 6.0 * (sums.p2[k] / n) * m1 * m1 -
                 3.0 * m1 * m1 * m1 * m1);
    out.var_phi[k] = n > 1.0 ? m2 * n / (n - 1.0) : 0.0;
    const double var_s2 =
        n > 1.0 ? std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n)
                : 0.0;
    out.var_phi_stderr[k] = std::sqrt(var_s2);
  }
  return out;
}

struct OuParams {
  double sigma = 0.0;       // stationary std of xi
  double epsilon = 0.0;
  std::size_t steps_per_sample = 1;
  std::vector<double> grid;
};

inline OuParams ou_setup(const SystemParams& p, const OracleConfig& cfg) {
  validate(p);
  validate(cfg);
  OuParams ou;
  ou.sigma = std::sqrt(0.5 * alpha_k_time(p, 0.0));
  ou.epsilon = p.epsilon;
  const double target_spacing = cfg.t_max / static_cast<double>(cfg.n_samples);
  ou.steps_per_sample = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(target_spacing / cfg.dt)));
  ou.grid.resize(cfg.n_samples);
  for (std::size_t k = 0; k < cfg.n_samples; ++k) {
    ou.grid[k] = static_cast<double>((k + 1) * ou.steps_per_sample) * cfg.dt;
  }
  return ou;
}

}  // namespace detail

// Ensemble statistics of exp(i Phi) and Phi on the sampling grid.
inline EnsembleStats simulate_envelope(const SystemParams& p,
                                       const OracleConfig& cfg) {
  const auto ou = detail::ou_setup(p, cfg);
  const double g = p.gamma();
  const double decay = std::exp(-2.0 * g * cfg.dt);
  const double amp = ou.sigma * std::sqrt(-std::expm1(-4.0 * g * cfg.dt));
  const double half_eps_dt = 0.5 * ou.epsilon * cfg.dt;

  auto per_traj = [&](detail::BlockSums& sums, std::size_t i) {
    rng::GaussianStream gauss(rng::stream_seed(cfg.seed, i));
    double xi = ou.sigma * gauss.next();
    double phi = 0.0;
    for (std::size_t k = 0; k < cfg.n_samples; ++k) {
      for (std::size_t s = 0; s < ou.steps_per_sample; ++s) {
        const double xi_next = xi * decay + amp * gauss.next();
        phi += half_eps_dt * (xi + xi_next);
        xi = xi_next;
      }
      sums.record(k, phi);
    }
  };

  const auto sums = detail::run_blocks(cfg.n_traj, cfg.n_samples, cfg.threads,
                                       per_traj);
  return detail::finalize(sums, ou.grid, cfg.n_traj, cfg.dt);
}

// ---------------------------------------------------------------------------
// Step-halving convergence: the fine chain runs at dt/2 on a noise path
// whose even-index samples are exactly the coarse chain's path, so
// coarse - fine differences measure the trapezoid bias alone.

struct ConvergenceReport {
  EnsembleStats coarse;
  EnsembleStats fine;
  std::vector<double> pulls;  // |mean_z difference| / stderr, per sample
  double max_pull = 0.0;
  bool converged = true;
};

inline ConvergenceReport convergence_report(const SystemParams& p,
                                            const OracleConfig& cfg) {
  const auto ou = detail::ou_setup(p, cfg);
  const double g = p.gamma();
  const double dt_f = 0.5 * cfg.dt;
  const double decay_f = std::exp(-2.0 * g * dt_f);
  const double amp_f = ou.sigma * std::sqrt(-std::expm1(-4.0 * g * dt_f));
  const double half_eps_dt_c = 0.5 * ou.epsilon * cfg.dt;
  const double half_eps_dt_f = 0.5 * ou.epsilon * dt_f;
  const std::size_t n = cfg.n_samples;

  // One pass accumulates both resolutions: sample slots [0, n) hold the
  // coarse chain, [n, 2n) the fine chain.
  auto per_traj = [&](detail::BlockSums& sums, std::size_t i) {
    rng::GaussianStream gauss(rng::stream_seed(cfg.seed, i));
    double xi = ou.sigma * gauss.next();
    double phi_c = 0.0, phi_f = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < ou.steps_per_sample; ++s) {
        const double xi_half = xi * decay_f + amp_f * gauss.next();
        const double xi_next = xi_half * decay_f + amp_f * gauss.next();
        phi_f += half_eps_dt_f * (xi + 2.0 * xi_half + xi_next);
        phi_c += half_eps_dt_c * (xi + xi_next);
        xi = xi_next;
      }
      sums.record(k, phi_c);
      sums.record(n + k, phi_f);
    }
  };

  const auto sums =
      detail::run_blocks(cfg.n_traj, 2 * n, cfg.threads, per_traj);
  detail::BlockSums coarse_sums(n), fine_sums(n);
  for (std::size_t k = 0; k < n; ++k) {
    coarse_sums.c1[k] = sums.c1[k];
    coarse_sums.s1[k] = sums.s1[k];
    coarse_sums.c2[k] = sums.c2[k];
    coarse_sums.p1[k] = sums.p1[k];
    coarse_sums.p2[k] = sums.p2[k];
    coarse_sums.p3[k] = sums.p3[k];
    coarse_sums.p4[k] = sums.p4[k];
    fine_sums.c1[k] = sums.c1[n + k];
    fine_sums.s1[k] = sums.s1[n + k];
    fine_sums.c2[k] = sums.c2[n + k];
    fine_sums.p1[k] = sums.p1[n + k];
    fine_sums.p2[k] = sums.p2[n + k];
    fine_sums.p3[k] = sums.p3[n + k];
    fine_sums.p4[k] = sums.p4[n + k];
  }

  ConvergenceReport rep;
  rep.coarse = detail::finalize(coarse_sums, ou.grid, cfg.n_traj, cfg.dt);
  rep.fine = detail::finalize(fine_sums, ou.grid, cfg.n_traj, dt_f);
  rep.pulls.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double diff = std::abs(rep.coarse.mean_z[k] - rep.fine.mean_z[k]);
    const double scale = rep.coarse.stderr_z[k];
    rep.pulls[k] = scale > 0.0 ? diff / scale : (diff > 0.0 ? INFINITY : 0.0);
    rep.max_pull = std::max(rep.max_pull, rep.pulls[k]);
  }
  rep.converged = rep.max_pull < 1.0;
  return rep;
}

}  // namespace kerrflux
