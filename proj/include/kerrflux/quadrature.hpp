#pragma once

// Adaptive composite Gauss-Legendre quadrature.
//
// Panels are laid out from caller-supplied breakpoints and an optional
// maximum panel width, then refined by bisection until the error estimate
// |GL15(panel) - GL15(left) - GL15(right)| meets a per-panel share of the
// requested tolerance.  Refinement is budgeted; exhausting the budget
// raises NumericalError carrying the achieved tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace kerrflux {

// Raised when an iterative numeric procedure cannot reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;                 // floor for near-zero integrals
  double max_panel_width = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;      // forced panel boundaries inside (a,b)
  std::size_t max_rule_evals = 400000;  // total 15-point rule applications
  int max_depth = 52;
};

namespace detail {

// 15-point Gauss-Legendre rule on [-1, 1]; nodes symmetric about 0.
inline constexpr double kGl15Node[8] = {
    0.00000000000000000, 0.20119409399743452, 0.39415134707756337,
    0.57097217260853885, 0.72441773136017005, 0.84820658341042722,
    0.93727339240070590, 0.98799251802048543};
inline constexpr double kGl15Weight[8] = {
    0.20257824192556127, 0.19843148532711158, 0.18616100001556221,
    0.16626920581699393, 0.13957067792615431, 0.10715922046717194,
    0.070366047488108124, 0.030753241996117268};

template <class F>
auto gl15(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  auto acc = f(c) * kGl15Weight[0];
  for (int k = 1; k < 8; ++k) {
    const double d = h * kGl15Node[k];
    acc += (f(c - d) + f(c + d)) * kGl15Weight[k];
  }
  return acc * h;
}

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }

template <class F>
struct QuadContext {
  F& f;
  std::size_t rule_evals = 0;
  std::size_t budget = 0;
  int max_depth = 52;
  double min_width = 0.0;
};

// Returns {refined value, error estimate} for one panel whose coarse
// GL15 value is `whole`.  The error budget `tol` is absolute.
template <class F, class V>
std::pair<V, double> refine_panel(QuadContext<F>& ctx, double lo, double hi,
                                  V whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  ctx.rule_evals += 2;
  const V left = gl15(ctx.f, lo, mid);
  const V right = gl15(ctx.f, mid, hi);
  const V better = left + right;
  const double err = quad_norm(whole - better);
  if (err <= tol || depth >= ctx.max_depth || (hi - lo) <= ctx.min_width ||
      ctx.rule_evals >= ctx.budget) {
    return {better, err};
  }
  auto [lv, le] = refine_panel(ctx, lo, mid, left, 0.5 * tol, depth + 1);
  auto [rv, re] = refine_panel(ctx, mid, hi, right, 0.5 * tol, depth + 1);
  return {lv + rv, le + re};
}

}  // namespace detail

template <class V>
struct QuadratureResult {
  V value{};
  double error_estimate = 0.0;
  std::size_t rule_evals = 0;
};

// Integrates f over [a, b].  V is double or std::complex<double>.
template <class V, class F>
QuadratureResult<V> integrate_adaptive(F&& f, double a, double b,
                                       const QuadratureOptions& opt = {}) {
  if (!(a < b)) throw std::invalid_argument("quadrature: require a < b");
  detail::QuadContext<F> ctx{f};
  ctx.budget = opt.max_rule_evals;
  ctx.max_depth = opt.max_depth;
  ctx.min_width = (b - a) * 1e-15;

  std::vector<double> edges;
  edges.push_back(a);
  for (double x : opt.breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    std::size_t n = 1;
    if (std::isfinite(opt.max_panel_width) && opt.max_panel_width > 0.0) {
      n = static_cast<std::size_t>(std::ceil((hi - lo) / opt.max_panel_width));
      n = std::max<std::size_t>(n, 1);
    }
    if (panels.size() + n > opt.max_rule_evals) {
      throw NumericalError(
          "quadrature: initial panel layout exceeds evaluation budget (" +
          std::to_string(panels.size() + n) + " panels)");
    }
    const double w = (hi - lo) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      panels.emplace_back(lo + static_cast<double>(k) * w,
                          k + 1 == n ? hi : lo + static_cast<double>(k + 1) * w);
    }
  }

  std::vector<V> coarse(panels.size());
  V total{};
  for (std::size_t i = 0; i < panels.size(); ++i) {
    coarse[i] = detail::gl15(f, panels[i].first, panels[i].second);
    total += coarse[i];
  }
  ctx.rule_evals = panels.size();

  const double tol_abs =
      std::max(opt.abs_tol, opt.rel_tol * detail::quad_norm(total));
  const double tol_panel =
      std::max(tol_abs / static_cast<double>(panels.size()),
               std::numeric_limits<double>::denorm_min());

  QuadratureResult<V> out;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    auto [v, e] = detail::refine_panel(ctx, panels[i].first, panels[i].second,
                                       coarse[i], tol_panel, 0);
    out.value += v;
    out.error_estimate += e;
  }
  out.rule_evals = ctx.rule_evals;

  const double tol_final =
      std::max(opt.abs_tol, opt.rel_tol * detail::quad_norm(out.value));
  if (out.error_estimate > tol_final * (1.0 + 1e-9) &&
      out.error_estimate > std::numeric_limits<double>::denorm_min()) {
    throw NumericalError("quadrature: requested tolerance " +
                         std::to_string(tol_final) + " not reached, achieved " +
                         std::to_string(out.error_estimate));
  }
  return out;
}

}  // namespace kerrflux
