#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kerrflux/transport.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace kerrflux;

namespace {

SystemParams sym() { return SystemParams{}; }

SystemParams asym() {
  SystemParams p;
  p.omega0 = 2000.0;
  p.epsilon = 1.5;
  p.gamma_l = 0.3;
  p.gamma_r = 0.9;
  p.delta = 150.0;
  p.f_occ = 3.0;
  return p;
}

}  // namespace

TEST_CASE("bare lorentzian transmission", "[transport]") {
  const auto p = sym();
  CHECK_THAT(tau_lorentzian(p, p.omega0), WithinRel(1.0, 1e-15));
  CHECK_THAT(tau_lorentzian(p, p.omega0 + 1.0), WithinRel(0.5, 1e-15));
  const auto q = asym();
  CHECK_THAT(tau_lorentzian(q, q.omega0),
             WithinRel(4.0 * 0.3 * 0.9 / 1.44, 1e-14));
}

TEST_CASE("time-domain transmission amplitude", "[transport]") {
  const auto p = sym();
  CHECK_THAT(std::abs(transmission_time(p, 0.0)),
             WithinRel(resonant_weight(p), 1e-15));
  CHECK_THAT(std::abs(transmission_time(p, 0.1)),
             WithinRel(0.419760825503507, 1e-9));
  // Phase advances at the shifted resonance frequency.
  const auto v = transmission_time(p, 1e-3);
  CHECK_THAT(std::arg(v), WithinAbs(-derive(p).omega_ac * 1e-3, 1e-9));
  // |T| is even in t.
  CHECK(std::abs(transmission_time(p, -0.4)) ==
        std::abs(transmission_time(p, 0.4)));
}

TEST_CASE("cosine transform kernel against closed forms", "[transport]") {
  EvenDecayTransform tr;
  tr.prefactor = 1.0;
  tr.rate = 1.0;
  auto zero = [](double) { return 0.0; };
  CHECK_THAT(fourier_even_decay(tr, zero, 0.0), WithinRel(2.0, 1e-9));
  CHECK_THAT(fourier_even_decay(tr, zero, 2.0), WithinRel(0.4, 1e-9));
  // Extra linear exponent just shifts the rate.
  auto linear = [](double t) { return 0.5 * t; };
  CHECK_THAT(fourier_even_decay(tr, linear, 0.0),
             WithinRel(2.0 / 1.5, 1e-9));
}

TEST_CASE("transmission spectrum reference points", "[transport]") {
  const auto p = sym();
  const double w_ac = derive(p).omega_ac;
  CHECK_THAT(transmission_point(p, w_ac), WithinRel(0.288916170898508, 1e-7));
  CHECK_THAT(transmission_point(p, w_ac + 3.0),
             WithinRel(0.209353054993551, 1e-7));
  const auto q = asym();
  CHECK_THAT(transmission_point(q, derive(q).omega_ac + 1.7),
             WithinRel(0.286905778421567, 1e-7));
}

TEST_CASE("spectrum is even about the shifted resonance",
          "[transport][property]") {
  const auto p = asym();
  // omega_ac = 1999.625 and these offsets are exactly representable, so
  // the two detunings are exact negations and the transforms identical.
  const double w_ac = derive(p).omega_ac;
  for (double d : {0.25, 1.0, 4.0, 11.0}) {
    CHECK(transmission_point(p, w_ac + d) == transmission_point(p, w_ac - d));
  }
}

TEST_CASE("linear cavity reproduces the breit-wigner line",
          "[transport][property]") {
  auto p = sym();
  p.epsilon = 0.0;
  for (double d = -10.0; d <= 10.0; d += 1.25) {
    const double omega = p.omega0 + d;
    CHECK_THAT(transmission_point(p, omega, 1e-9),
               WithinRel(tau_lorentzian(p, omega), 1e-6));
  }
}

TEST_CASE("strong dephasing: gaussian peak and width", "[transport]") {
  auto p = sym();
  p.epsilon = 20.0;
  const auto d = derive(p);
  CHECK_THAT(d.kappa, WithinRel(28.2842712474619, 1e-12));

  CHECK_THAT(gaussian_asymptote(p, d.omega_ac),
             WithinRel(0.0313328534328875, 1e-12));
  CHECK_THAT(transmission_point(p, d.omega_ac),
             WithinRel(0.0311212188465143, 1e-6));

  // Half-maximum crossing by bisection; full width against 4 kappa
  // sqrt(ln 2).
  const double half = 0.5 * transmission_point(p, d.omega_ac);
  double lo = 0.0, hi = 3.0 * d.kappa;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (transmission_point(p, d.omega_ac + mid) > half ? lo : hi) = mid;
  }
  CHECK_THAT(2.0 * lo, WithinRel(93.6225926706941, 1e-5));
  CHECK_THAT(2.0 * lo,
             WithinRel(4.0 * d.kappa * std::sqrt(std::numbers::ln2), 0.02));
}

TEST_CASE("gaussian asymptote needs dephasing", "[transport]") {
  auto p = sym();
  p.epsilon = 0.0;
  CHECK_THROWS_AS(gaussian_asymptote(p, p.omega0), std::domain_error);
}

TEST_CASE("spectral weight obeys the sum rule", "[transport]") {
  const auto r = spectral_weight(sym());
  CHECK_THAT(r.weight, WithinRel(0.499975697777871, 1e-7));
  CHECK_THAT(r.exact, WithinRel(0.5, 1e-15));
  CHECK(r.rel_deviation < 1e-4);
  CHECK(r.imag_residue == 0.0);

  const auto ra = spectral_weight(asym());
  CHECK_THAT(ra.exact, WithinRel(2.0 * 0.3 * 0.9 / 1.2, 1e-15));
  CHECK(ra.rel_deviation < 1e-4);
}

TEST_CASE("landauer current, flat band", "[transport]") {
  auto p = sym();
  p.f_occ = 1.0;
  const auto band = DistributionFunction::flat_band(p.omega0, p.delta, p.f_occ);
  const auto vac = DistributionFunction::vacuum();
  CHECK_THAT(landauer_current(p, band, vac),
             WithinRel(0.496817007235091, 1e-10));
  CHECK_THAT(landauer_current_flat(p), WithinRel(0.496817007235092, 1e-12));

  // Default occupation: numeric and closed form still agree.
  const auto pd = sym();
  const auto band2 =
      DistributionFunction::flat_band(pd.omega0, pd.delta, pd.f_occ);
  CHECK_THAT(landauer_current(pd, band2, vac),
             WithinRel(landauer_current_flat(pd), 1e-9));
}

TEST_CASE("landauer current, tabulated band", "[transport]") {
  const auto p = sym();
  const auto tri =
      DistributionFunction::tabulated({900.0, 1000.0, 1100.0}, {0.0, 2.0, 0.0});
  const auto vac = DistributionFunction::vacuum();
  CHECK_THAT(landauer_current(p, tri, vac),
             WithinRel(0.964316272221033, 1e-8));
}

TEST_CASE("landauer current, balance and sign", "[transport][property]") {
  const auto p = sym();
  const auto band = DistributionFunction::flat_band(p.omega0, p.delta, p.f_occ);
  const auto vac = DistributionFunction::vacuum();
  CHECK(landauer_current(p, vac, vac) == 0.0);
  CHECK_THAT(landauer_current(p, band, band), WithinAbs(0.0, 1e-14));
  CHECK_THAT(landauer_current(p, vac, band),
             WithinRel(-landauer_current(p, band, vac), 1e-12));
}
