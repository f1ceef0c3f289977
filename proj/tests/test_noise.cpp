#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kerrflux/noise.hpp"
#include "kerrflux/sweep.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace kerrflux;

TEST_CASE("dephasing-free noise spectrum", "[noise]") {
  const SystemParams p;  // j = 1
  CHECK_THAT(s0_spectrum(p, 0.0), WithinRel(0.5, 1e-14));
  CHECK_THAT(s0_spectrum(p, 0.0), WithinRel(s_thermal(p.gamma(), 1.0), 1e-14));
  // Lorentzian of halfwidth 2 gamma.
  CHECK_THAT(s0_spectrum(p, 2.0), WithinRel(0.25, 1e-14));
  CHECK(s0_spectrum(p, 3.0) == s0_spectrum(p, -3.0));
}

TEST_CASE("zero-frequency noise reference values", "[noise]") {
  CHECK_THAT(s_zero_freq(1.0, 0.5, 0.0, 1.0), WithinRel(0.5, 1e-9));
  CHECK_THAT(s_zero_freq(1.0, 0.5, 2.0, 1.0),
             WithinRel(0.182437308272431, 1e-7));
  CHECK_THAT(s_zero_freq(1.0, 0.5, 10.0, 1.0),
             WithinRel(0.042663516691948, 1e-7));
  CHECK_THAT(s_zero_freq(1.2, 0.9, 1.5, 1.35),
             WithinRel(0.450128749297498, 1e-7));
  CHECK(s_zero_freq(1.0, 0.5, 2.0, 0.0) == 0.0);
  // Sign of the nonlinearity cannot matter.
  CHECK(s_zero_freq(1.0, 0.5, -2.0, 1.0) == s_zero_freq(1.0, 0.5, 2.0, 1.0));
}

TEST_CASE("noise through system parameters", "[noise]") {
  const SystemParams p;
  CHECK_THAT(s_zero_freq_at(p), WithinRel(0.182437308272431, 1e-7));
}

TEST_CASE("noise spectrum values and symmetry", "[noise]") {
  CHECK_THAT(noise_spectrum(1.0, 0.5, 2.0, 1.0, 0.0),
             WithinRel(0.182437308272431, 1e-7));
  CHECK_THAT(noise_spectrum(1.0, 0.5, 2.0, 1.0, 3.0),
             WithinRel(0.15963969936611, 1e-7));
  CHECK(noise_spectrum(1.0, 0.5, 2.0, 1.0, 4.0) ==
        noise_spectrum(1.0, 0.5, 2.0, 1.0, -4.0));
  CHECK_THROWS_AS(noise_spectrum(0.0, 0.5, 2.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("closed form of the strong-dephasing noise", "[noise]") {
  CHECK_THAT(s_closed_form(0.5, 10.0, 1.0),
             WithinRel(0.0443113462726379, 1e-12));
  CHECK(std::isinf(s_closed_form(0.5, 0.0, 1.0)));
  CHECK(s_closed_form(0.5, 10.0, 0.0) == 0.0);

  // Equivalent expression through kappa: S = j^2 sqrt(pi/8) / kappa.
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double gr = u(gen), e = u(gen), j = u(gen);
    const double kappa = kappa_from_current(gr, e, j);
    CHECK_THAT(s_closed_form(gr, e, j),
               WithinRel(j * j * std::sqrt(std::numbers::pi / 8.0) / kappa,
                         1e-12));
  }

  // In its regime of validity it tracks the integral within a few percent.
  const double num = s_zero_freq(1.0, 0.5, 10.0, 1.0);
  const double closed = s_closed_form(0.5, 10.0, 1.0);
  CHECK(std::abs(num / closed - 1.0) < 0.05);
}

TEST_CASE("noise asymptotes", "[noise]") {
  CHECK_THAT(s_thermal(1.0, 3.0), WithinRel(4.5, 1e-15));
  CHECK_THAT(s_shot(0.5, 10.0, 2.0),
             WithinRel(std::sqrt(std::numbers::pi / 2.0) * 0.1, 1e-14));
  CHECK_THAT(s_shot_frac(0.5, 10.0, 4.0),
             WithinRel(std::sqrt(std::numbers::pi * 0.5) / 20.0 * 8.0, 1e-14));
  // The fractional branch is the shot Fano times sqrt(j), consistently.
  const double j = 0.04;
  CHECK_THAT(s_shot_frac(0.5, 10.0, j) / j,
             WithinRel(fano_frac(0.5, 10.0, j), 1e-13));
}

TEST_CASE("fano factor", "[noise]") {
  CHECK_THAT(fano(1.0, 0.5, 10.0, 100.0),
             WithinRel(0.0623217107281441, 1e-6));
  CHECK_THAT(fano_shot(1.0, 10.0), WithinRel(0.0626657068657750, 1e-12));
  CHECK(std::abs(fano(1.0, 0.5, 10.0, 100.0) / fano_shot(1.0, 10.0) - 1.0) <
        0.006);
  CHECK_THAT(fano_thermal(1.0, 1.0), WithinRel(0.5, 1e-15));
  CHECK(std::isnan(fano(1.0, 0.5, 2.0, 0.0)));
}

TEST_CASE("noise-current scaling exponent", "[noise]") {
  // Thermal: S ~ j^2.
  CHECK_THAT(scaling_exponent(1.0, 0.5, 0.1, 0.01),
             WithinRel(1.9999490048164, 1e-5));
  // Fractional: S ~ j^{3/2}.
  CHECK_THAT(scaling_exponent(1.0, 0.5, 100.0, 0.05),
             WithinRel(1.48846390432145, 1e-5));
  // Shot: S ~ j.
  CHECK_THAT(scaling_exponent(1.0, 0.5, 0.1, 1e4),
             WithinRel(1.00058199391877, 1e-5));
  // Linear cavity: exactly quadratic.
  CHECK_THAT(scaling_exponent(1.0, 0.5, 0.0, 1.0), WithinRel(2.0, 1e-6));
  CHECK_THROWS_AS(scaling_exponent(1.0, 0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("regime classification boundaries", "[noise]") {
  // Weak nonlinearity.
  CHECK(classify_regime(1.0, 0.1, 1.0) == NoiseRegime::thermal);
  CHECK(classify_regime(1.0, 0.1, 100.0) == NoiseRegime::shot);
  CHECK(classify_regime(1.0, 0.1, 30.0) == NoiseRegime::crossover);
  // Strong nonlinearity.
  CHECK(classify_regime(1.0, 100.0, 0.05) == NoiseRegime::fractional);
  CHECK(classify_regime(1.0, 100.0, 9e-6) == NoiseRegime::thermal);
  CHECK(classify_regime(1.0, 100.0, 20.0) == NoiseRegime::shot);
  CHECK(classify_regime(1.0, 100.0, 0.5) == NoiseRegime::crossover);
  // Intermediate nonlinearity never resolves a pure power law.
  CHECK(classify_regime(1.0, 1.0, 1.0) == NoiseRegime::crossover);
  // No nonlinearity: thermal at any current.
  CHECK(classify_regime(1.0, 0.0, 1e6) == NoiseRegime::thermal);
  // Sign-blind.
  CHECK(classify_regime(1.0, -100.0, 0.05) == NoiseRegime::fractional);
}

TEST_CASE("weak nonlinearity never shows the fractional law",
          "[noise][property]") {
  for (double e : {1e-4, 1e-2, 0.1}) {
    for (double j = 1e-6; j <= 1e6; j *= 10.0) {
      CHECK(classify_regime(1.0, e, j) != NoiseRegime::fractional);
    }
  }
}

TEST_CASE("noise curve sweep is self-consistent", "[noise][sweep]") {
  const auto currents = log_grid(0.1, 10.0, 5);
  const auto pts = noise_curve(1.0, 0.5, 2.0, currents);
  REQUIRE(pts.size() == 5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK_THAT(pts[i].j_over_gamma, WithinRel(currents[i], 1e-14));
    CHECK_THAT(pts[i].fano, WithinRel(pts[i].s / currents[i], 1e-12));
    CHECK(pts[i].regime == classify_regime(1.0, 2.0, currents[i]));
    CHECK(pts[i].scaling_gamma > 0.9);
    CHECK(pts[i].scaling_gamma < 2.1);
  }
  // S grows with current.
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].s > pts[i - 1].s);
}

TEST_CASE("regime names", "[noise]") {
  CHECK(std::string(to_string(NoiseRegime::thermal)) == "thermal");
  CHECK(std::string(to_string(NoiseRegime::fractional)) == "fractional");
  CHECK(std::string(to_string(NoiseRegime::shot)) == "shot");
  CHECK(std::string(to_string(NoiseRegime::crossover)) == "crossover");
}
