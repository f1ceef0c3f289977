#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "kerrflux/correlators.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace kerrflux;

namespace {

SystemParams sym() { return SystemParams{}; }

}  // namespace

TEST_CASE("chaotic light bunches: g2(0) = 2", "[correlators]") {
  for (double eps : {0.0, 1.0, 2.0, 10.0, 50.0}) {
    for (double f : {0.5, 1.0, 2.0, 10.0}) {
      auto p = sym();
      p.epsilon = eps;
      p.f_occ = f;
      CHECK_THAT(g2(p, 0.0), WithinAbs(2.0, 1e-12));
    }
  }
}

TEST_CASE("coherence reference values", "[correlators]") {
  const auto p = sym();
  CHECK_THAT(std::abs(g1(p, 0.1)), WithinRel(0.839521651007015, 1e-9));
  CHECK_THAT(g2(p, 0.1), WithinRel(1.70479660250954, 1e-9));
  // Four-digit tabulated values stay consistent.
  CHECK_THAT(std::abs(g1(p, 0.1)), WithinRel(0.83954, 1e-4));
  CHECK_THAT(g2(p, 0.1), WithinRel(1.70482, 1e-4));
}

TEST_CASE("gaussian-field relation links g1 and g2",
          "[correlators][property]") {
  for (double eps : {0.0, 2.0, 15.0}) {
    auto p = sym();
    p.epsilon = eps;
    for (double t : {0.0, 0.05, 0.3, 1.0, 2.5}) {
      const double a = std::abs(g1(p, t));
      CHECK_THAT(g2(p, t) - 1.0, WithinAbs(a * a, 1e-12));
    }
  }
}

TEST_CASE("g1 oscillates at the shifted resonance", "[correlators]") {
  const auto p = sym();
  const double t = 1e-3;
  CHECK_THAT(std::arg(g1(p, t)), WithinAbs(-derive(p).omega_ac * t, 1e-9));
  CHECK(g1(p, 0.0) == std::complex<double>(1.0, 0.0));
  // Negative delay conjugates.
  const auto v = g1(p, 0.2);
  const auto w = g1(p, -0.2);
  CHECK(w == std::conj(v));
}

TEST_CASE("g2 is even and decays to 1", "[correlators][property]") {
  const auto p = sym();
  CHECK(g2(p, -0.7) == g2(p, 0.7));
  double prev = 2.0;
  for (double t : {0.1, 0.3, 0.8, 2.0, 6.0}) {
    const double v = g2(p, t);
    CHECK(v < prev);
    CHECK(v >= 1.0);
    prev = v;
  }
  CHECK_THAT(g2(p, 12.0), WithinAbs(1.0, 1e-10));
}

TEST_CASE("strong dephasing makes g2 - 1 gaussian at short times",
          "[correlators][property]") {
  auto p = sym();
  p.epsilon = 100.0 / std::numbers::sqrt2;  // kappa = 100 gamma
  const auto d = derive(p);
  CHECK_THAT(d.kappa, WithinRel(100.0, 1e-12));
  for (double t : {1e-3, 3e-3, 7e-3, 1e-2}) {
    const double gauss =
        std::exp(-2.0 * d.kappa * d.kappa * t * t - 2.0 * d.gamma * t);
    const double ratio = (g2(p, t) - 1.0) / gauss;
    // Leading deviation of the exponent is 2 kappa^2 t^2 * (2 gamma t / 3).
    const double bound =
        1.2 * (4.0 * d.gamma * d.kappa * d.kappa * t * t * t / 3.0) + 1e-9;
    CHECK_THAT(ratio, WithinAbs(1.0, bound));
  }
}

TEST_CASE("weak dephasing keeps g2 - 1 exponential", "[correlators][property]") {
  auto p = sym();
  p.f_occ = 0.001;  // j = 5e-4 << j_star: envelope decay is negligible
  const auto d = derive(p);
  REQUIRE(d.current_j < 0.1 * d.j_star);
  for (double t : {0.2, 0.6, 1.2}) {
    CHECK_THAT(g2(p, t) - 1.0,
               WithinRel(std::exp(-2.0 * d.gamma * t), 0.02));
  }
}

TEST_CASE("g2 regime classification", "[correlators]") {
  CHECK(g2_regime(sym()) == G2Regime::crossover);

  auto linear = sym();
  linear.epsilon = 0.0;
  CHECK(g2_regime(linear) == G2Regime::lorentzian);

  auto weak = sym();
  weak.f_occ = 0.001;
  CHECK(g2_regime(weak) == G2Regime::lorentzian);

  auto strong = sym();
  strong.epsilon = 20.0;
  CHECK(g2_regime(strong) == G2Regime::gaussian);

  CHECK(std::string(to_string(G2Regime::gaussian)) == "gaussian");
  CHECK(std::string(to_string(G2Regime::lorentzian)) == "lorentzian");
  CHECK(std::string(to_string(G2Regime::crossover)) == "crossover");
}
