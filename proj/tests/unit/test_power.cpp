#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <random>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"
#include "exciplex/power_propagation.hpp"

using namespace exciplex;
using namespace exciplex::constants;

namespace {

struct Oracle {
  double A, B;
};

// plug-in values from the raw constants
Oracle plug_in() {
  const double hb = 6.62607015e-34 / (2 * M_PI), kb = 1.380649e-23;
  const double r = 20e-6, gamma = 2 * M_PI * 5.75e6;
  const double omega_l = 2 * M_PI * (377e12 - 6.7154e12);
  const double n_m = 100.0 / (kb * 300.0), n_x = 1e6 / (kb * 300.0);
  const double v = std::sqrt(3 * kb * 300.0 / 4.5112e-26);
  const double kappa = n_x * 20e-20 * v;
  const double d = 0.8 * 2.537e-29, tau = 1e-12;
  const double area = M_PI * r * r;
  const double A = hb * omega_l * gamma * area * n_m / 2;
  // B P = 2 D / gamma with D = chi^2 kappa tau^2 / pi and chi^2 = d^2 P / (eps0 area c hb^2)
  const double B = 2.0 / gamma * d * d / (8.8541878128e-12 * area * 299792458.0 * hb * hb) * kappa * tau * tau / M_PI;
  return {A, B};
}

}  // namespace

TEST_SUITE("power_propagation") {

TEST_CASE("coefficients match the plug-in oracle") {
  const Preset p = rb_ar_preset();
  const auto c = coefficients(p.mixture, p.fibre, p.exciplex, p.drive);
  const Oracle o = plug_in();
  CHECK(c.A == rel(o.A).epsilon(1e-10));
  CHECK(c.B == rel(o.B).epsilon(1e-10));
  CHECK(c.A == rel(134.5).epsilon(1e-3));
  CHECK(c.B == rel(4.96).epsilon(1e-3));
  CHECK(penetration_depth(c) == rel(7.44e-3).epsilon(1e-3));
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.01) == Regime::exponential);
  CHECK(classify_regime(1.0) == Regime::intermediate);
  CHECK(classify_regime(100.0) == Regime::linear);
  CHECK(to_string(Regime::linear) == "linear");
}

TEST_CASE("round trip z(P(z)) for random z") {
  std::mt19937_64 rng(11);
  for (double bp : {1e-3, 1.0, 1e3}) {
    PropagationCoefficients c{134.0, 5.0, bp / 5.0};
    const double scale = 5.0 / (c.A * c.B) + c.P_in / c.A;
    std::uniform_real_distribution<double> u(0.0, scale);
    for (int i = 0; i < 200; ++i) {
      const double z = u(rng);
      const double p = power_at(z, c);
      if (p <= 1e-14 * c.P_in) continue;  // clamped
      CHECK(std::abs(position_of_power(p, c) - z) < 1e-9 * std::max(1.0, z));
    }
  }
}

TEST_CASE("profile decreases monotonically and starts at the initial slope") {
  PropagationCoefficients c{134.0, 5.0, 1.0};
  const auto prof = power_profile(c, 0.01, 101);
  CHECK(prof.power.front() == rel(1.0));
  for (std::size_t i = 1; i < prof.power.size(); ++i) CHECK(prof.power[i] < prof.power[i - 1]);
  const double h = 1e-8;
  CHECK((power_at(h, c) - 1.0) / h == rel(initial_slope(c)).epsilon(1e-5));
  CHECK(initial_slope(c) == rel(-134.0 * 5.0 / 6.0));
}

TEST_CASE("limiting laws") {
  PropagationCoefficients weak{134.0, 5.0, 1e-3 / 5.0};
  for (double z : {0.0, 1e-3, 5e-3, 1e-2})
    CHECK(power_at(z, weak) == rel(beer_lambert(z, weak)).epsilon(2e-3));
  PropagationCoefficients strong{134.0, 5.0, 200.0};
  const double l = penetration_depth(strong);
  for (double f : {0.1, 0.5, 0.9})
    CHECK(std::abs(power_at(f * l, strong) - linear_law(f * l, strong)) < 5e-3 * strong.P_in);
  const double z_far = 1.2 * l;
  CHECK(power_at(z_far, strong) == rel(exponential_tail(z_far, strong)).epsilon(1e-2));
}

TEST_CASE("local diffusion rate from B P = 2 D / gamma") {
  PropagationCoefficients c{134.0, 5.0, 1.0};
  CHECK(local_diffusion_rate(0.3, c, 3.6e7) == rel(3.6e7 * 5.0 * 0.3 / 2));
}

TEST_CASE("degenerate and invalid inputs") {
  PropagationCoefficients c{134.0, 5.0, 1.0};
  CHECK_THROWS_AS(position_of_power(0.0, c), DomainError);
  CHECK_THROWS_AS(position_of_power(-1.0, c), DomainError);
  PropagationCoefficients empty{0.0, 5.0, 1.0};
  CHECK(std::isinf(penetration_depth(empty)));
  CHECK(power_at(1.0, empty) == 1.0);
}

}
