#include <doctest.h>

#include "approx.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"
#include "exciplex/scattering.hpp"

using namespace exciplex;
using namespace exciplex::constants;

namespace {

constexpr double mu = 4.5112e-26;

double wrap(double x) { return std::remainder(x, M_PI); }

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("zero potential has no phase shift") {
  const auto z = ScatteringPotential::zero();
  for (int l : {0, 1, 5})
    for (double k : {1e9, 1e10, 1e11}) CHECK(std::abs(phase_shift(k, l, z, mu)) < 1e-10);
  PartialWaveSet pw{1e10, {0.0, 0.0, 0.0}, true};
  CHECK(cross_section(pw) == 0.0);
}

TEST_CASE("hard sphere against spherical Bessel closed forms") {
  const double a = 3e-10;
  const auto hs = ScatteringPotential::hard_sphere(a);
  PhaseShiftOptions fine;
  fine.step_fraction = 0.01;
  for (double ka : {0.01, 0.1, 1.0, 3.0, 10.0}) {
    const double k = ka / a;
    CHECK(std::abs(wrap(phase_shift(k, 0, hs, mu, fine) + ka)) < 1e-6);
    const double d1 = std::atan(std::sph_bessel(1, ka) / std::sph_neumann(1, ka));
    CHECK(std::abs(wrap(phase_shift(k, 1, hs, mu, fine) - d1)) < 1e-6);
    const double d3 = std::atan(std::sph_bessel(3, ka) / std::sph_neumann(3, ka));
    CHECK(std::abs(wrap(phase_shift(k, 3, hs, mu, fine) - d3)) < 1e-6);
  }
}

TEST_CASE("square well s-wave against the transcendental solution") {
  const double r = 5e-10, k0 = 2.0 / r;
  const double depth = hbar * k0 * k0 / (2 * mu);
  const auto sw = ScatteringPotential::square_well(depth, r);
  PhaseShiftOptions fine;
  fine.step_fraction = 1e-3;
  for (double kr : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    const double k = kr / r, kk = std::sqrt(k * k + k0 * k0);
    const double exact = std::atan(k / kk * std::tan(kk * r)) - kr;
    CHECK(std::abs(wrap(phase_shift(k, 0, sw, mu, fine) - exact)) < 1e-6);
  }
}

TEST_CASE("well with a zero-energy bound state is resonant") {
  const double r = 5e-10, k0 = M_PI / (2 * r);
  const auto sw = ScatteringPotential::square_well(hbar * k0 * k0 / (2 * mu), r);
  PhaseShiftOptions fine;
  fine.step_fraction = 1e-3;
  const double k = 0.01 / r, kk = std::sqrt(k * k + k0 * k0);
  const double d = phase_shift(k, 0, sw, mu, fine);
  CHECK(std::abs(wrap(d - (std::atan(k / kk * std::tan(kk * r)) - k * r))) < 1e-4);
  CHECK(std::abs(wrap(d - M_PI / 2)) < 0.02);
}

TEST_CASE("s-wave at pi/2 saturates the unitarity limit") {
  PartialWaveSet pw{2e10, {M_PI / 2}, true};
  CHECK(cross_section(pw) == rel(4 * M_PI / (4e20)));
  CHECK(cross_section(pw) == rel(unitarity_bound(pw)));
  pw.converged = false;
  CHECK_THROWS_AS(cross_section(pw), NumericalError);
}

TEST_CASE("Morse cross sections respect the unitarity bound and converge in l") {
  const Preset p = rb_ar_preset();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  for (double v : {50.0, 200.0, 500.0, 1500.0}) {
    const auto pw = partial_waves(mu * v / hbar, pot, mu);
    REQUIRE(pw.converged);
    CHECK(cross_section(pw) <= unitarity_bound(pw));
    for (std::size_t l = pw.delta.size() - 5; l < pw.delta.size(); ++l)
      CHECK(std::abs(std::sin(pw.delta[l])) < 1e-6);
    double prev = 0.0;
    for (int lc = 0; lc < static_cast<int>(pw.delta.size()); lc += 10) {
      const double s = cross_section(pw, lc);
      CHECK(s >= prev);
      prev = s;
    }
    // truncation bound: the last tail entries carry < 0.1 % of sigma
    const int n = static_cast<int>(pw.delta.size());
    CHECK(cross_section(pw) - cross_section(pw, n - 6) < 1e-3 * cross_section(pw));
  }
}

TEST_CASE("phase shift is continuous in k after branch tracking") {
  const Preset p = rb_ar_preset();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  std::vector<double> ks;
  for (int i = 0; i < 80; ++i) ks.push_back(2e10 + i * 4e8);
  for (int l : {0, 10}) {
    const auto d = phase_shift_curve(ks, l, pot, mu);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(std::abs(d[i] - d[i - 1]) < 0.5);
    for (std::size_t i = 0; i < d.size(); ++i)
      CHECK(std::abs(wrap(d[i] - phase_shift(ks[i], l, pot, mu))) < 1e-9);
  }
}

TEST_CASE("effective potential adds the centrifugal term") {
  const Preset p = rb_ar_preset();
  const auto& u = p.exciplex.excited();
  CHECK(effective_potential(u, 0, mu, 4e-10) == u(4e-10));
  double prev = effective_potential(u, 0, mu, 4e-10);
  for (int l = 1; l < 100; l += 7) {
    const double v = effective_potential(u, l, mu, 4e-10);
    CHECK(v > prev);
    prev = v;
  }
  const double a0 = u.r_eq();
  CHECK(centrifugal_energy(40, mu, a0) == rel(hbar * 40 * 41 / (2 * mu * a0 * a0)));
}

TEST_CASE("excited well depth at l = 40 is reduced by less than 10 percent" * doctest::may_fail()) {
  // the shipped excited curve loses about a third of its depth at l = 40
  const Preset p = rb_ar_preset();
  const auto& u = p.exciplex.excited();
  double lowest = 1e300;
  for (int i = 0; i < 4000; ++i) {
    const double r = 2.5e-10 + i * 1e-13;
    lowest = std::min(lowest, effective_potential(u, 40, mu, r));
  }
  const double depth = u.asymptote() - lowest;
  CHECK(depth > 0.9 * u.depth());
}

TEST_CASE("Maxwell distribution normalisation and peak") {
  const VelocityDistribution d{300.0, mu};
  boost::math::quadrature::exp_sinh<double> integrator;
  const double norm = integrator.integrate([&](double v) { return maxwell_density(v, d); });
  CHECK(std::abs(norm - 1.0) < 1e-8);
  const double vp = std::sqrt(2 * 1.380649e-23 * 300.0 / mu);
  CHECK(d.most_probable_speed() == rel(vp));
  CHECK(vp == rel(428.0).epsilon(2e-3));
  const double h = 1e-3;
  CHECK(std::abs(maxwell_density(vp + h, d) - maxwell_density(vp - h, d)) < 1e-12 * maxwell_density(vp, d));
}

TEST_CASE("barrier l_cut against direct evaluation") {
  const Preset p = rb_ar_preset();
  const double a0 = p.exciplex.excited().r_eq(), omega = p.exciplex.upconversion();
  const double e_av = 1.5 * boltzmann * 300.0 / hbar;
  for (auto [crit, e] : {std::pair{BarrierCriterion::mean_energy, e_av},
                         std::pair{BarrierCriterion::mean_energy_minus_upconversion, e_av - omega}}) {
    const int l = barrier_l_cut(300.0, mu, a0, omega, crit);
    CHECK(centrifugal_energy(l, mu, a0) < e);
    CHECK(centrifugal_energy(l + 1, mu, a0) >= e);
  }
}

TEST_CASE("thermal cross section: weights, restriction limits and calibration band") {
  const Preset p = rb_ar_preset();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  const auto th = thermal_cross_section(300.0, pot, mu);
  double wsum = 0.0, check = 0.0;
  for (std::size_t i = 0; i < th.weights.size(); ++i) {
    wsum += th.weights[i];
    check += th.weights[i] * th.sigma[i];
  }
  // a constant sigma would be reproduced exactly
  CHECK(std::abs(wsum + th.tail_mass - 1.0) < 1e-8);
  CHECK(th.tail_mass < 1e-6);
  CHECK(th.total == rel(check).epsilon(1e-12));
  CHECK(th.cumulative.back() == rel(th.total).epsilon(1e-10));
  CHECK(th.cumulative.front() > 0.0);
  CHECK(cooling_cross_section(300.0, pot, mu, 0) == rel(th.cumulative.front()).epsilon(1e-10));
  const double ratio = th.total / (572.0 * angstrom2);
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("thermal cross section is stable under refinement") {
  const Preset p = rb_ar_preset();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  ThermalOptions base;
  base.panels = 2;
  ThermalOptions fine;
  fine.panels = 4;
  fine.partial_waves.tail = 1e-8;
  const double a = thermal_cross_section(300.0, pot, mu, base).total;
  const double b = thermal_cross_section(300.0, pot, mu, fine).total;
  CHECK(a == rel(b).epsilon(0.01));
}

TEST_CASE("low temperature approaches the zero-energy limit") {
  const double a = 3e-10, t = 1e-3;
  const auto hs = ScatteringPotential::hard_sphere(a);
  const double s = thermal_cross_section(t, hs, mu).total;
  // sin^2(ka)/k^2 = a^2 (1 - (ka)^2/3 + ...), thermally <k^2> = 3 mu k_B T / hbar^2
  const double ka2 = 3 * mu * boltzmann * t / (hbar * hbar) * a * a;
  CHECK(ka2 < 0.05);
  CHECK(s == rel(4 * M_PI * a * a * (1 - ka2 / 3)).epsilon(2e-4));
  CHECK(s < 4 * M_PI * a * a);
}

}
