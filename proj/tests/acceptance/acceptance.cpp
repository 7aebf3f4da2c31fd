// Acceptance checks, one per criterion. Usage: acceptance [--criterion N]...
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "exciplex/bloch_dynamics.hpp"
#include "exciplex/constants.hpp"
#include "exciplex/gas_cell.hpp"
#include "exciplex/heat_solver.hpp"
#include "exciplex/power_propagation.hpp"
#include "exciplex/scattering.hpp"
#include "exciplex/thermal_balance.hpp"
#include "exciplex/wavepacket.hpp"

using namespace exciplex;
using namespace exciplex::constants;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome criterion_1() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const auto kappa = collision_rate(p.mixture, p.drive);
  const double tk = kappa.mean_interval() * kappa.rate;
  const double tg = p.exciplex.spontaneous_lifetime() * p.exciplex.linewidth();
  // "exactly" up to the last bit of a division and a product
  o.require(std::abs(tk - 1.0) <= 2e-16, fmt("tau_kappa*kappa-1 = %.1e", tk - 1.0));
  o.require(std::abs(tg - 1.0) <= 2e-16, fmt("tau_gamma*gamma-1 = %.1e", tg - 1.0));
  const double gamma = angular(5.75e6);
  o.require(p.exciplex.linewidth() == gamma, "gamma = 2pi x 5.75 MHz");
  const double tau_ns = 1e9 / gamma;
  o.require(std::abs(tau_ns - 27.68) < 0.005, fmt("tau_gamma = %.4f ns vs 27.68", tau_ns));
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const double gamma = p.exciplex.linewidth();
  const double kappa = collision_rate(p.mixture, p.drive).rate;
  double worst_mean = 0.0, worst_std = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double ratio = 0.1 * std::pow(100.0, k / 4.0);
    const auto dp = DiffusionParams::from_rates(ratio * gamma, gamma, kappa);
    MonteCarloOptions mo;
    mo.n_trajectories = 100000;
    mo.t_end = 25.0 / (2.0 * dp.diffusion_rate + gamma);
    mo.n_samples = 2;
    mo.seed = 2024 + static_cast<std::uint64_t>(k);
    mo.keep_final_samples = false;
    const auto mc = monte_carlo_bloch(dp, p.exciplex.upconversion(), mo);
    const double mean = steady_state_population(dp);
    const double sd = population_variance(dp, mo.t_end);
    const double zm = std::abs(mc.mean_population.back() - mean) / mc.stderr_mean.back();
    const double zs = std::abs(mc.std_population.back() - sd) / mc.stderr_std.back();
    worst_mean = std::max(worst_mean, zm);
    worst_std = std::max(worst_std, zs);
    o.require(zm < 3.0 && zs < 3.0,
              fmt("D/gamma=%.3g: mean %.2f SE", ratio, zm) + fmt(", std %.2f SE", zs));
  }
  o.detail += fmt("; worst %.2f / %.2f SE", worst_mean, worst_std);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const Preset p = rb_ar_preset();
  PropagationCoefficients c = coefficients(p.mixture, p.fibre, p.exciplex, p.drive);

  PropagationCoefficients weak = c;
  weak.B = 1e-3 / c.P_in;
  const double decay = 1.0 / (weak.A * weak.B);
  double err_bl = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double z = 5.0 * decay * i / 2000.0;
    const double bl = beer_lambert(z, weak);
    err_bl = std::max(err_bl, std::abs(power_at(z, weak) - bl) / bl);
  }
  o.require(err_bl < 5e-3, fmt("B P_in=1e-3: max rel. deviation from Beer-Lambert %.2e", err_bl));

  PropagationCoefficients strong = c;
  strong.B = 1e3 / c.P_in;
  const double ell = penetration_depth(strong);
  double err_lin = 0.0, err_local = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double z = 0.9 * ell * i / 2000.0;
    const double lin = linear_law(z, strong), pz = power_at(z, strong);
    err_lin = std::max(err_lin, std::abs(pz - lin) / strong.P_in);
    err_local = std::max(err_local, std::abs(pz - lin) / lin);
  }
  o.require(err_lin < 5e-3,
            fmt("B P_in=1e3: max deviation from linear law %.2e of P_in", err_lin) +
                fmt(" (%.2e of local P)", err_local));

  double trip = 0.0;
  for (const auto* cc : {&weak, &strong, &c}) {
    const double e = penetration_depth(*cc);
    // beyond z(1e-300 P_in) the profile is clamped at the representable floor
    const double z_floor = position_of_power(1e-300 * cc->P_in, *cc);
    const double zmax = std::min(std::max(5.0 / (cc->A * cc->B), 2.0 * e), z_floor);
    double worst = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double z = zmax * i / 4000.0;
      const double pz = power_at(z, *cc);
      worst = std::max(worst, std::abs(position_of_power(pz, *cc) - z) / e);
    }
    trip = std::max(trip, worst);
  }
  o.require(trip < 1e-9, fmt("round trip |z(P(z)) - z| <= %.2e l_depth down to P = 1e-300 P_in", trip));
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const double ambient = 300.0;
  const double q = volumetric_cooling(p.mixture, p.exciplex);
  const RadialProfile prof(p.fibre, q, ambient);
  const double dt = max_temperature_drop(p.mixture, p.fibre, p.exciplex);
  const double rel = std::abs(prof.wall_drop() - dt) / dt;
  o.require(rel <= 1e-10, fmt("dT_max %.6f K vs glass-branch drop, rel. %.1e", dt, rel));

  const auto sc = single_fibre_scenario(p.fibre, q, ambient);
  GridSpec g;
  g.cells_per_core_radius = 8;
  const auto f = heat_solve_2d(sc, g);
  double err = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = std::hypot(f.x(i), f.y(j));
      if (r > p.fibre.outer_radius()) continue;
      err = std::max(err, std::abs(f.at(i, j) - prof.temperature(r)));
    }
  const double frac = err / prof.centre_drop();
  o.require(frac < 5e-3, fmt("2-D vs analytic max error %.3e of the %.4f K drop", frac, prof.centre_drop()));
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const double ambient = 300.0;
  const double q = volumetric_cooling(p.mixture, p.exciplex);
  const auto single = heat_solve_2d(single_fibre_scenario(p.fibre, q, ambient));
  const auto sc = hexagonal_bundle(p.fibre, q, ambient, 2);
  const auto bundle = heat_solve_2d(sc);
  const double d1 = ambient - single.core_mean(0), d19 = ambient - bundle.core_mean(0);
  o.require(sc.cores.size() == 19, "19 cores");
  o.require(d19 > d1, fmt("central core drop %.3f K vs single %.3f K", d19, d1));
  const auto sec = cladding_radial_section(bundle, sc);
  bool monotone = sec.radius.size() > 3;
  for (std::size_t i = 1; i < sec.temperature.size(); ++i)
    monotone = monotone && sec.temperature[i] > sec.temperature[i - 1];
  o.require(monotone, fmt("radial section monotone over %.0f annuli, %.3f K to %.3f K",
                          static_cast<double>(sec.radius.size()), sec.temperature.front(),
                          sec.temperature.back()));
  return o;
}

double slope(const std::vector<WavepacketSample>& s, std::size_t from,
             const std::function<double(const WavepacketSample&)>& y) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(s.size() - from);
  for (std::size_t i = from; i < s.size(); ++i) {
    const double t = s[i].time, v = y(s[i]);
    st += t;
    sy += v;
    stt += t * t;
    sty += t * v;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

Outcome criterion_6() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const double mu = p.mixture.reduced_mass();

  // free Gaussian over 10 ps
  CollisionConfig fc = rb_ar_collision(p);
  fc.ground = [](double) { return 0.0; };
  fc.excited = [](double) { return 0.0; };
  fc.laser_frequency = 0.0;
  fc.rabi = 0.0;
  fc.flatness_scale = 0.0;
  fc.grid = {1e-10, 101e-10, 2048};
  fc.packet.centre = 80e-10;
  fc.dt = 1e-15;
  fc.sample_every = 100;
  const auto free_run = evolve(gaussian_packet(fc), fc, 10000);
  const double s0 = 0.5 / (fc.packet.width * fc.packet.width);
  double disp = 0.0;
  for (const auto& s : free_run.samples) {
    const double x = hbar * s.time / (2 * mu * s0);
    const double exact = s0 * (1 + x * x);
    disp = std::max(disp, std::abs(s.width_ground * s.width_ground - exact) / exact);
  }
  o.require(disp < 1e-3, fmt("free dispersion max rel. error %.1e", disp));

  const SpatialGrid g{2e-10, 12e-10, 800};
  double lev = 0.0;
  for (const auto& pot : {p.exciplex.ground(), p.exciplex.excited()}) {
    const auto num = morse_levels_numeric(pot, mu, g, 5);
    const auto ana = morse_levels_analytic(pot, mu, 5);
    for (int i = 0; i < 5; ++i) lev = std::max(lev, std::abs(num[i] - ana[i]) / ana[i]);
  }
  o.require(lev < 1e-4, fmt("Morse levels max rel. error %.1e", lev));

  const CollisionConfig cc = rb_ar_collision(p);
  const auto run = evolve(gaussian_packet(cc), cc);
  o.require(run.norm_drift < 1e-6, fmt("norm drift %.1e", run.norm_drift));
  const auto pl = excited_plateau(run);
  o.require(pl.value >= 1e-6 && pl.value <= 1e-4, fmt("outgoing P_e %.2e", pl.value));
  const std::size_t from = run.samples.size() * 4 / 5;
  const double vg = slope(run.samples, from, [](const auto& s) { return s.mean_r_ground; });
  const double ve = slope(run.samples, from, [](const auto& s) { return s.mean_r_excited; });
  o.require(ve < vg, fmt("d<r>_e/dt %.0f m/s < d<r>_g/dt %.0f m/s", ve, vg));
  const auto win = absorption_time(run);
  const double tau = win ? win->duration : 0.0;
  o.require(tau >= 0.3e-12 && tau <= 3e-12, fmt("tau %.3f ps", tau * 1e12));
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const double mu = rb_ar_preset().mixture.reduced_mass();
  PhaseShiftOptions fine;
  fine.step_fraction = 1e-3;

  double hs_err = 0.0;
  const double a = 3e-10;
  const auto hs = ScatteringPotential::hard_sphere(a);
  for (double ka : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
    for (int l : {0, 1, 2, 4}) {
      const double exact = std::atan(std::sph_bessel(l, ka) / std::sph_neumann(l, ka));
      hs_err = std::max(hs_err, std::abs(std::remainder(phase_shift(ka / a, l, hs, mu, fine) - exact, pi)));
    }
  o.require(hs_err < 1e-6, fmt("hard sphere max error %.1e rad", hs_err));

  double sw_err = 0.0;
  const double r = 5e-10, k0 = 2.0 / r;
  const auto sw = ScatteringPotential::square_well(hbar * k0 * k0 / (2 * mu), r);
  for (double kr : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
    const double k = kr / r, kk = std::sqrt(k * k + k0 * k0);
    const double exact = std::atan(k / kk * std::tan(kk * r)) - kr;
    sw_err = std::max(sw_err, std::abs(std::remainder(phase_shift(k, 0, sw, mu, fine) - exact, pi)));
  }
  o.require(sw_err < 1e-6, fmt("square well max error %.1e rad", sw_err));

  const Preset p = rb_ar_preset();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  bool unitary = true;
  for (double v = 50.0; v <= 2000.0; v += 130.0) {
    const auto pw = partial_waves(mu * v / hbar, pot, mu);
    unitary = unitary && pw.converged && cross_section(pw) <= unitarity_bound(pw);
  }
  o.require(unitary, "unitarity bound respected from 50 to 2000 m/s");

  const VelocityDistribution d{300.0, mu};
  boost::math::quadrature::exp_sinh<double> integrator;
  const double norm = integrator.integrate([&](double v) { return maxwell_density(v, d); });
  o.require(std::abs(norm - 1.0) < 1e-8, fmt("Maxwell normalisation error %.1e", norm - 1.0));

  const double a0 = p.exciplex.excited().r_eq(), omega = p.exciplex.upconversion();
  const int l_cut = barrier_l_cut(300.0, mu, a0, omega, BarrierCriterion::mean_energy_minus_upconversion);
  const int l_alt = barrier_l_cut(300.0, mu, a0, omega, BarrierCriterion::mean_energy);
  const auto th = thermal_cross_section(300.0, pot, mu);
  const double sc = th.cumulative[static_cast<std::size_t>(l_cut)] / angstrom2;
  const double alt = th.cumulative[static_cast<std::size_t>(std::min<int>(l_alt, static_cast<int>(th.cumulative.size()) - 1))] / angstrom2;
  o.require(sc >= 20.0 / 3.0 && sc <= 60.0,
            fmt("sigma_cool %.1f A^2 (l <= %.0f) vs 20 A^2 within factor 3", sc, l_cut) +
                fmt(" (E_av criterion: %.1f A^2 at l <= %.0f)", alt, l_alt));
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const GasCellParams params;
  const auto r = gas_cell_scenario(rb_ar_preset(), params);
  o.require(r.absorbed_fraction >= 0.9, fmt("absorbed %.6f over 1 cm", r.absorbed_fraction));
  o.require(std::abs(r.max_drop - 80.0) <= 20.0,
            fmt("max drop %.1f K vs 80 +- 20 K at P_in = %.2f W", r.max_drop, params.input_power));
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const Preset p = rb_ar_preset();
  const double kb = 1.380649e-23, hb = 6.62607015e-34 / (2 * M_PI), t = 300.0;
  const double n_m = 1e2 / (kb * t), n_x = 1e6 / (kb * t);
  const double oracle = hb * 2 * M_PI * 6.7154e12 / (kb * t) * n_m / (n_m + n_x) * 2 * M_PI * 5.75e6;
  const double beta = cooling_rate_linear(p.mixture, p.exciplex);
  const double rel = std::abs(beta - oracle) / oracle;
  o.require(rel < 0.01, fmt("beta_lin %.1f /s vs plug-in %.1f /s (rel. %.1e)", beta, oracle, rel));
  o.require(std::abs(beta - 3.9e3) < 0.05 * 3.9e3, "beta_lin ~ 3.9e3 /s");
  const auto c = coefficients(p.mixture, p.fibre, p.exciplex, p.drive);
  const double ratio = cooling_rate_exponential(p.mixture, p.exciplex, c) / beta;
  const double id = std::abs(ratio - c.saturation()) / c.saturation();
  o.require(id <= 1e-12, fmt("beta_exp/beta_lin vs B P_in rel. %.1e", id));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion criteria[] = {
    {1, "timescale identities", criterion_1},
    {2, "Bloch analytic vs Monte Carlo", criterion_2},
    {3, "power-law regimes", criterion_3},
    {4, "thermal cross-identities", criterion_4},
    {5, "bundle ordering", criterion_5},
    {6, "wavepacket physics", criterion_6},
    {7, "scattering oracles", criterion_7},
    {8, "gas-cell reproduction", criterion_8},
    {9, "cooling-rate numerics", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& c : criteria) selected.push_back(c.id);

  int failed = 0;
  for (int id : selected) {
    const Criterion* c = nullptr;
    for (const auto& x : criteria)
      if (x.id == id) c = &x;
    if (!c) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c->run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %s: %s (%s) [%.1f s]\n", c->id, c->title, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
