#include "exciplex/cli/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>

#include "exciplex/bloch_dynamics.hpp"
#include "exciplex/constants.hpp"
#include "exciplex/csv.hpp"
#include "exciplex/gas_cell.hpp"
#include "exciplex/heat_solver.hpp"
#include "exciplex/parallel.hpp"
#include "exciplex/power_propagation.hpp"
#include "exciplex/scattering.hpp"
#include "exciplex/thermal_balance.hpp"
#include "exciplex/wavepacket.hpp"

namespace exciplex::cli {

using namespace constants;
namespace fs = std::filesystem;

namespace {

class Output {
 public:
  Output(fs::path root, std::string prefix = {}) : root_(std::move(root)), prefix_(std::move(prefix)) {}

  Output sub(const std::string& dir) const {
    Output o(root_, prefix_ + dir + "/");
    o.sink_ = sink_;
    return o;
  }

  void write(const std::string& name, const CsvTable& table) {
    const std::string content = table.str();
    const std::string rel = prefix_ + name;
    write_file_atomic(root_ / rel, content);
    std::lock_guard lock(sink_->mutex);
    sink_->files.push_back({rel, sha256_hex(content), content.size()});
  }

  void warn(const std::string& message) {
    std::lock_guard lock(sink_->mutex);
    sink_->warnings.push_back(prefix_ + message);
  }

  std::vector<OutputFile> files() const {
    auto f = sink_->files;
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return f;
  }
  std::vector<std::string> warnings() const {
    auto w = sink_->warnings;
    std::sort(w.begin(), w.end());
    return w;
  }

 private:
  struct Sink {
    std::mutex mutex;
    std::vector<OutputFile> files;
    std::vector<std::string> warnings;
  };
  fs::path root_;
  std::string prefix_;
  std::shared_ptr<Sink> sink_ = std::make_shared<Sink>();
};

std::string si_unit(Dimension d) {
  switch (d) {
    case Dimension::temperature: return "K";
    case Dimension::pressure: return "Pa";
    case Dimension::density: return "per_m3";
    case Dimension::length: return "m";
    case Dimension::area: return "m2";
    case Dimension::time: return "s";
    case Dimension::frequency: return "rad_per_s";
    case Dimension::power: return "W";
    case Dimension::conductivity: return "W_per_mK";
    case Dimension::dipole: return "Cm";
    case Dimension::velocity: return "m_per_s";
    default: return "";
  }
}

std::string column_for(const std::string& qualified) {
  for (const auto& p : parameter_table())
    if (p.qualified() == qualified) {
      const std::string u = si_unit(p.dimension);
      return u.empty() ? qualified : qualified + "_" + u;
    }
  return qualified;
}

std::string point_name(const std::string& stem, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", i);
  return stem + buf + ".csv";
}

using Row = std::vector<CsvCell>;
using I = std::int64_t;

// default x axis of the Fig. 4 scans
Sweep fig4_axis(const RunConfig& cfg, std::size_t points) {
  if (auto s = resolve_sweep(cfg)) return *s;
  Sweep s;
  s.parameter = "gas.buffer_pressure";
  s.unit = "bar";
  for (std::size_t i = 0; i < points; ++i)
    s.values.push_back(bar * std::pow(100.0, static_cast<double>(i) / static_cast<double>(points - 1)));
  return s;
}

// ---------------------------------------------------------------------------

void run_table1(const RunConfig& cfg, Output& out, unsigned threads) {
  const Preset p = build_preset(cfg);
  const double kappa = collision_rate(p.mixture, p.drive).rate;
  const double tau_kappa = 1.0 / kappa;
  const double gamma = p.exciplex.linewidth();
  const double tau_gamma = 1.0 / gamma;
  const double rabi = rabi_frequency(p.exciplex, p.fibre, p.drive.input_power());
  const double d0 = diffusion_rate(rabi, kappa, p.drive.pulse_duration());

  double tau = p.drive.pulse_duration();
  std::string tau_source = "input";
  if (cfg.count("table1.simulate_absorption_time") > 0) {
    CollisionConfig cc = rb_ar_collision(p, cfg.get("wavepacket.temperature"));
    cc.rabi = cfg.get("wavepacket.rabi");
    cc.laser_frequency = p.exciplex.bare_transition() - cfg.get("wavepacket.detuning");
    cc.dt = cfg.get("wavepacket.dt");
    cc.grid = {cfg.get("wavepacket.r_min"), cfg.get("wavepacket.r_max"), cfg.count("wavepacket.intervals")};
    cc.sample_every = cfg.count("wavepacket.sample_every");
    cc.outer = cfg.choice("wavepacket.boundary") == "absorbing" ? OuterBoundary::absorbing
                                                               : OuterBoundary::reflective;
    const auto run = evolve(gaussian_packet(cc), cc);
    if (auto w = absorption_time(run)) {
      tau = w->duration;
      tau_source = "wavepacket";
    } else {
      out.warn("table1: no resonant crossing found, tau taken from drive.pulse_duration");
    }
  }

  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  const double mu = p.mixture.reduced_mass();
  const double temperature = cfg.get("scattering.temperature");
  ThermalOptions topt;
  topt.panels = static_cast<int>(cfg.count("scattering.panels"));
  topt.threads = threads;
  const auto thermal = thermal_cross_section(temperature, pot, mu, topt);
  const auto criterion = cfg.choice("scattering.barrier") == "energy"
                             ? BarrierCriterion::mean_energy
                             : BarrierCriterion::mean_energy_minus_upconversion;
  const int l_cut = barrier_l_cut(temperature, mu, p.exciplex.excited().r_eq(),
                                  p.exciplex.upconversion(), criterion);
  const double sigma_cool =
      l_cut < 0 ? 0.0
                : thermal.cumulative[std::min<std::size_t>(static_cast<std::size_t>(l_cut),
                                                           thermal.cumulative.size() - 1)];

  CsvTable t({"symbol", "description", "value", "unit", "table_value", "relative_discrepancy",
              "tolerance", "flag", "source"});
  const auto add = [&](const std::string& sym, const std::string& what, double value, const std::string& unit,
                       double table, double tol, const std::string& source) {
    const double rel = (value - table) / table;
    const bool ok = tol >= 1.0 ? (value / table <= tol && table / value <= tol) : std::abs(rel) <= tol;
    t.add_row({sym, what, value, unit, table, rel, tol, std::string(ok ? "ok" : "discrepant"), source});
  };
  add("kappa", "collision rate", kappa / 1e9, "1e9_per_s", 5.83, 0.01, "n_X sigma_cool v");
  add("tau", "absorption time", tau / picosecond, "ps", 1.0, 3.0, tau_source);
  add("tau_kappa", "average collision time", tau_kappa / picosecond, "ps", 171.61, 0.01, "1 / kappa");
  add("tau_gamma", "spontaneous emission time", tau_gamma * 1e9, "ns", 27.68, 5e-4, "1 / gamma");
  add("sigma_cool", "cooling cross section", sigma_cool / angstrom2, "A2", 20.0, 3.0,
      "thermal sigma restricted to l <= " + std::to_string(l_cut));
  add("D0", "maximum diffusion rate", d0 / 1e6, "1e6_per_s", 33.65, 0.01,
      "chi^2 kappa tau^2 / pi at P_in");
  out.write("table1.csv", t);

  CsvTable ident({"identity", "value"});
  ident.add_row({std::string("tau_kappa*kappa"), tau_kappa * kappa});
  ident.add_row({std::string("tau_gamma*gamma"), tau_gamma * gamma});
  ident.add_row({std::string("kappa_from_table_tau_kappa_per_s"), 1.0 / (171.61 * picosecond)});
  out.write("table1_identities.csv", ident);
}

void run_fig3_bloch(const RunConfig& cfg, Output& out, unsigned threads) {
  const Preset p = build_preset(cfg);
  const double gamma = p.exciplex.linewidth();
  const double kappa = collision_rate(p.mixture, p.drive).rate;
  const std::size_t pairs = cfg.count("bloch.pairs");
  const double r0 = cfg.get("bloch.ratio_min"), r1 = cfg.get("bloch.ratio_max");

  CsvTable pop({"pair", "D_per_s", "gamma_per_s", "t_s", "rho_ee_analytic", "rho_ee_std_analytic",
                "rho_ee_mc", "rho_ee_std_mc", "stderr_mean", "stderr_std"});
  CsvTable hist({"pair", "cos_lo", "cos_hi", "density_mc", "density_analytic"});
  for (std::size_t k = 0; k < pairs; ++k) {
    const double ratio = pairs == 1 ? r0 : r0 * std::pow(r1 / r0, static_cast<double>(k) / static_cast<double>(pairs - 1));
    auto dp = DiffusionParams::from_rates(ratio * gamma, gamma, kappa);
    MonteCarloOptions mo;
    mo.n_trajectories = cfg.count("bloch.trajectories");
    mo.n_samples = cfg.count("bloch.samples");
    mo.histogram_bins = cfg.count("bloch.bins");
    mo.seed = cfg.seed + 7919 * k;
    mo.threads = threads;
    mo.durations = cfg.choice("bloch.durations") == "exponential" ? PulseDurations::exponential
                                                                   : PulseDurations::fixed;
    if (cfg.choice("bloch.pulse_area") == "literal") {
      // pulse length chosen so that chi^2 kappa tau^2 / pi hits the target D
      mo.area_source = PulseAreaSource::rabi_times_duration;
      const double rabi = rabi_frequency(p.exciplex, p.fibre, p.drive.input_power());
      const double tau = std::sqrt(pi * ratio * gamma / (rabi * rabi * kappa));
      dp = DiffusionParams::from_pulses(rabi, kappa, tau, gamma);
    }
    const auto mc = monte_carlo_bloch(dp, p.exciplex.upconversion(), mo);
    for (const auto& w : mc.warnings) out.warn("pair " + std::to_string(k) + ": " + w);
    for (std::size_t i = 0; i < mc.times.size(); ++i) {
      const double t = mc.times[i];
      pop.add_row({static_cast<I>(k), dp.diffusion_rate, gamma, t, excited_population(dp, t),
                   population_variance(dp, t), mc.mean_population[i], mc.std_population[i],
                   mc.stderr_mean[i], mc.stderr_std[i]});
    }
    const auto dist = spin_distribution(dp, mc.times.back());
    for (std::size_t b = 0; b + 1 < mc.histogram_edges.size(); ++b) {
      const double lo = mc.histogram_edges[b], hi = mc.histogram_edges[b + 1];
      const double analytic = (dist.cdf_cos(hi) - dist.cdf_cos(lo)) / (hi - lo);
      hist.add_row({static_cast<I>(k), lo, hi, mc.histogram_density[b], analytic});
    }
  }
  out.write("fig3c_populations.csv", pop);
  out.write("fig3b_histograms.csv", hist);
}

struct ProfilePoint {
  Preset preset;
  PropagationCoefficients c;
  PowerProfile profile;
};

ProfilePoint profile_point(const RunConfig& cfg) {
  const Preset p = build_preset(cfg);
  const auto c = coefficients(p.mixture, p.fibre, p.exciplex, p.drive);
  return {p, c, power_profile(c, p.fibre.length(), cfg.count("scan.points"))};
}

void run_fig4a(const RunConfig& cfg, Output& out, unsigned threads) {
  const Sweep axis = fig4_axis(cfg, 5);
  const std::string xcol = column_for(axis.parameter);
  std::vector<CsvTable> summaries(axis.values.size(), CsvTable({"point"}));
  std::vector<Row> rows(axis.values.size());
  parallel_for(axis.values.size(), threads, [&](std::size_t i) {
    RunConfig local = cfg;
    local.set(axis.parameter, axis.values[i]);
    const auto pt = profile_point(local);
    CsvTable t({"z_m", "power_W", "beer_lambert_W", "linear_law_W", "regime"});
    for (std::size_t j = 0; j < pt.profile.z.size(); ++j) {
      const double z = pt.profile.z[j];
      t.add_row({z, pt.profile.power[j], beer_lambert(z, pt.c), linear_law(z, pt.c),
                 to_string(pt.profile.regime[j])});
    }
    out.write(point_name("fig4a_profile", i), t);
    rows[i] = {static_cast<I>(i), axis.values[i], pt.c.saturation(), to_string(classify_regime(pt.c.saturation())),
               pt.c.A, pt.c.B, penetration_depth(pt.c), pt.profile.power.back()};
  });
  CsvTable s({"point", xcol, "saturation_BP_in", "regime_at_input", "A_W_per_m", "B_per_W",
              "penetration_depth_m", "P_out_W"});
  for (auto& r : rows) s.add_row(std::move(r));
  out.write("fig4a_summary.csv", s);
}

void run_fig4b(const RunConfig& cfg, Output& out, unsigned threads) {
  const Sweep axis = fig4_axis(cfg, 25);
  const double r_base = cfg.get("fibre.inner_radius");
  const std::vector<double> radii = {0.5 * r_base, r_base, 1.5 * r_base};
  const std::size_t n = axis.values.size();
  std::vector<Row> rows(radii.size() * n);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t f = idx / n, i = idx % n;
    RunConfig local = cfg;
    local.set("fibre.inner_radius", radii[f]);
    local.set(axis.parameter, axis.values[i]);
    const auto pt = profile_point(local);
    const Preset& p = pt.preset;
    const double p_out = pt.profile.power.back();
    const double pcool = cooling_power(p.drive.input_power(), p_out, p.exciplex.upconversion(),
                                       p.exciplex.laser_frequency());
    const double ekin = kinetic_energy(p.mixture, p.fibre, p.fibre.length());
    rows[idx] = {p.fibre.inner_radius(), axis.values[i], cooling_rate(pcool, ekin),
                 cooling_rate_linear(p.mixture, p.exciplex),
                 cooling_rate_exponential(p.mixture, p.exciplex, pt.c), pt.c.saturation(), pcool};
  });
  CsvTable t({"inner_radius_m", column_for(axis.parameter), "cooling_rate_per_s",
              "cooling_rate_linear_per_s", "cooling_rate_exponential_per_s", "saturation_BP_in",
              "cooling_power_W"});
  for (auto& r : rows) t.add_row(std::move(r));
  out.write("fig4b_cooling_rate.csv", t);
}

void run_fig4cd(const RunConfig& cfg, Output& out, unsigned threads) {
  const Sweep axis = fig4_axis(cfg, 25);
  const std::size_t n = axis.values.size();
  struct Family {
    std::string file, key, column;
    std::vector<double> values;
  };
  const double pd = cfg.get("gas.dopant_pressure"), r = cfg.get("fibre.inner_radius");
  const std::vector<Family> families = {
      {"fig4c_drop_vs_dopant.csv", "gas.dopant_pressure", column_for("gas.dopant_pressure"),
       {0.1 * pd, pd, 10.0 * pd}},
      {"fig4d_drop_vs_radius.csv", "fibre.inner_radius", column_for("fibre.inner_radius"),
       {0.5 * r, r, 1.5 * r}},
  };
  for (const auto& fam : families) {
    std::vector<Row> rows(fam.values.size() * n);
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
      const std::size_t f = idx / n, i = idx % n;
      RunConfig local = cfg;
      local.set(fam.key, fam.values[f]);
      local.set(axis.parameter, axis.values[i]);
      const auto pt = profile_point(local);
      const Preset& p = pt.preset;
      const double pcool = cooling_power(p.drive.input_power(), pt.profile.power.back(),
                                         p.exciplex.upconversion(), p.exciplex.laser_frequency());
      rows[idx] = {fam.values[f], axis.values[i], interface_drop(pcool, p.fibre),
                   max_temperature_drop(p.mixture, p.fibre, p.exciplex), pt.c.saturation()};
    });
    CsvTable t({fam.column, column_for(axis.parameter), "interface_drop_K", "max_drop_saturated_K",
                "saturation_BP_in"});
    for (auto& row : rows) t.add_row(std::move(row));
    out.write(fam.file, t);
  }
}

CsvTable field_table(const TemperatureField& f) {
  CsvTable t({"x_m", "y_m", "T_K", "region"});
  for (std::size_t j = 0; j < f.size(); ++j)
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f.region(i, j) >= -1) t.add_row({f.x(i), f.y(j), f.at(i, j), static_cast<I>(f.region(i, j))});
  return t;
}

GridSpec heat_grid(const RunConfig& cfg) {
  GridSpec g;
  g.cells_per_core_radius = cfg.get("heat.cells_per_core_radius");
  return g;
}

void run_fig5_bundle(const RunConfig& cfg, Output& out, unsigned) {
  const Preset p = build_preset(cfg);
  const double q = volumetric_cooling(p.mixture, p.exciplex);
  const double te = cfg.get("heat.ambient");
  const auto single = single_fibre_scenario(p.fibre, q, te);
  const auto bundle = hexagonal_bundle(p.fibre, q, te, static_cast<int>(cfg.count("heat.rings")));
  const auto fs1 = heat_solve_2d(single, heat_grid(cfg));
  const auto fb = heat_solve_2d(bundle, heat_grid(cfg));
  out.write("fig5b_single_field.csv", field_table(fs1));
  out.write("fig5c_bundle_field.csv", field_table(fb));

  const auto section = cladding_radial_section(fb, bundle, cfg.get("heat.section_width"));
  CsvTable rs({"radius_m", "T_K", "cells"});
  for (std::size_t i = 0; i < section.radius.size(); ++i)
    rs.add_row({section.radius[i], section.temperature[i], static_cast<I>(section.count[i])});
  out.write("fig5d_radial_section.csv", rs);

  CsvTable line({"x_m", "T_K"});
  const std::size_t n = 4 * fb.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = bundle.outer_radius * static_cast<double>(i) / static_cast<double>(n);
    line.add_row({x, fb.sample(std::min(x, bundle.outer_radius * (1 - 1e-9)), 0.0)});
  }
  out.write("fig5d_axis_line.csv", line);

  CsvTable s({"quantity", "value", "unit"});
  const double d1 = te - fs1.core_mean(0), db = te - fb.core_mean(0);
  s.add_row({std::string("cores"), static_cast<double>(bundle.cores.size()), std::string("")});
  s.add_row({std::string("q_vol"), q, std::string("W_per_m3")});
  s.add_row({std::string("single_core_mean_drop"), d1, std::string("K")});
  s.add_row({std::string("bundle_central_core_mean_drop"), db, std::string("K")});
  s.add_row({std::string("drop_ratio"), db / d1, std::string("")});
  s.add_row({std::string("bundle_minimum_temperature"), fb.minimum(), std::string("K")});
  s.add_row({std::string("solver_residual"), fb.residual(), std::string("K")});
  out.write("fig5_summary.csv", s);
}

void run_bundle_scaling(const RunConfig& cfg, Output& out, unsigned threads) {
  const Preset p = build_preset(cfg);
  const double q = volumetric_cooling(p.mixture, p.exciplex);
  const double te = cfg.get("heat.ambient");
  const std::size_t rings = cfg.count("heat.rings");
  std::vector<double> drops(rings + 1);
  std::vector<std::size_t> cores(rings + 1);
  parallel_for(rings + 1, threads, [&](std::size_t k) {
    const auto sc = hexagonal_bundle(p.fibre, q, te, static_cast<int>(k));
    const auto f = heat_solve_2d(sc, heat_grid(cfg));
    drops[k] = te - f.core_mean(0);
    cores[k] = sc.cores.size();
  });
  CsvTable t({"rings", "cores", "central_core_mean_drop_K", "ratio_to_single", "sqrt_cores"});
  for (std::size_t k = 0; k <= rings; ++k)
    t.add_row({static_cast<I>(k), static_cast<I>(cores[k]), drops[k], drops[k] / drops[0],
               std::sqrt(static_cast<double>(cores[k]))});
  out.write("bundle_scaling.csv", t);
}

void run_fig7_radial(const RunConfig& cfg, Output& out, unsigned) {
  const Preset p = build_preset(cfg);
  const double q = volumetric_cooling(p.mixture, p.exciplex);
  const double te = cfg.get("heat.ambient");
  const RadialProfile prof(p.fibre, q, te);
  const auto sc = single_fibre_scenario(p.fibre, q, te);
  const auto field = heat_solve_2d(sc, heat_grid(cfg));
  CsvTable t({"rho_m", "T_analytic_K", "T_solver_K", "difference_K"});
  const std::size_t n = 400;
  const double re = p.fibre.outer_radius();
  for (std::size_t i = 0; i <= n; ++i) {
    const double rho = re * static_cast<double>(i) / static_cast<double>(n);
    const double a = radial_profile_single(rho, prof);
    const double s = field.sample(std::min(rho, re * (1 - 1e-9)), 0.0);
    t.add_row({rho, a, s, s - a});
  }
  out.write("fig7_radial_profile.csv", t);
  out.write("fig7_field.csv", field_table(field));
}

CollisionConfig collision_config(const RunConfig& cfg, const Preset& p) {
  CollisionConfig cc = rb_ar_collision(p, cfg.get("wavepacket.temperature"));
  cc.rabi = cfg.get("wavepacket.rabi");
  cc.laser_frequency = p.exciplex.bare_transition() - cfg.get("wavepacket.detuning");
  cc.dt = cfg.get("wavepacket.dt");
  cc.grid = {cfg.get("wavepacket.r_min"), cfg.get("wavepacket.r_max"), cfg.count("wavepacket.intervals")};
  cc.sample_every = cfg.count("wavepacket.sample_every");
  cc.snapshot_every = cfg.count("wavepacket.snapshot_every");
  cc.snapshot_stride = cfg.count("wavepacket.snapshot_stride");
  cc.outer = cfg.choice("wavepacket.boundary") == "absorbing" ? OuterBoundary::absorbing
                                                             : OuterBoundary::reflective;
  return cc;
}

void run_collision_movie(const RunConfig& cfg, Output& out, unsigned) {
  const Preset p = build_preset(cfg);
  const CollisionConfig cc = collision_config(cfg, p);
  const auto run = evolve(gaussian_packet(cc), cc);

  CsvTable dens({"t_s", "r_m", "ground_density_per_m", "excited_density_per_m"});
  for (const auto& snap : run.snapshots)
    for (std::size_t i = 0; i < run.snapshot_r.size(); ++i)
      dens.add_row({snap.time, run.snapshot_r[i], snap.ground_density[i], snap.excited_density[i]});
  out.write("collision_density.csv", dens);

  CsvTable sum({"t_s", "mean_r_ground_m", "mean_r_excited_m", "ground_population",
                "excited_population", "norm", "energy_rad_per_s", "width_ground_m"});
  for (const auto& s : run.samples)
    sum.add_row({s.time, s.mean_r_ground, s.mean_r_excited, s.ground_population,
                 s.excited_population, s.norm, s.energy, s.width_ground});
  out.write("collision_summary.csv", sum);

  CsvTable d({"quantity", "value", "unit"});
  const auto add = [&](const std::string& q, double v, const std::string& u) { d.add_row({q, v, u}); };
  const auto plateau = excited_plateau(run);
  add("excited_plateau", plateau.value, "");
  add("excited_plateau_spread", plateau.spread, "");
  if (auto w = absorption_time(run)) {
    add("absorption_time", w->duration, "s");
    add("absorption_window_start", w->start, "s");
    add("absorption_window_end", w->end, "s");
  } else {
    out.warn("collision_movie: no resonant crossing detected");
  }
  const std::size_t n = run.samples.size();
  const auto& a = run.samples[n - 1 - n / 5];
  const auto& b = run.samples[n - 1];
  add("outgoing_slope_ground", (b.mean_r_ground - a.mean_r_ground) / (b.time - a.time), "m_per_s");
  add("outgoing_slope_excited", (b.mean_r_excited - a.mean_r_excited) / (b.time - a.time), "m_per_s");
  add("norm_drift", run.norm_drift, "");
  add("energy_drift", run.energy_drift, "");
  try {
    const auto fc = franck_condon_reduction(run, cc);
    add("franck_condon_factor", fc.factor, "");
    add("franck_condon_uncertainty", fc.uncertainty, "");
    add("semiclassical_population", fc.semiclassical_population, "");
  } catch (const DomainError& e) {
    out.warn(std::string("collision_movie: ") + e.what());
  }
  const double a0 = p.exciplex.excited().r_eq();
  const double v = hbar * cc.packet.wavenumber / cc.reduced_mass;
  add("landau_zener_parameter",
      landau_zener_parameter(p.exciplex.franck_condon_factor() * cc.rabi,
                             std::abs(p.exciplex.ground().derivative(a0)), v),
      "");
  out.write("collision_derived.csv", d);
}

void run_xsection_scan(const RunConfig& cfg, Output& out, unsigned threads) {
  const Preset p = build_preset(cfg);
  const double mu = p.mixture.reduced_mass();
  const auto pot = ScatteringPotential::morse(p.exciplex.ground());
  const double temperature = cfg.get("scattering.temperature");
  const VelocityDistribution dist{temperature, mu};
  const double vmp = dist.most_probable_speed();

  const std::size_t nk = cfg.count("scattering.k_points");
  const double v0 = cfg.get("scattering.v_min"), v1 = cfg.get("scattering.v_max");
  std::vector<Row> rows(nk);
  parallel_for(nk, threads, [&](std::size_t i) {
    const double v = nk == 1 ? v0 : v0 + (v1 - v0) * static_cast<double>(i) / static_cast<double>(nk - 1);
    const double k = mu * v / hbar;
    const auto pw = partial_waves(k, pot, mu);
    rows[i] = {v, k, cross_section(pw), unitarity_bound(pw), static_cast<I>(pw.delta.size() - 1)};
  });
  CsvTable sk({"v_m_per_s", "k_per_m", "sigma_m2", "unitarity_bound_m2", "l_max"});
  for (auto& r : rows) sk.add_row(std::move(r));
  out.write("xsection_sigma_k.csv", sk);

  CsvTable ps({"v_m_per_s", "k_per_m", "l", "delta_rad"});
  for (double f : {0.5, 1.0, 2.0}) {
    const double v = f * vmp, k = mu * v / hbar;
    const auto pw = partial_waves(k, pot, mu);
    for (std::size_t l = 0; l < pw.delta.size(); ++l) ps.add_row({v, k, static_cast<I>(l), pw.delta[l]});
  }
  out.write("xsection_phase_shifts.csv", ps);

  ThermalOptions topt;
  topt.panels = static_cast<int>(cfg.count("scattering.panels"));
  topt.threads = threads;
  const auto th = thermal_cross_section(temperature, pot, mu, topt);
  CsvTable cum({"l_cut", "sigma_partial_m2"});
  for (std::size_t l = 0; l < th.cumulative.size(); ++l) cum.add_row({static_cast<I>(l), th.cumulative[l]});
  out.write("xsection_cumulative.csv", cum);

  CsvTable mx({"v_m_per_s", "maxwell_density_s_per_m", "sigma_m2", "weight"});
  for (std::size_t i = 0; i < th.speeds.size(); ++i)
    mx.add_row({th.speeds[i], maxwell_density(th.speeds[i], dist), th.sigma[i], th.weights[i]});
  out.write("xsection_maxwell_nodes.csv", mx);

  const std::vector<int> ls = {0, 40, 80};
  std::vector<std::string> cols = {"r_m"};
  for (int l : ls) {
    cols.push_back("U_ground_l" + std::to_string(l) + "_rad_per_s");
    cols.push_back("U_excited_l" + std::to_string(l) + "_rad_per_s");
  }
  CsvTable ep(cols);
  for (int i = 0; i <= 300; ++i) {
    const double r = 2.5 * angstrom + i * 0.05 * angstrom;
    Row row = {r};
    for (int l : ls) {
      row.push_back(effective_potential(p.exciplex.ground(), l, mu, r));
      row.push_back(effective_potential(p.exciplex.excited(), l, mu, r) - p.exciplex.bare_transition());
    }
    ep.add_row(std::move(row));
  }
  out.write("xsection_effective_potential.csv", ep);

  CsvTable s({"quantity", "value", "unit"});
  s.add_row({std::string("sigma_el"), th.total, std::string("m2")});
  s.add_row({std::string("tail_mass"), th.tail_mass, std::string("")});
  s.add_row({std::string("l_used"), static_cast<double>(th.l_used), std::string("")});
  for (auto [name, crit] : {std::pair{"energy_minus_upconversion", BarrierCriterion::mean_energy_minus_upconversion},
                            std::pair{"energy", BarrierCriterion::mean_energy}}) {
    const int lc = barrier_l_cut(temperature, mu, p.exciplex.excited().r_eq(), p.exciplex.upconversion(), crit);
    const double sc = lc < 0 ? 0.0 : th.cumulative[std::min<std::size_t>(static_cast<std::size_t>(lc), th.cumulative.size() - 1)];
    s.add_row({std::string("l_cut_") + name, static_cast<double>(lc), std::string("")});
    s.add_row({std::string("sigma_cool_") + name, sc, std::string("m2")});
  }
  out.write("xsection_summary.csv", s);
}

void run_gas_cell_weitz(const RunConfig& cfg, Output& out, unsigned) {
  const Preset p = build_preset(cfg);
  GasCellParams g;
  g.ambient = cfg.get("gas_cell.ambient");
  g.buffer_density = cfg.get("gas_cell.buffer_density");
  g.dopant_density = cfg.get("gas_cell.dopant_density");
  g.beam_radius = cfg.get("gas_cell.beam_radius");
  g.input_power = cfg.get("gas_cell.input_power");
  g.gas_length = cfg.get("gas_cell.gas_length");
  g.cell_radius = cfg.get("gas_cell.cell_radius");
  g.window_thickness = cfg.get("gas_cell.window_thickness");
  g.window_conductivity = cfg.get("gas_cell.window_conductivity");
  g.gas_conductivity = cfg.get("gas_cell.gas_conductivity");
  g.cooling_cross_section = p.drive.cooling_cross_section();
  g.pulse_duration = p.drive.pulse_duration();
  g.radial_spacing = g.axial_spacing = cfg.get("gas_cell.grid");
  const auto r = gas_cell_scenario(p, g);

  CsvTable pw({"z_m", "power_W"});
  for (std::size_t i = 0; i < r.z.size(); ++i) pw.add_row({r.z[i], r.power[i]});
  out.write("gas_cell_power.csv", pw);
  CsvTable ax({"z_m", "drop_K"});
  for (std::size_t i = 0; i < r.axis_z.size(); ++i) ax.add_row({r.axis_z[i], r.axis_drop[i]});
  out.write("gas_cell_axis_drop.csv", ax);
  CsvTable s({"quantity", "value", "unit"});
  s.add_row({std::string("absorbed_fraction"), r.absorbed_fraction, std::string("")});
  s.add_row({std::string("cooling_power"), r.cooling_power, std::string("W")});
  s.add_row({std::string("max_drop"), r.max_drop, std::string("K")});
  s.add_row({std::string("saturation_BP_in"), r.coeffs.saturation(), std::string("")});
  s.add_row({std::string("A"), r.coeffs.A, std::string("W_per_m")});
  s.add_row({std::string("B"), r.coeffs.B, std::string("per_W")});
  s.add_row({std::string("solver_residual"), r.residual, std::string("K")});
  s.add_row({std::string("solver_iterations"), static_cast<double>(r.iterations), std::string("")});
  out.write("gas_cell_summary.csv", s);
}

using Runner = std::function<void(const RunConfig&, Output&, unsigned)>;

struct Entry {
  ScenarioInfo info;
  Runner run;
  bool own_sweep;  // the scenario uses [sweep] as its x axis
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"table1", "kappa, tau, tau_kappa, tau_gamma, sigma_cool and D(0) against reference values"},
       run_table1, false},
      {{"fig3_bloch", "Bloch-sphere diffusion: analytic vs Monte-Carlo population, spread and histogram"},
       run_fig3_bloch, false},
      {{"fig4a", "power profiles P(z) across the exponential-to-linear crossover"}, run_fig4a, true},
      {{"fig4b", "cooling rate against buffer density for three core radii"}, run_fig4b, true},
      {{"fig4cd", "core-wall temperature drop against buffer density for dopant and radius families"},
       run_fig4cd, true},
      {{"fig5_bundle", "2-D heat solve of a single fibre and a 19-core hexagonal bundle"},
       run_fig5_bundle, false},
      {{"fig7_radial", "single-fibre radial temperature profile, analytic and 2-D solver"},
       run_fig7_radial, false},
      {{"collision_movie", "laser-driven two-channel Rb-Ar wavepacket collision"}, run_collision_movie, false},
      {{"xsection_scan", "phase shifts, sigma(v), thermal and l-restricted cross sections"},
       run_xsection_scan, false},
      {{"gas_cell_weitz", "high-pressure gas cell: absorbed power and axial temperature drop"},
       run_gas_cell_weitz, false},
      {{"bundle_scaling", "central-core drop against the number of hexagonal shells"},
       run_bundle_scaling, false},
  };
  return r;
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

bool has_scenario(const std::string& name) {
  return std::any_of(registry().begin(), registry().end(),
                     [&](const Entry& e) { return e.info.name == name; });
}

RunManifest run_scenario(const RunConfig& config) {
  if (config.scenario.empty()) throw ConfigParseError(config.source, 0, "scenario", "missing");
  const auto it = std::find_if(registry().begin(), registry().end(),
                               [&](const Entry& e) { return e.info.name == config.scenario; });
  if (it == registry().end())
    throw ConfigParseError(config.source, 0, "scenario", "unknown scenario '" + config.scenario + "'");
  validate(config);
  const auto sweep = resolve_sweep(config);
  build_preset(config);  // parameter domain errors surface before anything is written

  const auto start = std::chrono::steady_clock::now();
  const unsigned threads = resolve_threads(config.threads);
  Output out(config.output_dir);
  if (sweep && !it->own_sweep) {
    // independent points, each in its own directory
    parallel_for(sweep->values.size(), threads, [&](std::size_t i) {
      RunConfig local = config;
      local.sweep_spec.clear();
      local.set(sweep->parameter, sweep->values[i]);
      char dir[32];
      std::snprintf(dir, sizeof dir, "point_%03zu", i);
      Output sub = out.sub(dir);
      it->run(local, sub, 1);
    });
  } else {
    it->run(config, out, threads);
  }

  RunManifest m;
  m.scenario = config.scenario;
  m.library_version = library_version();
  m.seed = config.seed;
  m.threads = threads;
  m.config_source = config.source;
  m.config = config;
  m.files = out.files();
  m.warnings = out.warnings();
  m.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file_atomic(fs::path(config.output_dir) / "manifest.json", m.to_json());
  return m;
}

}  // namespace exciplex::cli
