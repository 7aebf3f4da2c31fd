#include "exciplex/wavepacket.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"

namespace exciplex {

using namespace constants;
using cplx = std::complex<double>;

namespace {
// the FFTW planner is not thread safe
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void SpatialGrid::validate() const {
  if (r_min <= 0) throw ConfigError("SpatialGrid: r_min must be positive");
  if (r_max <= r_min) throw ConfigError("SpatialGrid: need r_max > r_min");
  if (n_intervals < 16) throw ConfigError("SpatialGrid: need at least 16 intervals");
}

double CollisionConfig::mean_kinetic_energy() const {
  return hbar * packet.wavenumber * packet.wavenumber / (2.0 * reduced_mass);
}

double thermal_wavenumber(double reduced_mass, double temperature) {
  if (reduced_mass <= 0 || temperature <= 0)
    throw DomainError("thermal_wavenumber: mass and temperature must be positive");
  return std::sqrt(3.0 * reduced_mass * boltzmann * temperature) / hbar;
}

CollisionConfig rb_ar_collision(const Preset& preset, double temperature) {
  const ExciplexSpec& ex = preset.exciplex;
  CollisionConfig c;
  const MorsePotential ground = ex.ground();
  const MorsePotential excited = ex.excited();
  c.ground = [ground](double r) { return ground(r); };
  c.excited = [excited](double r) { return excited(r); };
  c.laser_frequency = ex.bare_transition() - angular(5.2e12);
  c.reduced_mass = preset.mixture.reduced_mass();
  c.rabi = angular(5e9);
  c.packet.wavenumber = thermal_wavenumber(c.reduced_mass, temperature);
  c.packet.width = 0.02 * std::sqrt(2.0) * c.packet.wavenumber;
  c.packet.centre = 20.0 * angstrom;
  c.flatness_scale = excited.depth();
  const double v = hbar * c.packet.wavenumber / c.reduced_mass;
  c.duration = 2.0 * (c.packet.centre - excited.r_eq()) / v + 3.0 * picosecond;
  return c;
}

double TwoChannelWavefunction::ground_population() const {
  double s = 0.0;
  for (const auto& z : ground) s += std::norm(z);
  return s * grid.dr();
}

double TwoChannelWavefunction::excited_population() const {
  double s = 0.0;
  for (const auto& z : excited) s += std::norm(z);
  return s * grid.dr();
}

TwoChannelWavefunction gaussian_packet(const CollisionConfig& config) {
  config.grid.validate();
  const auto& p = config.packet;
  if (p.width <= 0 || p.wavenumber < 0) throw ConfigError("gaussian_packet: invalid packet");
  if (config.flatness_scale > 0) {
    const double offset = std::abs(config.ground(p.centre) - config.ground(config.grid.r_max));
    if (offset >= 1e-3 * config.flatness_scale)
      throw ConfigError("gaussian_packet: r0 is not in the flat asymptotic region of U_g");
  }
  TwoChannelWavefunction s;
  s.grid = config.grid;
  const std::size_t n = config.grid.size();
  s.ground.resize(n);
  s.excited.assign(n, cplx(0.0, 0.0));
  const double amp = std::sqrt(p.width / std::sqrt(pi));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = config.grid.r(i) - p.centre;
    s.ground[i] = amp * std::exp(-0.5 * p.width * p.width * x * x) *
                  std::polar(1.0, -p.wavenumber * x);
  }
  const double peak = amp * amp;
  if (std::norm(s.ground.front()) > 1e-10 * peak || std::norm(s.ground.back()) > 1e-10 * peak)
    throw ConfigError("gaussian_packet: packet tail reaches the grid edge");
  return s;
}

namespace {

std::optional<double> channel_mean_r(const std::vector<cplx>& psi, const SpatialGrid& grid) {
  double w = 0.0, s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double d = std::norm(psi[i]);
    w += d;
    s += d * grid.r(i);
  }
  if (w * grid.dr() < 1e-12) return std::nullopt;
  return s / w;
}

}  // namespace

std::pair<std::optional<double>, std::optional<double>> expectation_separation(
    const TwoChannelWavefunction& state) {
  return {channel_mean_r(state.ground, state.grid), channel_mean_r(state.excited, state.grid)};
}

double ground_width_squared(const TwoChannelWavefunction& state) {
  double w = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < state.ground.size(); ++i) {
    const double d = std::norm(state.ground[i]);
    const double r = state.grid.r(i);
    w += d;
    s1 += d * r;
    s2 += d * r * r;
  }
  const double m = s1 / w;
  return s2 / w - m * m;
}

double mean_wavenumber(const TwoChannelWavefunction& state) {
  const int n = static_cast<int>(state.ground.size());
  auto* buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int i = 0; i < n; ++i) {
    buf[i][0] = state.ground[static_cast<std::size_t>(i)].real();
    buf[i][1] = state.ground[static_cast<std::size_t>(i)].imag();
  }
  fftw_execute(plan);
  const double dk = two_pi / (n * state.grid.dr());
  double w = 0.0, s = 0.0;
  for (int m = 0; m < n; ++m) {
    const int signed_m = m <= n / 2 ? m : m - n;
    const double d = buf[m][0] * buf[m][0] + buf[m][1] * buf[m][1];
    w += d;
    s += d * signed_m * dk;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return s / w;
}

// ---------------------------------------------------------------------------
// split-operator propagator
// ---------------------------------------------------------------------------

namespace {

struct Unitary2 {
  cplx a, b, d;  // [[a, b], [b, d]]
};

// exp(-i H tau) for the real symmetric H = [[u, c], [c, v]].
Unitary2 exp_2x2(double u, double v, double c, double tau) {
  const double m = 0.5 * (u + v);
  const double half = 0.5 * (u - v);
  const double w = std::hypot(half, c);
  const double cs = std::cos(w * tau);
  const double sn = w > 0 ? std::sin(w * tau) / w : tau;
  const cplx phase = std::polar(1.0, -m * tau);
  return {phase * cplx(cs, -sn * half), phase * cplx(0.0, -sn * c), phase * cplx(cs, sn * half)};
}

class SplitOperator {
 public:
  SplitOperator(const CollisionConfig& cfg) : cfg_(cfg), grid_(cfg.grid), n_(grid_.size()) {
    g_ = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    e_ = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    w_ = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    {
      std::lock_guard lock(planner_mutex());
      const int len = static_cast<int>(n_);
      fftw_r2r_kind kind = FFTW_RODFT00;
      plan_ = fftw_plan_many_r2r(1, &len, 2, reinterpret_cast<double*>(g_), nullptr, 2, 1,
                                 reinterpret_cast<double*>(g_), nullptr, 2, 1, &kind,
                                 FFTW_MEASURE);
    }
    const double length = grid_.r_max - grid_.r_min;
    const double scale = 1.0 / (2.0 * static_cast<double>(n_ + 1));
    kinetic_.resize(n_);
    energy_.resize(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      const double k = pi * static_cast<double>(m + 1) / length;
      energy_[m] = hbar * k * k / (2.0 * cfg_.reduced_mass);
      kinetic_[m] = scale * std::polar(1.0, -energy_[m] * cfg_.dt);
    }
    ug_.resize(n_);
    ue_.resize(n_);
    damp_.assign(n_, 0.0);
    half_.resize(n_);
    full_.resize(n_);
    const double coupling = 0.5 * cfg_.rabi;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = grid_.r(i);
      ug_[i] = cfg_.ground(r);
      ue_[i] = cfg_.excited(r) - cfg_.laser_frequency;
      if (cfg_.outer == OuterBoundary::absorbing) {
        const double start = grid_.r_max - cfg_.absorber_width;
        if (r > start) {
          const double x = (r - start) / cfg_.absorber_width;
          damp_[i] = cfg_.absorber_strength * x * x;
        }
      }
      half_[i] = exp_2x2(ug_[i], ue_[i], coupling, 0.5 * cfg_.dt);
      full_[i] = exp_2x2(ug_[i], ue_[i], coupling, cfg_.dt);
      if (damp_[i] > 0) {
        const double fh = std::exp(-0.5 * damp_[i] * cfg_.dt), ff = fh * fh;
        half_[i] = {half_[i].a * fh, half_[i].b * fh, half_[i].d * fh};
        full_[i] = {full_[i].a * ff, full_[i].b * ff, full_[i].d * ff};
      }
    }
  }

  ~SplitOperator() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(g_);
    fftw_free(e_);
    fftw_free(w_);
  }

  SplitOperator(const SplitOperator&) = delete;
  SplitOperator& operator=(const SplitOperator&) = delete;

  void load(const TwoChannelWavefunction& s) {
    for (std::size_t i = 0; i < n_; ++i) {
      g_[i][0] = s.ground[i].real();
      g_[i][1] = s.ground[i].imag();
      e_[i][0] = s.excited[i].real();
      e_[i][1] = s.excited[i].imag();
    }
  }

  void store(TwoChannelWavefunction& s) const {
    for (std::size_t i = 0; i < n_; ++i) {
      s.ground[i] = {g_[i][0], g_[i][1]};
      s.excited[i] = {e_[i][0], e_[i][1]};
    }
  }

  // `count` Strang steps; consecutive potential half steps are merged.
  void advance(std::size_t count) {
    if (count == 0) return;
    potential(half_);
    for (std::size_t s = 0; s < count; ++s) {
      kinetic();
      potential(s + 1 == count ? half_ : full_);
    }
  }

  WavepacketSample observe(double t) {
    WavepacketSample out;
    out.time = t;
    const double dr = grid_.dr();
    double pg = 0, pe = 0, rg = 0, re = 0, r2g = 0, v = 0;
    const double coupling = cfg_.rabi;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = grid_.r(i);
      const cplx g(g_[i][0], g_[i][1]), e(e_[i][0], e_[i][1]);
      const double dg = std::norm(g), de = std::norm(e);
      pg += dg;
      pe += de;
      rg += dg * r;
      r2g += dg * r * r;
      re += de * r;
      v += ug_[i] * dg + ue_[i] * de + coupling * std::real(std::conj(g) * e);
    }
    out.ground_population = pg * dr;
    out.excited_population = pe * dr;
    out.norm = out.ground_population + out.excited_population;
    out.mean_r_ground = pg > 0 ? rg / pg : std::numeric_limits<double>::quiet_NaN();
    out.mean_r_excited = pe * dr >= 1e-12 ? re / pe : std::numeric_limits<double>::quiet_NaN();
    out.width_ground = pg > 0 ? std::sqrt(std::max(r2g / pg - (rg / pg) * (rg / pg), 0.0)) : 0.0;

    double kin = 0.0;
    const double scale = 1.0 / (2.0 * static_cast<double>(n_ + 1));
    for (fftw_complex* src : {g_, e_}) {
      std::copy(&src[0][0], &src[0][0] + 2 * n_, &w_[0][0]);
      fftw_execute_r2r(plan_, reinterpret_cast<double*>(w_), reinterpret_cast<double*>(w_));
      for (std::size_t m = 0; m < n_; ++m)
        kin += energy_[m] * (w_[m][0] * w_[m][0] + w_[m][1] * w_[m][1]) * scale;
    }
    out.energy = (kin + v) * dr;
    return out;
  }

  void density(std::size_t stride, WavepacketSnapshot& snap) const {
    for (std::size_t i = 0; i < n_; i += stride) {
      snap.ground_density.push_back(g_[i][0] * g_[i][0] + g_[i][1] * g_[i][1]);
      snap.excited_density.push_back(e_[i][0] * e_[i][0] + e_[i][1] * e_[i][1]);
    }
  }

  double asymptotic_detuning() const { return ue_.back() - ug_.back(); }

 private:
  void potential(const std::vector<Unitary2>& u) {
    for (std::size_t i = 0; i < n_; ++i) {
      const cplx g(g_[i][0], g_[i][1]), e(e_[i][0], e_[i][1]);
      const cplx gn = u[i].a * g + u[i].b * e;
      const cplx en = u[i].b * g + u[i].d * e;
      g_[i][0] = gn.real();
      g_[i][1] = gn.imag();
      e_[i][0] = en.real();
      e_[i][1] = en.imag();
    }
  }

  void kinetic() {
    for (fftw_complex* psi : {g_, e_}) {
      double* data = reinterpret_cast<double*>(psi);
      fftw_execute_r2r(plan_, data, data);
      for (std::size_t m = 0; m < n_; ++m) {
        const cplx z = cplx(psi[m][0], psi[m][1]) * kinetic_[m];
        psi[m][0] = z.real();
        psi[m][1] = z.imag();
      }
      fftw_execute_r2r(plan_, data, data);
    }
  }

  const CollisionConfig& cfg_;
  SpatialGrid grid_;
  std::size_t n_;
  fftw_complex* g_ = nullptr;
  fftw_complex* e_ = nullptr;
  fftw_complex* w_ = nullptr;
  fftw_plan plan_ = nullptr;
  std::vector<cplx> kinetic_;
  std::vector<double> energy_, ug_, ue_, damp_;
  std::vector<Unitary2> half_, full_;
};

}  // namespace

WavepacketRun evolve(const TwoChannelWavefunction& state, const CollisionConfig& config,
                     std::size_t n_steps) {
  config.grid.validate();
  if (config.dt <= 0) throw ConfigError("evolve: dt must be positive");
  if (config.reduced_mass <= 0) throw ConfigError("evolve: reduced mass must be positive");
  if (state.ground.size() != config.grid.size() || state.excited.size() != config.grid.size())
    throw ConfigError("evolve: state does not match the grid");
  if (n_steps == 0) {
    if (config.duration <= 0) throw ConfigError("evolve: duration or step count required");
    n_steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  }
  const std::size_t every = std::max<std::size_t>(config.sample_every, 1);

  SplitOperator op(config);
  op.load(state);
  WavepacketRun run;
  run.detuning = op.asymptotic_detuning();
  if (config.snapshot_every > 0)
    for (std::size_t i = 0; i < config.grid.size(); i += config.snapshot_stride)
      run.snapshot_r.push_back(config.grid.r(i));

  const auto snapshot = [&](double t) {
    WavepacketSnapshot snap;
    snap.time = t;
    op.density(std::max<std::size_t>(config.snapshot_stride, 1), snap);
    run.snapshots.push_back(std::move(snap));
  };

  const double t0 = state.time;
  run.samples.push_back(op.observe(t0));
  if (config.snapshot_every > 0) snapshot(t0);
  const double norm0 = run.samples.front().norm;
  const double energy0 = run.samples.front().energy;
  const bool reflective = config.outer == OuterBoundary::reflective;

  std::size_t done = 0;
  while (done < n_steps) {
    std::size_t block = std::min(every, n_steps - done);
    if (config.snapshot_every > 0) {
      const std::size_t to_snap = config.snapshot_every - done % config.snapshot_every;
      block = std::min(block, to_snap);
    }
    op.advance(block);
    done += block;
    const double t = t0 + static_cast<double>(done) * config.dt;
    if (done % every == 0 || done == n_steps) {
      run.samples.push_back(op.observe(t));
      const auto& s = run.samples.back();
      run.norm_drift = std::max(run.norm_drift, std::abs(s.norm - norm0));
      if (energy0 != 0.0)
        run.energy_drift = std::max(run.energy_drift, std::abs(s.energy - energy0) / std::abs(energy0));
      if (reflective && run.norm_drift > 1e-6)
        throw NumericalError("wavepacket", "norm drift " + std::to_string(run.norm_drift) +
                                               " at t = " + std::to_string(t) +
                                               " s; reduce dt (now " +
                                               std::to_string(config.dt) + " s)");
    }
    if (config.snapshot_every > 0 && done % config.snapshot_every == 0) snapshot(t);
  }

  run.final_state.grid = config.grid;
  run.final_state.ground.resize(config.grid.size());
  run.final_state.excited.resize(config.grid.size());
  run.final_state.time = t0 + static_cast<double>(n_steps) * config.dt;
  op.store(run.final_state);
  return run;
}

std::vector<std::pair<double, double>> excited_population_trace(const WavepacketRun& run) {
  std::vector<std::pair<double, double>> out;
  out.reserve(run.samples.size());
  for (const auto& s : run.samples) out.emplace_back(s.time, s.excited_population);
  return out;
}

Plateau excited_plateau(const WavepacketRun& run, double fraction) {
  const std::size_t n = run.samples.size();
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * n));
  double s = 0, s2 = 0;
  for (std::size_t i = n - count; i < n; ++i) {
    const double p = run.samples[i].excited_population;
    s += p;
    s2 += p * p;
  }
  const double mean = s / static_cast<double>(count);
  return {mean, std::sqrt(std::max(s2 / static_cast<double>(count) - mean * mean, 0.0))};
}

std::optional<AbsorptionWindow> absorption_time(const WavepacketRun& run,
                                                double threshold_fraction) {
  const auto& s = run.samples;
  if (s.size() < 3) return std::nullopt;
  const std::size_t n = s.size();
  std::vector<double> rate(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    rate[i] = (s[i + 1].excited_population - s[i - 1].excited_population) /
              (s[i + 1].time - s[i - 1].time);

  const double dt = s[1].time - s[0].time;
  std::size_t half = 0;
  if (run.detuning != 0.0) {
    const double period = two_pi / std::abs(run.detuning);
    half = static_cast<std::size_t>(std::llround(0.5 * period / dt));
  }
  std::vector<double> smooth(n, 0.0);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + rate[i];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    smooth[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }

  const double peak = *std::max_element(smooth.begin(), smooth.end());
  const double max_pe = std::accumulate(s.begin(), s.end(), 0.0, [](double m, const auto& x) {
    return std::max(m, x.excited_population);
  });
  if (!(peak > 0) || max_pe < 1e-14) return std::nullopt;

  AbsorptionWindow w;
  w.peak_rate = peak;
  const double threshold = threshold_fraction * peak;
  bool inside = false;
  double since = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const bool above = smooth[i] > threshold;
    if (above && !inside) {
      since = s[i].time;
      if (first) w.start = since;
      first = false;
    } else if (!above && inside) {
      w.duration += s[i].time - since;
      w.end = s[i].time;
    }
    inside = above;
  }
  if (inside) {
    w.duration += s[n - 1].time - since;
    w.end = s[n - 1].time;
  }
  return w;
}

namespace {

// Gauss-Hermite nodes and weights (weight exp(-x^2)) by Golub-Welsch.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(0.5 * i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = std::sqrt(pi) * v * v;
  }
}

// Excited population after a classical passage on U_g with an internal two-level system.
double semiclassical_population(const CollisionConfig& cfg, double k, double duration) {
  const double mu = cfg.reduced_mass;
  const double h = 1e-14;
  const auto accel = [&](double r) {
    return -hbar * (cfg.ground(r + h) - cfg.ground(r - h)) / (2.0 * h) / mu;
  };
  double r = cfg.packet.centre;
  double v = -hbar * k / mu;
  cplx cg(1.0, 0.0), ce(0.0, 0.0);
  const double dt = cfg.dt;
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  double a = accel(r);
  for (std::size_t s = 0; s < steps; ++s) {
    v += 0.5 * dt * a;
    const double r_mid = r + 0.5 * dt * v;
    const auto u = exp_2x2(cfg.ground(r_mid), cfg.excited(r_mid) - cfg.laser_frequency,
                           0.5 * cfg.rabi, dt);
    const cplx g2 = u.a * cg + u.b * ce;
    ce = u.b * cg + u.d * ce;
    cg = g2;
    r += dt * v;
    a = accel(r);
    v += 0.5 * dt * a;
  }
  return std::norm(ce);
}

double averaged_semiclassical(const CollisionConfig& cfg, double duration, int nodes) {
  std::vector<double> x, w;
  gauss_hermite(nodes, x, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = cfg.packet.wavenumber + cfg.packet.width * x[i];
    sum += w[i] * semiclassical_population(cfg, k, duration);
  }
  return sum / std::sqrt(pi);
}

}  // namespace

FranckCondonEstimate franck_condon_reduction(const WavepacketRun& run,
                                             const CollisionConfig& config, int momentum_nodes) {
  if (run.samples.size() < 2) throw DomainError("franck_condon_reduction: empty run");
  const Plateau plateau = excited_plateau(run);
  if (plateau.value > 1e-2)
    throw DomainError("franck_condon_reduction: P_e > 1e-2, outside the perturbative regime");
  const double duration = run.samples.back().time - run.samples.front().time;

  FranckCondonEstimate out;
  out.quantum_population = plateau.value;
  out.semiclassical_population = averaged_semiclassical(config, duration, momentum_nodes);
  if (!(out.semiclassical_population > 0))
    throw NumericalError("wavepacket", "reference passage shows no excitation");
  const double coarse = averaged_semiclassical(config, duration, std::max(2, momentum_nodes / 2));
  out.factor = std::sqrt(out.quantum_population / out.semiclassical_population);
  const double rel_q = plateau.value > 0 ? plateau.spread / plateau.value : 0.0;
  const double rel_sc = std::abs(coarse - out.semiclassical_population) / out.semiclassical_population;
  out.uncertainty = 0.5 * out.factor * std::hypot(rel_q, rel_sc);
  return out;
}

double landau_zener_parameter(double rabi, double slope, double velocity) {
  if (!(slope * velocity > 0))
    throw DomainError("landau_zener_parameter: need slope * velocity > 0");
  return std::exp(-pi * rabi * rabi / (2.0 * slope * velocity));
}

std::vector<double> morse_levels_numeric(const MorsePotential& pot, double reduced_mass,
                                         const SpatialGrid& grid, int count) {
  grid.validate();
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (count < 1 || count > n) throw DomainError("morse_levels_numeric: bad level count");
  const double length = grid.r_max - grid.r_min;
  Eigen::MatrixXd s(n, n);
  const double norm = std::sqrt(2.0 / static_cast<double>(n + 1));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index m = 0; m < n; ++m)
      s(j, m) = norm * std::sin(pi * static_cast<double>((j + 1) * (m + 1)) / static_cast<double>(n + 1));
  Eigen::VectorXd kin(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double k = pi * static_cast<double>(m + 1) / length;
    kin(m) = hbar * k * k / (2.0 * reduced_mass);
  }
  Eigen::MatrixXd h = s * kin.asDiagonal() * s.transpose();
  for (Eigen::Index j = 0; j < n; ++j)
    h(j, j) += pot(grid.r(static_cast<std::size_t>(j))) - pot.offset();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

std::vector<double> morse_levels_analytic(const MorsePotential& pot, double reduced_mass,
                                          int count) {
  const double we = pot.harmonic_frequency(reduced_mass);
  std::vector<double> out;
  for (int n = 0; n < count; ++n) {
    const double x = we * (n + 0.5);
    const double e = x - x * x / (4.0 * pot.depth());
    if (n > 0 && e <= out.back()) break;  // past the last bound level
    out.push_back(e);
  }
  return out;
}

}  // namespace exciplex
