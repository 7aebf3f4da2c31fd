#include "exciplex/scattering.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"
#include "exciplex/parallel.hpp"

namespace exciplex {

using namespace constants;

namespace {

// j_l(x) and y_l(x) for l = 0..L at fixed x. y_l by upward recurrence (stable),
// j_l by downward recurrence normalised to j_0 or j_1.
class BesselTable {
 public:
  explicit BesselTable(double x) : x_(x) {}

  double j(int l) {
    ensure(l);
    return j_[static_cast<std::size_t>(l)];
  }
  double y(int l) {
    ensure(l);
    return y_[static_cast<std::size_t>(l)];
  }

 private:
  void ensure(int l) {
    if (static_cast<std::size_t>(l) < j_.size()) return;
    build(std::max(2 * l, 64));
  }

  void build(int l_max) {
    const double x = x_;
    const auto n = static_cast<std::size_t>(l_max) + 1;
    y_.assign(n, 0.0);
    j_.assign(n, 0.0);
    const double s = std::sin(x), c = std::cos(x);
    y_[0] = -c / x;
    y_[1] = -c / (x * x) - s / x;
    for (std::size_t l = 1; l + 1 < n; ++l) {
      y_[l + 1] = (2.0 * static_cast<double>(l) + 1.0) / x * y_[l] - y_[l - 1];
      if (!std::isfinite(y_[l + 1])) y_[l + 1] = -std::numeric_limits<double>::infinity();
    }

    const double j0 = s / x;
    const double j1 = s / (x * x) - c / x;
    const int start = std::max(l_max, static_cast<int>(std::ceil(x))) + 50 +
                      static_cast<int>(20.0 * std::cbrt(x));
    std::vector<double> t(static_cast<std::size_t>(start) + 2, 0.0);
    t[static_cast<std::size_t>(start)] = 1e-300;
    for (int l = start; l >= 1; --l) {
      const auto u = static_cast<std::size_t>(l);
      t[u - 1] = (2.0 * l + 1.0) / x * t[u] - t[u + 1];
      if (std::abs(t[u - 1]) > 1e250) {
        for (std::size_t m = u - 1; m < t.size(); ++m) t[m] *= 1e-250;
      }
    }
    const double scale = std::abs(j0) > std::abs(j1) ? j0 / t[0] : j1 / t[1];
    for (std::size_t l = 0; l < n; ++l) j_[l] = t[l] * scale;
  }

  double x_;
  std::vector<double> j_, y_;
};

}  // namespace

// ---------------------------------------------------------------------------
// potentials
// ---------------------------------------------------------------------------

ScatteringPotential ScatteringPotential::zero() { return {}; }

ScatteringPotential ScatteringPotential::hard_sphere(double radius) {
  if (radius <= 0) throw DomainError("hard_sphere: radius must be positive");
  ScatteringPotential p;
  p.kind_ = Kind::hard_sphere;
  p.radius_ = radius;
  p.core_ = radius;
  return p;
}

ScatteringPotential ScatteringPotential::square_well(double depth, double radius) {
  if (radius <= 0) throw DomainError("square_well: radius must be positive");
  ScatteringPotential p;
  p.kind_ = Kind::square_well;
  p.depth_ = depth;
  p.radius_ = radius;
  return p;
}

ScatteringPotential ScatteringPotential::morse(const MorsePotential& pot, double core_radius) {
  if (core_radius < 0) throw DomainError("morse: core radius must be non-negative");
  ScatteringPotential p;
  p.kind_ = Kind::morse;
  p.morse_ = MorsePotential(pot.depth(), pot.width(), pot.r_eq(), -pot.depth());
  p.depth_ = pot.depth();
  p.core_ = core_radius;
  return p;
}

double ScatteringPotential::operator()(double r) const {
  switch (kind_) {
    case Kind::zero:
    case Kind::hard_sphere: return 0.0;
    case Kind::square_well: return r < radius_ ? -depth_ : 0.0;
    case Kind::morse: return morse_(r);
  }
  return 0.0;
}

double ScatteringPotential::range() const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::hard_sphere:
    case Kind::square_well: return radius_;
    case Kind::morse: return morse_.r_eq() + 30.0 / morse_.width();
  }
  return 0.0;
}

double ScatteringPotential::well_depth() const {
  if (kind_ == Kind::square_well || kind_ == Kind::morse) return std::max(depth_, 0.0);
  return 0.0;
}

double ScatteringPotential::inner_limit() const {
  if (core_ > 0) return core_;
  if (kind_ == Kind::morse) return 1e-3 * morse_.r_eq();
  return 0.0;
}

double centrifugal_energy(int l, double reduced_mass, double r) {
  if (r <= 0) throw DomainError("centrifugal_energy: r must be positive");
  return hbar * l * (l + 1.0) / (2.0 * reduced_mass * r * r);
}

double effective_potential(const MorsePotential& pot, int l, double reduced_mass, double r) {
  if (l < 0) throw DomainError("effective_potential: l must be non-negative");
  return morse_eval(pot, r) + centrifugal_energy(l, reduced_mass, r);
}

// ---------------------------------------------------------------------------
// Numerov integration
// ---------------------------------------------------------------------------

namespace {

struct RadialGrid {
  double r0 = 0.0;
  double h = 0.0;
  std::vector<double> r;
  std::vector<double> w;  // 2 mu U / hbar - k^2
  std::size_t ia = 0;     // matching nodes
  std::size_t ib = 0;
  bool wall = false;      // u(r0) = 0 is a true boundary condition
};

RadialGrid make_grid(double k, const ScatteringPotential& pot, double mu,
                     const PhaseShiftOptions& opt) {
  const double scale = 2.0 * mu / hbar;
  const double k_max = std::sqrt(k * k + scale * pot.well_depth());
  const double range = pot.range();
  double h = opt.step_fraction / k_max;
  h = std::min(h, range / 200.0);

  RadialGrid g;
  if (pot.core_radius() > 0) {
    g.r0 = pot.core_radius();
    g.wall = true;
  } else if (pot.kind() == ScatteringPotential::Kind::square_well) {
    g.r0 = 0.0;
    g.wall = true;
    h = range / std::ceil(range / h);
  } else {
    // Smooth repulsive wall: begin where the l = 0 solution has decayed by
    // exp(-decay_integral) relative to the innermost allowed point.
    const auto f = [&](double r) { return scale * pot(r) - k * k; };
    double lo = pot.inner_limit(), hi = range;
    if (f(lo) <= 0) {
      g.r0 = lo;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-6 * h; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
      }
      double r = hi, integral = 0.0;
      while (r - h > pot.inner_limit() && integral < opt.decay_integral) {
        const double fr = f(r - h);
        if (h * h * fr > 6.0) break;
        integral += std::sqrt(std::max(fr, 0.0)) * h;
        r -= h;
      }
      g.r0 = r;
    }
  }
  g.h = h;

  const double r_a = range + 10.0 * h;
  g.ia = static_cast<std::size_t>(std::ceil((r_a - g.r0) / h));
  const auto quarter = static_cast<std::size_t>(std::ceil(0.5 * pi / k / h));
  g.ib = g.ia + std::max<std::size_t>(10, quarter);

  g.r.resize(g.ib + 1);
  g.w.resize(g.ib + 1);
  const double jump = pot.discontinuity();
  for (std::size_t i = 0; i <= g.ib; ++i) {
    const double r = g.r0 + static_cast<double>(i) * h;
    g.r[i] = r;
    double u = pot(r);
    if (jump > 0 && std::abs(r - jump) < 1e-6 * h) u = pot.jump_average();
    g.w[i] = scale * u - k * k;
  }
  return g;
}

class Numerov {
 public:
  Numerov(const RadialGrid& g, double k, double decay)
      : g_(g),
        decay_(decay),
        bessel_a_(k * g.r[g.ia]),
        bessel_b_(k * g.r[g.ib]) {
    const double h2 = g.h * g.h / 12.0;
    const std::size_t n = g.r.size();
    c0_.resize(n);
    c1_.resize(n);
    t_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c0_[i] = 1.0 - h2 * g.w[i];
      c1_[i] = g.r[i] > 0 ? h2 / (g.r[i] * g.r[i]) : 0.0;
    }
  }

  // Principal-value phase shift for angular momentum l.
  double phase(int l) {
    const double ll = l * (l + 1.0);
    // h^2 f / 12 at node i
    const auto hf = [&](std::size_t i) { return 1.0 - c0_[i] + ll * c1_[i]; };

    // innermost allowed node (non-decreasing in l) and start node
    while (i_in_ < g_.ia && hf(i_in_) >= 0) ++i_in_;
    std::size_t s = i_in_;
    double integral = 0.0;
    while (s > 0 && integral < decay_) {
      const double x = hf(s - 1);
      if (x > 0.5) break;
      integral += std::sqrt(std::max(12.0 * x, 0.0));
      --s;
    }
    if (s > 0 && g_.wall && integral < decay_) s = 0;
    if (s >= g_.ia) return 0.0;  // turning point beyond the potential range

    // y_i = g_i u_i obeys y_{i+1} = (12 / g_i - 10) y_i - y_{i-1}
    for (std::size_t i = s; i <= g_.ib; ++i) t_[i] = 12.0 / (c0_[i] - ll * c1_[i]) - 10.0;
    double y_prev = 0.0, y = 1e-30;
    double y_a = s + 1 == g_.ia ? y : 0.0;
    for (std::size_t i = s + 1; i < g_.ib; ++i) {
      const double y_next = t_[i] * y - y_prev;
      y_prev = y;
      y = y_next;
      if (std::abs(y) > 1e200) {
        y *= 1e-200;
        y_prev *= 1e-200;
        y_a *= 1e-200;
      }
      if (i + 1 == g_.ia) y_a = y;
    }
    const double u_a = y_a / (c0_[g_.ia] - ll * c1_[g_.ia]);
    const double u_b = y / (c0_[g_.ib] - ll * c1_[g_.ib]);

    const double r_a = g_.r[g_.ia], r_b = g_.r[g_.ib];
    const double ratio = (u_a / r_a) / (u_b / r_b);
    if (!std::isfinite(ratio))
      throw NumericalError("scattering", "Numerov solution vanished at the matching radius");
    const double ja = bessel_a_.j(l), jb = bessel_b_.j(l);
    const double ya = bessel_a_.y(l), yb = bessel_b_.y(l);
    const double num = ja - ratio * jb;
    const double den = ya - ratio * yb;
    if (!std::isfinite(den) || !std::isfinite(num)) return 0.0;
    return std::atan(num / den);
  }

 private:
  const RadialGrid& g_;
  double decay_;
  BesselTable bessel_a_, bessel_b_;
  std::size_t i_in_ = 0;
  std::vector<double> c0_, c1_, t_;
};

}  // namespace

double phase_shift(double k, int l, const ScatteringPotential& pot, double reduced_mass,
                   const PhaseShiftOptions& options) {
  if (k <= 0) throw DomainError("phase_shift: k must be positive");
  if (l < 0) throw DomainError("phase_shift: l must be non-negative");
  if (pot.kind() == ScatteringPotential::Kind::zero) return 0.0;
  const RadialGrid grid = make_grid(k, pot, reduced_mass, options);
  Numerov solver(grid, k, options.decay_integral);
  return solver.phase(l);
}

double wkb_phase_shift(double k, int l, const ScatteringPotential& pot, double reduced_mass) {
  if (pot.kind() == ScatteringPotential::Kind::zero) return 0.0;
  const double scale = 2.0 * reduced_mass / hbar;
  const double L = l + 0.5;
  const double R = std::max(pot.range(), L / k) * 1.5 + 1.0 / k;
  const auto q2 = [&](double r) { return k * k - scale * pot(r) - L * L / (r * r); };

  // outermost turning point
  const double floor = std::max(pot.inner_limit(), 1e-3 * R);
  double hi = R, lo = R;
  const int n_scan = 4000;
  bool wall = true;
  for (int i = 1; i <= n_scan; ++i) {
    const double r = R - (R - floor) * i / n_scan;
    if (q2(r) < 0) {
      lo = r;
      wall = false;
      break;
    }
    hi = r;
  }
  double r_t = hi;
  if (!wall) {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (q2(mid) < 0 ? lo : hi) = mid;
    }
    r_t = hi;
  } else {
    r_t = floor;
  }
  const auto q = [&](double r) { return std::sqrt(std::max(q2(r), 0.0)); };
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(q, r_t, R, 8);
  const double free = std::sqrt(k * k * R * R - L * L) - L * std::acos(L / (k * R));
  return inner - free - (wall ? pi / 4.0 : 0.0);
}

std::vector<double> phase_shift_curve(const std::vector<double>& ks, int l,
                                      const ScatteringPotential& pot, double reduced_mass,
                                      const PhaseShiftOptions& options) {
  std::vector<std::size_t> order(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ks[a] > ks[b]; });

  std::vector<double> out(ks.size());
  double previous = 0.0;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const std::size_t i = order[n];
    const double principal = phase_shift(ks[i], l, pot, reduced_mass, options);
    const double anchor = n == 0 ? wkb_phase_shift(ks[i], l, pot, reduced_mass) : previous;
    const double m = std::round((anchor - principal) / pi);
    out[i] = principal + m * pi;
    previous = out[i];
  }
  return out;
}

PartialWaveSet partial_waves(double k, const ScatteringPotential& pot, double reduced_mass,
                             const PartialWaveOptions& options) {
  if (k <= 0) throw DomainError("partial_waves: k must be positive");
  PartialWaveSet set;
  set.k = k;
  if (pot.kind() == ScatteringPotential::Kind::zero) {
    set.delta.assign(static_cast<std::size_t>(options.tail_run), 0.0);
    set.converged = true;
    return set;
  }
  const RadialGrid grid = make_grid(k, pot, reduced_mass, options.phase);
  Numerov solver(grid, k, options.phase.decay_integral);
  const int cap = std::max(options.l_max, options.l_cap);
  int run = 0;
  for (int l = 0; l <= cap; ++l) {
    const double d = solver.phase(l);
    set.delta.push_back(d);
    run = std::abs(std::sin(d)) < options.tail ? run + 1 : 0;
    if (run >= options.tail_run) {
      set.converged = true;
      break;
    }
  }
  return set;
}

double cross_section(const PartialWaveSet& pw, int l_cut) {
  double sum = 0.0;
  const auto n = std::min<std::size_t>(pw.delta.size(), static_cast<std::size_t>(l_cut) + 1);
  for (std::size_t l = 0; l < n; ++l) {
    const double s = std::sin(pw.delta[l]);
    sum += (2.0 * static_cast<double>(l) + 1.0) * s * s;
  }
  return 4.0 * pi / (pw.k * pw.k) * sum;
}

double cross_section(const PartialWaveSet& pw) {
  if (!pw.converged)
    throw NumericalError("scattering", "partial-wave sum not converged at k = " +
                                           std::to_string(pw.k) + " 1/m");
  return cross_section(pw, static_cast<int>(pw.delta.size()));
}

double unitarity_bound(const PartialWaveSet& pw) {
  const double n = static_cast<double>(pw.delta.size());
  return 4.0 * pi / (pw.k * pw.k) * n * n;
}

// ---------------------------------------------------------------------------
// thermal averages
// ---------------------------------------------------------------------------

double VelocityDistribution::most_probable_speed() const {
  return std::sqrt(2.0 * boltzmann * temperature / reduced_mass);
}

double maxwell_density(double v, const VelocityDistribution& dist) {
  if (v < 0) throw DomainError("maxwell_density: v must be non-negative");
  if (dist.temperature <= 0 || dist.reduced_mass <= 0)
    throw DomainError("maxwell_density: temperature and mass must be positive");
  const double a = dist.reduced_mass / (2.0 * boltzmann * dist.temperature);
  return 4.0 * pi * v * v * std::pow(a / pi, 1.5) * std::exp(-a * v * v);
}

namespace {

ThermalCrossSection thermal_average(double temperature, const ScatteringPotential& pot,
                                    double mu, const ThermalOptions& opt, int l_limit) {
  if (opt.panels < 1) throw DomainError("thermal_cross_section: need at least one panel");
  const VelocityDistribution dist{temperature, mu};
  const double vp = dist.most_probable_speed();
  const double v_max = opt.v_max_factor * vp;

  using rule = boost::math::quadrature::gauss<double, 32>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  ThermalCrossSection out;
  const double width = v_max / opt.panels;
  for (int p = 0; p < opt.panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sign : {-1, 1}) {
        if (x[i] == 0.0 && sign > 0) continue;
        const double v = mid + sign * 0.5 * width * x[i];
        out.speeds.push_back(v);
        out.weights.push_back(0.5 * width * w[i] * maxwell_density(v, dist));
      }
    }
  }
  const double s = opt.v_max_factor;
  out.tail_mass = std::erfc(s) + 2.0 / std::sqrt(pi) * s * std::exp(-s * s);

  const std::size_t n = out.speeds.size();
  std::vector<PartialWaveSet> sets(n);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    const double k = mu * out.speeds[i] / hbar;
    if (l_limit >= 0) {
      const RadialGrid grid = make_grid(k, pot, mu, opt.partial_waves.phase);
      Numerov solver(grid, k, opt.partial_waves.phase.decay_integral);
      sets[i].k = k;
      for (int l = 0; l <= l_limit; ++l) sets[i].delta.push_back(solver.phase(l));
      sets[i].converged = true;
    } else {
      sets[i] = partial_waves(k, pot, mu, opt.partial_waves);
    }
  });

  std::size_t l_used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sets[i].converged)
      throw NumericalError("scattering", "l-sum did not converge at v = " +
                                             std::to_string(out.speeds[i]) + " m/s");
    l_used = std::max(l_used, sets[i].delta.size());
  }
  out.l_used = static_cast<int>(l_used) - 1;
  out.cumulative.assign(l_used, 0.0);
  out.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pw = sets[i];
    const double pre = 4.0 * pi / (pw.k * pw.k);
    double partial = 0.0;
    for (std::size_t l = 0; l < l_used; ++l) {
      if (l < pw.delta.size()) {
        const double sn = std::sin(pw.delta[l]);
        partial += pre * (2.0 * static_cast<double>(l) + 1.0) * sn * sn;
      }
      out.cumulative[l] += out.weights[i] * partial;
    }
    out.sigma[i] = partial;
    out.total += out.weights[i] * partial;
  }
  return out;
}

}  // namespace

ThermalCrossSection thermal_cross_section(double temperature, const ScatteringPotential& pot,
                                          double reduced_mass, const ThermalOptions& options) {
  return thermal_average(temperature, pot, reduced_mass, options, -1);
}

int barrier_l_cut(double temperature, double reduced_mass, double radius, double upconversion,
                  BarrierCriterion criterion) {
  double energy = 1.5 * boltzmann * temperature / hbar;
  if (criterion == BarrierCriterion::mean_energy_minus_upconversion) energy -= upconversion;
  if (energy <= 0) return -1;
  const double unit = centrifugal_energy(1, reduced_mass, radius) / 2.0;  // hbar / (2 mu r^2)
  // largest l with l(l+1) unit < energy
  int l = static_cast<int>(std::floor(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * energy / unit))));
  while (l >= 0 && l * (l + 1.0) * unit >= energy) --l;
  while ((l + 1) * (l + 2.0) * unit < energy) ++l;
  return l;
}

double cooling_cross_section(double temperature, const ScatteringPotential& pot,
                             double reduced_mass, int l_cut, const ThermalOptions& options) {
  if (l_cut < 0) return 0.0;
  return thermal_average(temperature, pot, reduced_mass, options, l_cut).total;
}

}  // namespace exciplex
