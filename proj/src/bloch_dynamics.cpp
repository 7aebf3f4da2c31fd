#include "exciplex/bloch_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"
#include "exciplex/parallel.hpp"

namespace exciplex {

using constants::pi;

DiffusionParams DiffusionParams::from_pulses(double local_rabi, double collision_rate,
                                             double pulse_duration, double decay) {
  DiffusionParams p;
  p.local_rabi = std::abs(local_rabi);
  p.collision_rate = collision_rate;
  p.pulse_duration = pulse_duration;
  p.decay = decay;
  p.diffusion_rate = exciplex::diffusion_rate(local_rabi, collision_rate, pulse_duration);
  return p;
}

DiffusionParams DiffusionParams::from_rates(double diffusion_rate, double decay,
                                            double collision_rate) {
  if (diffusion_rate < 0 || decay < 0 || collision_rate < 0)
    throw DomainError("DiffusionParams: rates must be non-negative");
  DiffusionParams p;
  p.diffusion_rate = diffusion_rate;
  p.decay = decay;
  p.collision_rate = collision_rate;
  return p;
}

double diffusion_rate(double local_rabi, double collision_rate, double pulse_duration) {
  if (collision_rate < 0 || pulse_duration < 0)
    throw DomainError("diffusion_rate: kappa and tau must be non-negative");
  return local_rabi * local_rabi * collision_rate * pulse_duration * pulse_duration / pi;
}

double excited_population(const DiffusionParams& p, double t) {
  if (t < 0) throw DomainError("excited_population: t must be non-negative");
  const double rate = 2.0 * p.diffusion_rate + p.decay;
  if (rate == 0.0) return 0.0;
  return p.diffusion_rate / rate * (-std::expm1(-rate * t));
}

double steady_state_population(const DiffusionParams& p) {
  const double rate = 2.0 * p.diffusion_rate + p.decay;
  if (rate == 0.0) return 0.0;
  return p.diffusion_rate / rate;
}

// ---------------------------------------------------------------------------

SpinDistribution::SpinDistribution(std::vector<double> coefficients, DiffusionParams params,
                                   double time, bool converged)
    : w_(std::move(coefficients)), params_(params), time_(time), converged_(converged) {
  if (params_.diffusion_rate > 0 && time_ > 0) singular_ = params_.decay / (2.0 * params_.diffusion_rate);
}

double SpinDistribution::remainder(std::size_t n) const {
  if (n == 0 || singular_ == 0.0) return w_[n];
  const double m = static_cast<double>(n);
  return w_[n] - singular_ * (2.0 * m + 1.0) / (m * (m + 1.0));
}

double SpinDistribution::density(double theta) const {
  const double x = std::cos(theta);
  double p_prev = 1.0, p_cur = x;
  double sum = w_[0];
  if (singular_ > 0) sum += singular_ * (-1.0 - std::log((1.0 - x) / 2.0));
  if (w_.size() > 1) sum += remainder(1) * x;
  for (std::size_t n = 1; n + 1 < w_.size(); ++n) {
    const double p_next = ((2.0 * n + 1.0) * x * p_cur - n * p_prev) / (n + 1.0);
    sum += remainder(n + 1) * p_next;
    p_prev = p_cur;
    p_cur = p_next;
  }
  return sum / (2.0 * pi);
}

double SpinDistribution::cdf_cos(double x) const {
  x = std::clamp(x, -1.0, 1.0);
  // int_{-1}^{x} P_n = (P_{n+1} - P_{n-1}) / (2n + 1) for n >= 1
  double sum = w_[0] * (x + 1.0);
  if (singular_ > 0 && x < 1.0) sum += singular_ * (1.0 - x) * std::log((1.0 - x) / 2.0);
  double p_prev = 1.0, p_cur = x;  // P_{n-1}, P_n with n = 1
  for (std::size_t n = 1; n < w_.size(); ++n) {
    const double p_next = ((2.0 * n + 1.0) * x * p_cur - n * p_prev) / (n + 1.0);
    sum += remainder(n) * (p_next - p_prev) / (2.0 * n + 1.0);
    p_prev = p_cur;
    p_cur = p_next;
  }
  return sum;
}

double SpinDistribution::mean_cos() const { return w_.size() > 1 ? 2.0 / 3.0 * w_[1] : 0.0; }

double SpinDistribution::mean_cos2() const {
  const double p2 = w_.size() > 2 ? 2.0 / 5.0 * w_[2] : 0.0;
  return (1.0 + 2.0 * p2) / 3.0;
}

double SpinDistribution::excited_population() const { return 0.5 * (1.0 - mean_cos()); }

double SpinDistribution::min_density(int n_theta) const {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_theta; ++i) {
    const double theta = pi * i / (n_theta - 1);
    lo = std::min(lo, density(theta));
  }
  return lo;
}

namespace {

std::vector<double> legendre_coefficients(const DiffusionParams& p, double t, int n_max) {
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double xi = p.diffusion_rate * n * (n + 1.0) + p.decay;
    const double decay = std::exp(-xi * t);
    const double relax = xi > 0 ? p.decay / xi * (-std::expm1(-xi * t)) : 0.0;
    w[static_cast<std::size_t>(n)] = 0.5 * (2.0 * n + 1.0) * (relax + decay);
  }
  return w;
}

}  // namespace

SpinDistribution spin_distribution(const DiffusionParams& p, double t, int n_max, int n_cap) {
  if (n_max < 1) throw DomainError("spin_distribution: N_max must be >= 1");
  if (t < 0) throw DomainError("spin_distribution: t must be non-negative");
  int n = n_max;
  for (;;) {
    SpinDistribution s(legendre_coefficients(p, t, n), p, t, false);
    const bool converged = std::abs(s.remainder(static_cast<std::size_t>(n))) < 1e-10;
    if (converged || n >= n_cap) return SpinDistribution(s.coefficients(), p, t, converged);
    n = std::min(2 * n, n_cap);
  }
}

double cos_variance(const DiffusionParams& p, double t) {
  if (t < 0) throw DomainError("population_variance: t must be non-negative");
  const double d = p.diffusion_rate;
  const double g = p.decay;
  const double xi1 = 2.0 * d + g;
  const double xi2 = 6.0 * d + g;
  if (xi1 == 0.0) return 0.0;
  const double mean_p2 = (6.0 * d * std::exp(-xi2 * t) + g) / xi2;
  const double mean_cos = (g + 2.0 * d * std::exp(-xi1 * t)) / xi1;
  return 2.0 / 3.0 * mean_p2 + 1.0 / 3.0 - mean_cos * mean_cos;
}

double population_variance(const DiffusionParams& p, double t) {
  const double var = cos_variance(p, t);
  if (var < -1e-12)
    throw NumericalError("bloch_dynamics",
                         "negative variance radicand " + std::to_string(var));
  return 0.5 * std::sqrt(std::max(var, 0.0));
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

double pulse_area(const DiffusionParams& p, const MonteCarloOptions& options) {
  const bool exponential = options.durations == PulseDurations::exponential;
  if (options.area_source == PulseAreaSource::rabi_times_duration)
    return p.local_rabi * p.pulse_duration;

  if (p.diffusion_rate == 0.0) return 0.0;
  if (p.collision_rate <= 0.0)
    throw DomainError("monte_carlo_bloch: a positive collision rate is required");
  const double ratio = 2.0 * p.diffusion_rate / p.collision_rate;  // 1 - <cos alpha>
  if (exponential) {
    if (ratio >= 1.0)
      throw DomainError("monte_carlo_bloch: D too large for kappa (need 2D < kappa)");
    return std::sqrt(ratio / (1.0 - ratio));
  }
  if (ratio > 2.0) throw DomainError("monte_carlo_bloch: D too large for kappa (need D <= kappa)");
  return std::acos(1.0 - ratio);
}

double effective_diffusion_rate(const DiffusionParams& p, const MonteCarloOptions& options) {
  const double alpha = pulse_area(p, options);
  const double mean_cos = options.durations == PulseDurations::exponential
                              ? 1.0 / (1.0 + alpha * alpha)
                              : std::cos(alpha);
  return 0.5 * p.collision_rate * (1.0 - mean_cos);
}

namespace {

using Vec3 = std::array<double, 3>;

double resolved_t_end(const DiffusionParams& p, const MonteCarloOptions& options) {
  if (options.t_end > 0) return options.t_end;
  const double rate = 2.0 * p.diffusion_rate + p.decay;
  if (rate <= 0) throw DomainError("monte_carlo_bloch: t_end required when D = gamma = 0");
  return 12.0 / rate;
}

std::vector<double> sample_times(double t_end, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = n == 1 ? t_end : t_end * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

// Rotation of r by an angle with cosine ca and sine sa about the equatorial axis
// (cos phi, sin phi, 0).
void rotate(Vec3& r, double ca, double sa, double phi) {
  const double nx = std::cos(phi), ny = std::sin(phi);
  const double dot = nx * r[0] + ny * r[1];
  const Vec3 cross{ny * r[2], -nx * r[2], nx * r[1] - ny * r[0]};
  Vec3 out;
  out[0] = r[0] * ca + cross[0] * sa + nx * dot * (1.0 - ca);
  out[1] = r[1] * ca + cross[1] * sa + ny * dot * (1.0 - ca);
  out[2] = r[2] * ca + cross[2] * sa;
  const double norm = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
  r = {out[0] / norm, out[1] / norm, out[2] / norm};
}

struct Walker {
  const DiffusionParams& p;
  double alpha;
  bool exponential;

  template <class Record>
  void run(std::mt19937_64& rng, const std::vector<double>& times, Record&& record) const {
    Vec3 r{0.0, 0.0, 1.0};
    const double kappa = alpha > 0 ? p.collision_rate : 0.0;
    const double total = kappa + p.decay;
    std::exponential_distribution<double> wait(total > 0 ? total : 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::exponential_distribution<double> unit_exp(1.0);
    const double ca = std::cos(alpha), sa = std::sin(alpha);

    std::size_t k = 0;
    double t = 0.0;
    while (k < times.size()) {
      const double t_next =
          total > 0 ? t + wait(rng) : std::numeric_limits<double>::infinity();
      while (k < times.size() && times[k] < t_next) record(k++, r);
      if (k == times.size()) break;
      t = t_next;
      if (uniform(rng) * total < p.decay) {
        r = {0.0, 0.0, 1.0};
      } else {
        if (exponential) {
          const double area = alpha * unit_exp(rng);
          rotate(r, std::cos(area), std::sin(area), constants::two_pi * uniform(rng));
        } else {
          rotate(r, ca, sa, constants::two_pi * uniform(rng));
        }
      }
    }
  }
};

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  return std::mt19937_64(seq);
}

struct MomentSums {
  std::vector<double> s1, s2, s3, s4;
  explicit MomentSums(std::size_t n) : s1(n), s2(n), s3(n), s4(n) {}
};

}  // namespace

BlochTrajectory bloch_trajectory(const DiffusionParams& p, const MonteCarloOptions& options,
                                 std::size_t index) {
  const auto times = sample_times(resolved_t_end(p, options), options.n_samples);
  const Walker walker{p, pulse_area(p, options),
                      options.durations == PulseDurations::exponential};
  BlochTrajectory traj;
  traj.seed = options.seed;
  traj.index = index;
  auto rng = trajectory_rng(options.seed, index);
  walker.run(rng, times, [&](std::size_t k, const Vec3& r) {
    traj.samples.push_back({times[k], r});
  });
  return traj;
}

MonteCarloResult monte_carlo_bloch(const DiffusionParams& p, double upconversion,
                                   const MonteCarloOptions& options) {
  if (options.n_trajectories < 1) throw DomainError("monte_carlo_bloch: need >= 1 trajectory");
  if (options.n_samples < 1) throw DomainError("monte_carlo_bloch: need >= 1 sample time");

  MonteCarloResult result;
  const double t_end = resolved_t_end(p, options);
  result.times = sample_times(t_end, options.n_samples);
  result.pulse_area = pulse_area(p, options);
  result.effective_diffusion_rate = effective_diffusion_rate(p, options);
  result.n_trajectories = options.n_trajectories;
  if (p.collision_rate > 0 && upconversion / p.collision_rate <= 1.0)
    result.warnings.push_back(
        "Omega * tau_kappa <= 1: phase randomisation between pulses is not justified");

  const Walker walker{p, result.pulse_area, options.durations == PulseDurations::exponential};
  const std::size_t n = options.n_trajectories;
  const std::size_t n_chunks = std::min<std::size_t>(n, 256);
  const std::size_t n_t = result.times.size();
  std::vector<MomentSums> chunks(n_chunks, MomentSums(n_t));
  if (options.keep_final_samples) result.final_cos.assign(n, 0.0);
  std::vector<double> finals(n);

  parallel_for(n_chunks, options.threads, [&](std::size_t c) {
    const std::size_t begin = c * n / n_chunks;
    const std::size_t end = (c + 1) * n / n_chunks;
    auto& sums = chunks[c];
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = trajectory_rng(options.seed, i);
      walker.run(rng, result.times, [&](std::size_t k, const Vec3& r) {
        const double rho = 0.5 * (1.0 - r[2]);
        const double rho2 = rho * rho;
        sums.s1[k] += rho;
        sums.s2[k] += rho2;
        sums.s3[k] += rho2 * rho;
        sums.s4[k] += rho2 * rho2;
        if (k + 1 == n_t) finals[i] = r[2];
      });
    }
  });

  const double N = static_cast<double>(n);
  result.mean_population.resize(n_t);
  result.std_population.resize(n_t);
  result.stderr_mean.resize(n_t);
  result.stderr_std.resize(n_t);
  for (std::size_t k = 0; k < n_t; ++k) {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (const auto& c : chunks) {
      s1 += c.s1[k];
      s2 += c.s2[k];
      s3 += c.s3[k];
      s4 += c.s4[k];
    }
    const double mu = s1 / N;
    const double e2 = s2 / N, e3 = s3 / N, e4 = s4 / N;
    const double m2 = std::max(e2 - mu * mu, 0.0);
    const double m4 =
        std::max(e4 - 4.0 * mu * e3 + 6.0 * mu * mu * e2 - 3.0 * mu * mu * mu * mu, 0.0);
    const double sd = std::sqrt(m2);
    result.mean_population[k] = mu;
    result.std_population[k] = sd;
    result.stderr_mean[k] = sd / std::sqrt(N);
    result.stderr_std[k] = sd > 0 ? std::sqrt(std::max(m4 - m2 * m2, 0.0) / N) / (2.0 * sd) : 0.0;
  }

  const std::size_t bins = std::max<std::size_t>(options.histogram_bins, 1);
  result.histogram_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    result.histogram_edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
  result.histogram_density.assign(bins, 0.0);
  const double width = 2.0 / static_cast<double>(bins);
  for (double z : finals) {
    auto b = static_cast<std::size_t>((z + 1.0) / width);
    result.histogram_density[std::min(b, bins - 1)] += 1.0;
  }
  for (auto& h : result.histogram_density) h /= N * width;
  if (options.keep_final_samples) result.final_cos = std::move(finals);
  return result;
}

}  // namespace exciplex
