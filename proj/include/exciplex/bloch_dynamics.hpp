#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace exciplex {

/// Parameters of the decaying random walk of one dopant atom on the Bloch sphere.
/// D is a rate in 1/s (not multiplied by 2 pi).
struct DiffusionParams {
  double diffusion_rate = 0.0;  // D
  double decay = 0.0;           // gamma
  double local_rabi = 0.0;      // |chi_R| during a pulse
  double collision_rate = 0.0;  // kappa
  double pulse_duration = 0.0;  // tau

  /// D = chi^2 kappa tau^2 / pi.
  static DiffusionParams from_pulses(double local_rabi, double collision_rate,
                                     double pulse_duration, double decay);
  /// Direct (D, gamma) with the pulse rate kept for Monte-Carlo use.
  static DiffusionParams from_rates(double diffusion_rate, double decay,
                                    double collision_rate = 0.0);
};

/// D = chi^2 kappa tau^2 / pi.
double diffusion_rate(double local_rabi, double collision_rate, double pulse_duration);

/// rho_ee(t) = D/(2D+gamma) (1 - exp(-(2D+gamma) t)), starting in the ground state.
double excited_population(const DiffusionParams& p, double t);
double steady_state_population(const DiffusionParams& p);

/// Legendre coefficients of the Bloch-vector distribution u(theta, t).
///
/// u(theta) = (1/2pi) sum_n w_n P_n(cos theta); theta = 0 is the ground state.
/// For D > 0 and t > 0 the decay feeds the pole, so w_n ~ gamma / (2 D n) and u has a
/// logarithmic singularity at theta = 0. That part,
/// (gamma / 2D) sum_{n>=1} (2n+1) / (n(n+1)) P_n(x) = (gamma / 2D) (-1 - ln((1 - x) / 2)),
/// is summed in closed form; the series only carries the remainder.
class SpinDistribution {
 public:
  SpinDistribution(std::vector<double> coefficients, DiffusionParams params, double time,
                   bool converged);

  const std::vector<double>& coefficients() const { return w_; }
  const DiffusionParams& params() const { return params_; }
  double time() const { return time_; }
  std::size_t n_max() const { return w_.empty() ? 0 : w_.size() - 1; }
  /// False when the last remainder coefficient is still >= 1e-10 at the largest N tried.
  bool converged() const { return converged_; }

  /// u(theta), per unit solid angle.
  double density(double theta) const;
  /// Probability that cos(theta) <= x.
  double cdf_cos(double x) const;
  /// <cos theta> = (2/3) w_1.
  double mean_cos() const;
  /// <cos^2 theta> = (1 + 2 <P_2>) / 3.
  double mean_cos2() const;
  /// (1 - <cos theta>) / 2.
  double excited_population() const;
  /// min of u over an n-point theta grid (negative values flag truncation ringing).
  double min_density(int n_theta = 721) const;
  /// w_n minus the closed-form singular part.
  double remainder(std::size_t n) const;

 private:
  std::vector<double> w_;
  DiffusionParams params_;
  double time_;
  bool converged_;
  double singular_ = 0.0;  // gamma / 2D, or 0
};

/// w_n = (2n+1)/2 [gamma/xi_n (1 - e^{-xi_n t}) + e^{-xi_n t}],  xi_n = D n(n+1) + gamma.
/// Starts at n_max and doubles until the last remainder coefficient is below 1e-10 or
/// `n_cap` is reached.
SpinDistribution spin_distribution(const DiffusionParams& p, double t, int n_max = 64,
                                   int n_cap = 32768);

/// <cos^2> - <cos>^2 in closed form.
double cos_variance(const DiffusionParams& p, double t);

/// Delta rho_ee = sqrt(<cos^2> - <cos>^2) / 2. Throws NumericalError if the
/// radicand is below -1e-12; smaller negative values are clamped to zero.
double population_variance(const DiffusionParams& p, double t);

// ---------------------------------------------------------------------------
// Monte-Carlo trajectories
// ---------------------------------------------------------------------------

/// How the rotation angle of each pulse is chosen.
enum class PulseAreaSource {
  /// Area fixed so that kappa (1 - <cos alpha>) = 2 D, which reproduces the
  /// decay of <cos theta> of the diffusion model exactly.
  matched_to_diffusion,
  /// Area chi_R * tau as given; the walk then diffuses at kappa (1 - <cos alpha>)/2.
  rabi_times_duration,
};

enum class PulseDurations { fixed, exponential };

struct MonteCarloOptions {
  std::size_t n_trajectories = 100000;
  double t_end = 0.0;  // 0 selects 12 / (2D + gamma)
  std::size_t n_samples = 101;
  std::uint64_t seed = 1;
  PulseAreaSource area_source = PulseAreaSource::matched_to_diffusion;
  PulseDurations durations = PulseDurations::fixed;
  std::size_t histogram_bins = 50;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_final_samples = true;
};

struct MonteCarloResult {
  std::vector<double> times;
  std::vector<double> mean_population;   // <rho_ee>(t)
  std::vector<double> std_population;    // ensemble std of rho_ee(t)
  std::vector<double> stderr_mean;       // std / sqrt(N)
  std::vector<double> stderr_std;        // standard error of the std estimate
  std::vector<double> final_cos;         // cos(theta) per trajectory at t_end
  std::vector<double> histogram_edges;   // cos(theta) bin edges
  std::vector<double> histogram_density; // normalised to unit area in cos(theta)
  double pulse_area = 0.0;               // (mean) rotation angle used
  double effective_diffusion_rate = 0.0; // kappa (1 - <cos alpha>) / 2
  std::size_t n_trajectories = 0;
  std::vector<std::string> warnings;
};

/// Rotation angle (mean angle for exponential durations) for these options.
double pulse_area(const DiffusionParams& p, const MonteCarloOptions& options);

/// kappa (1 - <cos alpha>) / 2 for the chosen pulse model.
double effective_diffusion_rate(const DiffusionParams& p, const MonteCarloOptions& options);

/// Ensemble of Bloch-vector trajectories under Poisson-timed, phase-randomised
/// pulses and jump-to-ground decay. `upconversion` is only used for the
/// Omega tau_kappa > 1 check. Deterministic for a fixed seed whatever the
/// thread count.
MonteCarloResult monte_carlo_bloch(const DiffusionParams& p, double upconversion,
                                   const MonteCarloOptions& options);

struct BlochSample {
  double time;
  std::array<double, 3> bloch;  // unit vector, z = cos(theta)
};

struct BlochTrajectory {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  std::vector<BlochSample> samples;
};

/// Trajectory number `index` of the ensemble, sampled at the option's time grid.
BlochTrajectory bloch_trajectory(const DiffusionParams& p, const MonteCarloOptions& options,
                                 std::size_t index);

}  // namespace exciplex
