#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "exciplex/core_model.hpp"

namespace exciplex {

/// Uniform radial grid with hard walls at r_min and r_max. The wavefunction
/// lives on the n_intervals - 1 interior nodes r_i = r_min + i dr, i = 1..n-1.
struct SpatialGrid {
  double r_min = 1e-10;
  double r_max = 200e-10;
  std::size_t n_intervals = 4096;

  double dr() const { return (r_max - r_min) / static_cast<double>(n_intervals); }
  std::size_t size() const { return n_intervals - 1; }
  double r(std::size_t i) const { return r_min + static_cast<double>(i + 1) * dr(); }
  void validate() const;
};

using PotentialCurve = std::function<double(double)>;  // rad/s

struct PacketSpec {
  double width = 0.0;     // Gamma, 1/m
  double centre = 0.0;    // r_0, m
  double wavenumber = 0.0;  // k_0, 1/m (incoming)
};

enum class OuterBoundary { reflective, absorbing };

struct CollisionConfig {
  PotentialCurve ground;   // U_g(r)
  PotentialCurve excited;  // U_e(r), lab frame
  double laser_frequency = 0.0;  // omega_L; the excited channel sees U_e - omega_L
  double reduced_mass = 0.0;
  double rabi = 0.0;  // bare chi_R; the coupling element is chi_R / 2
  SpatialGrid grid;
  PacketSpec packet;
  double dt = 0.1e-15;
  double duration = 0.0;
  std::size_t sample_every = 10;     // steps between observable samples
  std::size_t snapshot_every = 0;    // steps between density snapshots (0: none)
  std::size_t snapshot_stride = 8;   // grid decimation of snapshots
  OuterBoundary outer = OuterBoundary::reflective;
  double absorber_width = 20e-10;    // m, for OuterBoundary::absorbing
  double absorber_strength = 5e13;   // rad/s at r_max
  /// Scale for the asymptotic-region check on r_0 (the excited well depth by default).
  double flatness_scale = 0.0;

  /// Energy of the packet centre, hbar k0^2 / (2 mu) in rad/s.
  double mean_kinetic_energy() const;
};

/// Rb-Ar collision at temperature T: k0 from hbar^2 k0^2 / 2 mu = (3/2) k_B T,
/// momentum spread 2 % of k0, r0 = 20 A, detuning 2 pi x 5.2 THz, bare
/// chi_R = 2 pi x 5 GHz, dt = 0.1 fs, duration long enough for the packet to
/// return to r0 plus 3 ps.
CollisionConfig rb_ar_collision(const Preset& preset, double temperature = 300.0);

/// k0 = sqrt(3 mu k_B T) / hbar.
double thermal_wavenumber(double reduced_mass, double temperature);

struct TwoChannelWavefunction {
  SpatialGrid grid;
  std::vector<std::complex<double>> ground;
  std::vector<std::complex<double>> excited;
  double time = 0.0;

  double ground_population() const;
  double excited_population() const;
  double norm() const { return ground_population() + excited_population(); }
};

/// xi_g = sqrt(Gamma / sqrt(pi)) exp(-Gamma^2 (r - r0)^2 / 2) exp(-i k0 (r - r0)), xi_e = 0,
/// normalised on the grid. Throws ConfigError if r0 is not in the flat region
/// or the packet reaches a grid edge.
TwoChannelWavefunction gaussian_packet(const CollisionConfig& config);

/// <r> per channel, or nothing for a channel with norm below 1e-12.
std::pair<std::optional<double>, std::optional<double>> expectation_separation(
    const TwoChannelWavefunction& state);

/// <p> / hbar of the ground channel, 1/m.
double mean_wavenumber(const TwoChannelWavefunction& state);

/// Channel-normalised position variance of the ground channel, m^2.
double ground_width_squared(const TwoChannelWavefunction& state);

struct WavepacketSample {
  double time = 0.0;
  double mean_r_ground = 0.0;
  double mean_r_excited = 0.0;  // NaN while the channel is empty
  double ground_population = 0.0;
  double excited_population = 0.0;
  double norm = 0.0;
  double energy = 0.0;  // <H> in rad/s
  double width_ground = 0.0;  // sqrt of the channel-normalised variance, m
};

struct WavepacketSnapshot {
  double time = 0.0;
  std::vector<double> ground_density;
  std::vector<double> excited_density;
};

struct WavepacketRun {
  std::vector<WavepacketSample> samples;
  std::vector<double> snapshot_r;
  std::vector<WavepacketSnapshot> snapshots;
  TwoChannelWavefunction final_state;
  double norm_drift = 0.0;    // max |norm - norm(0)|
  double energy_drift = 0.0;  // max |E - E(0)| / |E(0)|
  double detuning = 0.0;      // asymptotic U_e - omega_L - U_g, rad/s
};

/// Strang splitting: half potential step (exact 2x2 exponential per node),
/// kinetic step diagonal in the sine basis, half potential step. Throws
/// NumericalError if the norm drifts by more than 1e-6 on a reflective grid.
/// `n_steps` = 0 runs for config.duration.
WavepacketRun evolve(const TwoChannelWavefunction& state, const CollisionConfig& config,
                     std::size_t n_steps = 0);

/// Time series (t, P_e).
std::vector<std::pair<double, double>> excited_population_trace(const WavepacketRun& run);

/// Mean of P_e over the last `fraction` of the run, with its standard deviation.
struct Plateau {
  double value = 0.0;
  double spread = 0.0;
};
Plateau excited_plateau(const WavepacketRun& run, double fraction = 0.2);

struct AbsorptionWindow {
  double duration = 0.0;  // total time with the smoothed rate above threshold, s
  double start = 0.0;     // first up-crossing
  double end = 0.0;       // last down-crossing
  double peak_rate = 0.0; // 1/s
};

/// Time during which dP_e/dt, smoothed over one period 2 pi / |detuning| of the
/// off-resonant ripple, exceeds `threshold_fraction` of its peak.
std::optional<AbsorptionWindow> absorption_time(const WavepacketRun& run,
                                                double threshold_fraction = 0.1);

struct FranckCondonEstimate {
  double factor = 0.0;
  double uncertainty = 0.0;
  double quantum_population = 0.0;
  double semiclassical_population = 0.0;
};

/// sqrt(P_e plateau / P_e of a Condon-approximation reference): classical
/// trajectories on U_g carrying an internal two-level system, averaged over
/// the packet momentum distribution. Refuses P_e > 1e-2 (DomainError).
FranckCondonEstimate franck_condon_reduction(const WavepacketRun& run,
                                             const CollisionConfig& config,
                                             int momentum_nodes = 16);

/// p = exp(-pi chi^2 / (2 slope v)); requires slope * v > 0.
double landau_zener_parameter(double rabi, double slope, double velocity);

/// Lowest `count` eigenvalues of the sine-basis Hamiltonian for one Morse
/// channel on [r_min, r_max], measured from the well minimum (rad/s).
std::vector<double> morse_levels_numeric(const MorsePotential& pot, double reduced_mass,
                                         const SpatialGrid& grid, int count);

/// E_n = w_e (n + 1/2) - (w_e (n + 1/2))^2 / (4 D_e), above the minimum.
std::vector<double> morse_levels_analytic(const MorsePotential& pot, double reduced_mass,
                                          int count);

}  // namespace exciplex
