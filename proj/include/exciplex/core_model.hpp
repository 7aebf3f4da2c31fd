#pragma once

#include <string>

namespace exciplex {

// ---------------------------------------------------------------------------
// Gas, fibre and exciplex parameters. All quantities SI; every frequency is an
// angular frequency in rad/s.
// ---------------------------------------------------------------------------

/// Dopant (M) / buffer (X) mixture at a common temperature.
class GasMixture {
 public:
  GasMixture(double dopant_mass, double buffer_mass, double dopant_density,
             double buffer_density, double temperature);

  double dopant_mass() const { return dopant_mass_; }
  double buffer_mass() const { return buffer_mass_; }
  double reduced_mass() const { return reduced_mass_; }
  double dopant_density() const { return dopant_density_; }
  double buffer_density() const { return buffer_density_; }
  double total_density() const { return dopant_density_ + buffer_density_; }
  double temperature() const { return temperature_; }

  /// Ideal-gas pressure (n_M + n_X) k_B T.
  double pressure() const;

  /// True when n_M/n_X exceeds 0.1, i.e. M-M collisions can no longer be ignored.
  bool dopant_fraction_warning() const;

  GasMixture with_densities(double dopant_density, double buffer_density) const;
  GasMixture with_temperature(double temperature) const;

 private:
  double dopant_mass_;
  double buffer_mass_;
  double reduced_mass_;
  double dopant_density_;
  double buffer_density_;
  double temperature_;
};

/// Hollow-core fibre: gas-filled core of radius r inside a glass wall out to r_e.
class FibreGeometry {
 public:
  FibreGeometry(double inner_radius, double outer_radius, double length,
                double wall_conductivity, double gas_conductivity);

  double inner_radius() const { return inner_radius_; }
  double outer_radius() const { return outer_radius_; }
  double length() const { return length_; }
  double wall_conductivity() const { return wall_conductivity_; }
  double gas_conductivity() const { return gas_conductivity_; }
  double core_area() const;

  FibreGeometry with_length(double length) const;
  FibreGeometry with_radii(double inner_radius, double outer_radius) const;

 private:
  double inner_radius_;
  double outer_radius_;
  double length_;
  double wall_conductivity_;
  double gas_conductivity_;
};

/// U(r) = offset + D_e [1 - exp(-a (r - r_eq))]^2, in rad/s.
/// `offset` is the value at the minimum; the dissociation limit is offset + D_e.
class MorsePotential {
 public:
  MorsePotential(double depth, double width, double r_eq, double offset);
  static MorsePotential with_asymptote(double depth, double width, double r_eq,
                                       double asymptote);

  double depth() const { return depth_; }
  double width() const { return width_; }
  double r_eq() const { return r_eq_; }
  double offset() const { return offset_; }
  double asymptote() const { return offset_ + depth_; }

  double operator()(double r) const;
  double derivative(double r) const;

  /// Harmonic frequency a sqrt(2 hbar D_e / mu) of the well for reduced mass mu.
  double harmonic_frequency(double mu) const;

 private:
  double depth_;
  double width_;
  double r_eq_;
  double offset_;
};

/// Two Morse channels plus the optical transition that links them.
/// The up-conversion shift Omega is stored; the laser sits at omega_0 - Omega.
class ExciplexSpec {
 public:
  ExciplexSpec(MorsePotential ground, MorsePotential excited, double bare_transition,
               double linewidth, double dipole, double upconversion,
               double franck_condon_factor = 0.8);

  const MorsePotential& ground() const { return ground_; }
  const MorsePotential& excited() const { return excited_; }
  double bare_transition() const { return bare_transition_; }
  double linewidth() const { return linewidth_; }
  double dipole() const { return dipole_; }
  double franck_condon_factor() const { return franck_condon_factor_; }
  double effective_dipole() const { return franck_condon_factor_ * dipole_; }
  double upconversion() const { return upconversion_; }
  double laser_frequency() const { return bare_transition_ - upconversion_; }
  double spontaneous_lifetime() const { return 1.0 / linewidth_; }

  ExciplexSpec with_franck_condon_factor(double f) const;
  ExciplexSpec with_upconversion(double omega) const;

 private:
  MorsePotential ground_;
  MorsePotential excited_;
  double bare_transition_;
  double linewidth_;
  double dipole_;
  double franck_condon_factor_;
  double upconversion_;
};

/// Laser drive and collision parameters shared by the rate model.
class DriveSpec {
 public:
  DriveSpec(double input_power, double cooling_cross_section, double pulse_duration,
            double laser_bandwidth = 0.0);

  double input_power() const { return input_power_; }
  double cooling_cross_section() const { return cooling_cross_section_; }
  double pulse_duration() const { return pulse_duration_; }
  /// Stored for bookkeeping; the transmission-window condition has no quantitative role.
  double laser_bandwidth() const { return laser_bandwidth_; }

  /// E_in with E_in^2 = P_in / (eps0 pi r^2 c) for a flat-top mode filling the core.
  double field_amplitude(const FibreGeometry& fibre) const;

  DriveSpec with_input_power(double p) const;
  DriveSpec with_cooling_cross_section(double sigma) const;
  DriveSpec with_pulse_duration(double tau) const;

 private:
  double input_power_;
  double cooling_cross_section_;
  double pulse_duration_;
  double laser_bandwidth_;
};

// ---------------------------------------------------------------------------
// Elementary derived quantities
// ---------------------------------------------------------------------------

/// n = p / (k_B T).
double number_density(double pressure, double temperature);

/// p = n k_B T.
double ideal_gas_pressure(double density, double temperature);

/// v = sqrt(3 k_B T / mu).
double mean_thermal_speed(double temperature, double reduced_mass);

struct CollisionRate {
  double rate;  // kappa, 1/s
  double mean_interval() const { return 1.0 / rate; }
};

/// kappa = n_X sigma_cool v with v the mean thermal speed.
CollisionRate collision_rate(const GasMixture& mix, const DriveSpec& drive);

/// Morse energy with the r > 0 domain check.
double morse_eval(const MorsePotential& pot, double r);

/// |chi_R| = d_eff E / hbar for a local guided power `power` filling the core.
double rabi_frequency(const ExciplexSpec& exciplex, const FibreGeometry& fibre,
                      double power);

// ---------------------------------------------------------------------------
// Rb-Ar preset
// ---------------------------------------------------------------------------

struct Preset {
  std::string name;
  GasMixture mixture;
  FibreGeometry fibre;
  ExciplexSpec exciplex;
  DriveSpec drive;
};

/// Rb-Ar in a 20 um / 70 um silica fibre, 1 mbar Rb, 10 bar Ar, 300 K, 1 W.
///
/// Ground-state Morse parameters are an approximation: depth 2pi x 1.47 THz at
/// 5.0 A, with the width fixed so the 300 K mean-energy turning point lies at
/// the excited-state equilibrium distance 3.731 A. The excited width
/// (1.2 / A) is likewise approximate; only its depth and equilibrium are
/// taken as given.
Preset rb_ar_preset();

/// Names accepted by `preset_by_name`.
bool has_preset(const std::string& name);
Preset preset_by_name(const std::string& name);

}  // namespace exciplex
