#include "exciplex/core_model.hpp"

#include <cmath>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"

namespace exciplex {

using namespace constants;

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

}  // namespace

GasMixture::GasMixture(double dopant_mass, double buffer_mass, double dopant_density,
                       double buffer_density, double temperature)
    : dopant_mass_(dopant_mass),
      buffer_mass_(buffer_mass),
      reduced_mass_(dopant_mass * buffer_mass / (dopant_mass + buffer_mass)),
      dopant_density_(dopant_density),
      buffer_density_(buffer_density),
      temperature_(temperature) {
  require(dopant_mass > 0 && buffer_mass > 0, "GasMixture: masses must be positive");
  require(dopant_density >= 0 && buffer_density >= 0,
          "GasMixture: densities must be non-negative");
  require(temperature > 0, "GasMixture: temperature must be positive");
}

double GasMixture::pressure() const { return ideal_gas_pressure(total_density(), temperature_); }

bool GasMixture::dopant_fraction_warning() const {
  if (buffer_density_ == 0.0) return dopant_density_ > 0.0;
  return dopant_density_ / buffer_density_ > 0.1;
}

GasMixture GasMixture::with_densities(double dopant_density, double buffer_density) const {
  return {dopant_mass_, buffer_mass_, dopant_density, buffer_density, temperature_};
}

GasMixture GasMixture::with_temperature(double temperature) const {
  return {dopant_mass_, buffer_mass_, dopant_density_, buffer_density_, temperature};
}

FibreGeometry::FibreGeometry(double inner_radius, double outer_radius, double length,
                             double wall_conductivity, double gas_conductivity)
    : inner_radius_(inner_radius),
      outer_radius_(outer_radius),
      length_(length),
      wall_conductivity_(wall_conductivity),
      gas_conductivity_(gas_conductivity) {
  require(inner_radius > 0 && inner_radius < outer_radius,
          "FibreGeometry: need 0 < r < r_e");
  require(length > 0, "FibreGeometry: length must be positive");
  require(wall_conductivity > 0 && gas_conductivity > 0,
          "FibreGeometry: conductivities must be positive");
}

double FibreGeometry::core_area() const { return pi * inner_radius_ * inner_radius_; }

FibreGeometry FibreGeometry::with_length(double length) const {
  return {inner_radius_, outer_radius_, length, wall_conductivity_, gas_conductivity_};
}

FibreGeometry FibreGeometry::with_radii(double inner_radius, double outer_radius) const {
  return {inner_radius, outer_radius, length_, wall_conductivity_, gas_conductivity_};
}

MorsePotential::MorsePotential(double depth, double width, double r_eq, double offset)
    : depth_(depth), width_(width), r_eq_(r_eq), offset_(offset) {
  require(depth >= 0, "MorsePotential: depth must be non-negative");
  require(width > 0, "MorsePotential: width parameter must be positive");
  require(r_eq > 0, "MorsePotential: equilibrium distance must be positive");
}

MorsePotential MorsePotential::with_asymptote(double depth, double width, double r_eq,
                                              double asymptote) {
  return {depth, width, r_eq, asymptote - depth};
}

double MorsePotential::operator()(double r) const {
  const double s = 1.0 - std::exp(-width_ * (r - r_eq_));
  return offset_ + depth_ * s * s;
}

double MorsePotential::derivative(double r) const {
  const double e = std::exp(-width_ * (r - r_eq_));
  return 2.0 * depth_ * width_ * (1.0 - e) * e;
}

double MorsePotential::harmonic_frequency(double mu) const {
  return width_ * std::sqrt(2.0 * hbar * depth_ / mu);
}

ExciplexSpec::ExciplexSpec(MorsePotential ground, MorsePotential excited,
                           double bare_transition, double linewidth, double dipole,
                           double upconversion, double franck_condon_factor)
    : ground_(ground),
      excited_(excited),
      bare_transition_(bare_transition),
      linewidth_(linewidth),
      dipole_(dipole),
      franck_condon_factor_(franck_condon_factor),
      upconversion_(upconversion) {
  require(bare_transition > 0 && linewidth > 0 && dipole > 0,
          "ExciplexSpec: transition frequency, linewidth and dipole must be positive");
  require(franck_condon_factor > 0 && franck_condon_factor <= 1,
          "ExciplexSpec: Franck-Condon factor must lie in (0, 1]");
  require(upconversion >= 0 && upconversion < bare_transition,
          "ExciplexSpec: up-conversion shift must lie in [0, omega_0)");
  require(upconversion <= excited.depth() * (1.0 + 1e-12),
          "ExciplexSpec: up-conversion shift exceeds the excited-state well depth");
}

ExciplexSpec ExciplexSpec::with_franck_condon_factor(double f) const {
  return {ground_, excited_, bare_transition_, linewidth_, dipole_, upconversion_, f};
}

ExciplexSpec ExciplexSpec::with_upconversion(double omega) const {
  return {ground_, excited_, bare_transition_, linewidth_, dipole_, omega,
          franck_condon_factor_};
}

DriveSpec::DriveSpec(double input_power, double cooling_cross_section,
                     double pulse_duration, double laser_bandwidth)
    : input_power_(input_power),
      cooling_cross_section_(cooling_cross_section),
      pulse_duration_(pulse_duration),
      laser_bandwidth_(laser_bandwidth) {
  require(input_power > 0, "DriveSpec: input power must be positive");
  require(cooling_cross_section >= 0, "DriveSpec: cross section must be non-negative");
  require(pulse_duration > 0, "DriveSpec: pulse duration must be positive");
  require(laser_bandwidth >= 0, "DriveSpec: bandwidth must be non-negative");
}

double DriveSpec::field_amplitude(const FibreGeometry& fibre) const {
  return std::sqrt(input_power_ / (vacuum_permittivity * fibre.core_area() * speed_of_light));
}

DriveSpec DriveSpec::with_input_power(double p) const {
  return {p, cooling_cross_section_, pulse_duration_, laser_bandwidth_};
}

DriveSpec DriveSpec::with_cooling_cross_section(double sigma) const {
  return {input_power_, sigma, pulse_duration_, laser_bandwidth_};
}

DriveSpec DriveSpec::with_pulse_duration(double tau) const {
  return {input_power_, cooling_cross_section_, tau, laser_bandwidth_};
}

double number_density(double pressure, double temperature) {
  require(temperature > 0, "number_density: temperature must be positive");
  require(pressure >= 0, "number_density: pressure must be non-negative");
  return pressure / (boltzmann * temperature);
}

double ideal_gas_pressure(double density, double temperature) {
  require(temperature > 0, "ideal_gas_pressure: temperature must be positive");
  return density * boltzmann * temperature;
}

double mean_thermal_speed(double temperature, double reduced_mass) {
  require(reduced_mass > 0, "mean_thermal_speed: reduced mass must be positive");
  require(temperature >= 0, "mean_thermal_speed: temperature must be non-negative");
  return std::sqrt(3.0 * boltzmann * temperature / reduced_mass);
}

CollisionRate collision_rate(const GasMixture& mix, const DriveSpec& drive) {
  const double v = mean_thermal_speed(mix.temperature(), mix.reduced_mass());
  return {mix.buffer_density() * drive.cooling_cross_section() * v};
}

double morse_eval(const MorsePotential& pot, double r) {
  require(r > 0, "morse_eval: r must be positive");
  return pot(r);
}

double rabi_frequency(const ExciplexSpec& exciplex, const FibreGeometry& fibre,
                      double power) {
  require(power >= 0, "rabi_frequency: power must be non-negative");
  const double field =
      std::sqrt(power / (vacuum_permittivity * fibre.core_area() * speed_of_light));
  return exciplex.effective_dipole() * field / hbar;
}

Preset rb_ar_preset() {
  constexpr double mu = 4.5112e-26;
  constexpr double m_rb = 84.911789738 * atomic_mass_unit;
  // buffer mass chosen so that the reduced mass is exactly the tabulated 4.5112e-26 kg
  const double m_ar = mu * m_rb / (m_rb - mu);

  const double temperature = 300.0;
  const double n_rb = number_density(1.0 * millibar, temperature);
  const double n_ar = number_density(10.0 * bar, temperature);

  const double omega0 = angular(377e12);
  const double upconversion = angular(6.7154e12);

  const double ground_depth = angular(1.47e12);
  const double ground_r_eq = 5.0 * angstrom;
  const double excited_r_eq = 3.731 * angstrom;
  const double mean_energy = 1.5 * boltzmann * temperature / hbar;
  const double ground_width =
      std::log(1.0 + std::sqrt(1.0 + mean_energy / ground_depth)) / (ground_r_eq - excited_r_eq);

  MorsePotential ground = MorsePotential::with_asymptote(ground_depth, ground_width,
                                                         ground_r_eq, 0.0);
  MorsePotential excited = MorsePotential::with_asymptote(
      angular(6.72e12), 1.2 / angstrom, excited_r_eq, omega0);

  return Preset{
      "Rb-Ar",
      GasMixture(m_rb, m_ar, n_rb, n_ar, temperature),
      FibreGeometry(20.0 * micrometre, 70.0 * micrometre, 0.01, 0.8, 0.03),
      ExciplexSpec(ground, excited, omega0, angular(5.75e6), 2.537e-29, upconversion, 0.8),
      DriveSpec(1.0, 20.0 * angstrom2, 1.0 * picosecond),
  };
}

bool has_preset(const std::string& name) { return name == "Rb-Ar" || name == "rb-ar"; }

Preset preset_by_name(const std::string& name) {
  if (!has_preset(name)) throw ConfigError("unknown species preset '" + name + "'");
  return rb_ar_preset();
}

}  // namespace exciplex
