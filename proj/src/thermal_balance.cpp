#include "exciplex/thermal_balance.hpp"

#include <cmath>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"

namespace exciplex {

using namespace constants;

double cooling_power(double p_in, double p_out, double upconversion, double laser_frequency) {
  if (p_out < 0 || p_out > p_in) throw DomainError("cooling_power: need 0 <= P_out <= P_in");
  if (laser_frequency <= 0) throw DomainError("cooling_power: laser frequency must be positive");
  return upconversion / laser_frequency * (p_out - p_in);
}

double cooling_rate_linear(const GasMixture& mix, const ExciplexSpec& exciplex) {
  const double energy_ratio =
      hbar * exciplex.upconversion() / (boltzmann * mix.temperature());
  return energy_ratio * mix.dopant_density() / mix.total_density() * exciplex.linewidth();
}

double cooling_rate_exponential(const GasMixture& mix, const ExciplexSpec& exciplex,
                                const PropagationCoefficients& c) {
  return c.saturation() * cooling_rate_linear(mix, exciplex);
}

double cooling_rate(double cooling_power, double kinetic_energy) {
  if (kinetic_energy <= 0) throw DomainError("cooling_rate: kinetic energy must be positive");
  return -cooling_power / kinetic_energy;
}

double kinetic_energy(const GasMixture& mix, const FibreGeometry& fibre, double length) {
  return 1.5 * mix.total_density() * fibre.core_area() * length * boltzmann * mix.temperature();
}

namespace {

double log_ratio(const FibreGeometry& fibre) {
  return std::log(fibre.outer_radius() / fibre.inner_radius());
}

}  // namespace

double heating_power(double temperature, const FibreGeometry& fibre, double ambient,
                     double length) {
  return two_pi * fibre.wall_conductivity() * (ambient - temperature) / log_ratio(fibre) * length;
}

double heating_rate(const GasMixture& mix, const FibreGeometry& fibre, double temperature,
                    double ambient) {
  if (temperature <= 0) throw DomainError("heating_rate: temperature must be positive");
  const double r = fibre.inner_radius();
  return 4.0 * fibre.wall_conductivity() / (3.0 * boltzmann * temperature * mix.total_density()) *
         (ambient - temperature) / (r * r * log_ratio(fibre));
}

double max_temperature_drop(const GasMixture& mix, const FibreGeometry& fibre,
                            const ExciplexSpec& exciplex) {
  const double r = fibre.inner_radius();
  return exciplex.linewidth() * mix.dopant_density() * hbar * exciplex.upconversion() /
         (4.0 * fibre.wall_conductivity()) * r * r * log_ratio(fibre);
}

double interface_drop(double cooling_power, const FibreGeometry& fibre) {
  return -cooling_power * log_ratio(fibre) / (2.0 * pi * fibre.wall_conductivity() * fibre.length());
}

double volumetric_cooling(const GasMixture& mix, const ExciplexSpec& exciplex) {
  return -0.5 * hbar * exciplex.upconversion() * exciplex.linewidth() * mix.dopant_density();
}

RadialProfile::RadialProfile(const FibreGeometry& fibre, double q_vol, double ambient)
    : fibre_(fibre), q_(q_vol), ambient_(ambient) {
  if (ambient <= 0) throw DomainError("RadialProfile: ambient temperature must be positive");
}

double RadialProfile::glass_branch(double rho) const {
  const double r = fibre_.inner_radius();
  return ambient_ + q_ * r * r / (2.0 * fibre_.wall_conductivity()) *
                        std::log(fibre_.outer_radius() / rho);
}

double RadialProfile::gas_branch(double rho) const {
  const double r = fibre_.inner_radius();
  return glass_branch(r) - q_ * (rho * rho - r * r) / (4.0 * fibre_.gas_conductivity());
}

double RadialProfile::temperature(double rho) const {
  if (rho < 0 || rho > fibre_.outer_radius())
    throw DomainError("radial_profile_single: rho must lie in [0, r_e]");
  return rho <= fibre_.inner_radius() ? gas_branch(rho) : glass_branch(rho);
}

double RadialProfile::gas_heat_current(double rho) const {
  // k_a dT/drho = -q rho / 2
  return two_pi * rho * fibre_.length() * (-q_ * rho / 2.0);
}

double RadialProfile::glass_heat_current(double rho) const {
  const double r = fibre_.inner_radius();
  // k_g dT/drho = -q r^2 / (2 rho)
  return two_pi * rho * fibre_.length() * (-q_ * r * r / (2.0 * rho));
}

double RadialProfile::wall_drop() const { return ambient_ - glass_branch(fibre_.inner_radius()); }

double RadialProfile::centre_drop() const { return ambient_ - gas_branch(0.0); }

double radial_profile_single(double rho, const RadialProfile& profile) {
  return profile.temperature(rho);
}

}  // namespace exciplex
