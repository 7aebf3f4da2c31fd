#pragma once

#include "exciplex/core_model.hpp"
#include "exciplex/power_propagation.hpp"

namespace exciplex {

// ---------------------------------------------------------------------------
// Powers and rates. Negative cooling power means net extraction from the gas.
// ---------------------------------------------------------------------------

/// P_cool = (Omega / omega_L) (P_out - P_in).
double cooling_power(double p_in, double p_out, double upconversion, double laser_frequency);

/// beta = (hbar Omega / k_B T) n_M / (n_M + n_X) gamma, valid for a saturated fibre.
double cooling_rate_linear(const GasMixture& mix, const ExciplexSpec& exciplex);

/// B P_in times the linear-regime rate.
double cooling_rate_exponential(const GasMixture& mix, const ExciplexSpec& exciplex,
                                const PropagationCoefficients& c);

/// beta = -P_cool / E_kin for a given cooling power and kinetic energy.
double cooling_rate(double cooling_power, double kinetic_energy);

/// E_kin = (3/2) (n_X + n_M) pi r^2 l k_B T.
double kinetic_energy(const GasMixture& mix, const FibreGeometry& fibre, double length);

/// Heat conducted in through the glass: 2 pi k_g (T_e - T) l / ln(r_e / r).
double heating_power(double temperature, const FibreGeometry& fibre, double ambient,
                     double length);

/// beta_heat = 4 k_g (T_e - T) / (3 k_B T (n_X + n_M) r^2 ln(r_e / r)).
double heating_rate(const GasMixture& mix, const FibreGeometry& fibre, double temperature,
                    double ambient);

/// delta T_max = gamma n_M hbar Omega r^2 ln(r_e / r) / (4 k_g).
double max_temperature_drop(const GasMixture& mix, const FibreGeometry& fibre,
                            const ExciplexSpec& exciplex);

/// T_e - T(r) when the cooling power is spread evenly over the fibre length:
/// -P_cool ln(r_e / r) / (2 pi k_g l). Equals max_temperature_drop for a saturated fibre.
double interface_drop(double cooling_power, const FibreGeometry& fibre);

/// q_vol = -hbar Omega gamma n_M / 2 in W/m^3 (negative: heat sink).
double volumetric_cooling(const GasMixture& mix, const ExciplexSpec& exciplex);

// ---------------------------------------------------------------------------
// Analytic radial profile of a single fibre with a uniform source in the core
// ---------------------------------------------------------------------------

class RadialProfile {
 public:
  RadialProfile(const FibreGeometry& fibre, double q_vol, double ambient);

  /// Piecewise solution: parabolic in the gas (k_a), logarithmic in the glass (k_g).
  double temperature(double rho) const;
  /// Glass-branch formula evaluated at any rho in (0, r_e], used for matching checks.
  double glass_branch(double rho) const;
  /// Gas-branch formula evaluated at any rho in [0, r_e].
  double gas_branch(double rho) const;
  /// Radial heat current 2 pi rho l k dT/drho through the cylinder at rho, per branch.
  double gas_heat_current(double rho) const;
  double glass_heat_current(double rho) const;

  /// T_e - T(r): drop at the inner wall.
  double wall_drop() const;
  /// T_e - T(0).
  double centre_drop() const;

  const FibreGeometry& fibre() const { return fibre_; }
  double q_vol() const { return q_; }
  double ambient() const { return ambient_; }

 private:
  FibreGeometry fibre_;
  double q_;
  double ambient_;
};

/// T(rho) of the single-fibre profile; rho > r_e is a domain error.
double radial_profile_single(double rho, const RadialProfile& profile);

}  // namespace exciplex
