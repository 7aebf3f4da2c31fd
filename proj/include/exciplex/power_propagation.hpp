#pragma once

#include <string>
#include <vector>

#include "exciplex/core_model.hpp"

namespace exciplex {

/// dP/dz = -A BP / (1 + BP) with BP = 2 D / gamma the local saturation parameter.
struct PropagationCoefficients {
  double A = 0.0;     // W/m
  double B = 0.0;     // 1/W
  double P_in = 0.0;  // W

  double saturation() const { return B * P_in; }
};

enum class Regime { exponential, intermediate, linear };

/// exponential if x < 0.1, linear if x > 10, intermediate otherwise.
Regime classify_regime(double saturation);
std::string to_string(Regime regime);

PropagationCoefficients coefficients(const GasMixture& mix, const FibreGeometry& fibre,
                                     const ExciplexSpec& exciplex, const DriveSpec& drive);

/// z(P) = (P_in - P)/A - ln(P/P_in)/(B A). Infinite when A or B vanish and P < P_in.
double position_of_power(double power, const PropagationCoefficients& c);

/// Inverse of position_of_power. `tol` is relative to max(1 m, z).
/// Powers are clamped from below at 1e-300 P_in.
double power_at(double z, const PropagationCoefficients& c, double tol = 1e-12);

/// -A BP_in / (BP_in + 1).
double initial_slope(const PropagationCoefficients& c);

/// 2 P_in / (hbar omega_L gamma pi r^2 n_M) = P_in / A; infinite for n_M = 0.
/// Meaningful in the linear regime only (check c.saturation() > 1).
double penetration_depth(const PropagationCoefficients& c);

/// Limiting laws used to classify a profile.
double beer_lambert(double z, const PropagationCoefficients& c);
double linear_law(double z, const PropagationCoefficients& c);
/// Large-z fall-off P_in exp(B (P_in - A z)).
double exponential_tail(double z, const PropagationCoefficients& c);

/// D at local power P, from BP = 2D/gamma.
double local_diffusion_rate(double power, const PropagationCoefficients& c, double gamma);

struct PowerProfile {
  std::vector<double> z;
  std::vector<double> power;
  std::vector<Regime> regime;  // classification of the local B P(z)
  PropagationCoefficients coeffs;
  double tolerance = 0.0;
  std::string method;
};

/// P(z) on n uniformly spaced points in [0, z_max].
PowerProfile power_profile(const PropagationCoefficients& c, double z_max, std::size_t n,
                           double tol = 1e-12);

}  // namespace exciplex
