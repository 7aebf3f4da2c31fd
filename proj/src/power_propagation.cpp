#include "exciplex/power_propagation.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "exciplex/constants.hpp"
#include "exciplex/errors.hpp"

namespace exciplex {

using namespace constants;

namespace {
constexpr double kPowerFloor = 1e-300;
}

Regime classify_regime(double saturation) {
  if (saturation < 0.1) return Regime::exponential;
  if (saturation > 10.0) return Regime::linear;
  return Regime::intermediate;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::exponential: return "exponential";
    case Regime::intermediate: return "intermediate";
    case Regime::linear: return "linear";
  }
  return "unknown";
}

PropagationCoefficients coefficients(const GasMixture& mix, const FibreGeometry& fibre,
                                     const ExciplexSpec& exciplex, const DriveSpec& drive) {
  const double r = fibre.inner_radius();
  const double gamma = exciplex.linewidth();
  const double d = exciplex.effective_dipole();

  PropagationCoefficients c;
  c.P_in = drive.input_power();
  c.A = 0.5 * hbar * exciplex.laser_frequency() * gamma * pi * r * r * mix.dopant_density();
  const double prefactor = 2.0 * d * d * drive.cooling_cross_section() * std::sqrt(3.0 * boltzmann) /
                           (hbar * hbar * pi * pi * vacuum_permittivity *
                            std::sqrt(mix.reduced_mass()) * gamma * speed_of_light);
  const double tau = drive.pulse_duration();
  c.B = prefactor * std::sqrt(mix.temperature()) * mix.buffer_density() * tau * tau / (r * r);
  return c;
}

double position_of_power(double power, const PropagationCoefficients& c) {
  if (power <= 0) throw DomainError("position_of_power: P must be positive");
  if (power > c.P_in * (1.0 + 1e-15)) throw DomainError("position_of_power: P exceeds P_in");
  if (power >= c.P_in) return 0.0;
  if (c.A <= 0 || c.B <= 0) return std::numeric_limits<double>::infinity();
  return (c.P_in - power) / c.A - std::log(power / c.P_in) / (c.B * c.A);
}

double power_at(double z, const PropagationCoefficients& c, double tol) {
  if (z < 0) throw DomainError("power_at: z must be non-negative");
  if (z == 0 || c.A <= 0 || c.B <= 0) return c.P_in;

  // z(u) with u = ln(P/P_in) is smooth, concave and decreasing on (-inf, 0]
  const auto residual = [&](double u) {
    return c.P_in * (-std::expm1(u)) / c.A - u / (c.B * c.A) - z;
  };
  const double u_min = std::log(kPowerFloor);
  const double f_min = residual(u_min);
  if (f_min <= 0) return kPowerFloor * c.P_in;

  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      residual, u_min, 0.0, f_min, -z, boost::math::tools::eps_tolerance<double>(52), max_iter);
  double u = 0.5 * (bracket.first + bracket.second);

  const double scale = std::max(1.0, z);
  if (std::abs(residual(u)) > tol * scale) {
    // polish with Newton steps; dz/du = -(P_in e^u / A + 1 / (B A))
    for (int i = 0; i < 4; ++i) {
      const double slope = -(c.P_in * std::exp(u) / c.A + 1.0 / (c.B * c.A));
      u -= residual(u) / slope;
    }
  }
  const double err = std::abs(residual(u));
  if (err > tol * scale)
    throw NumericalError("power_propagation",
                         "root finder stalled at z = " + std::to_string(z) +
                             " m, residual " + std::to_string(err) + " m after " +
                             std::to_string(max_iter) + " iterations");
  return c.P_in * std::exp(u);
}

double initial_slope(const PropagationCoefficients& c) {
  const double x = c.saturation();
  return -c.A * x / (x + 1.0);
}

double penetration_depth(const PropagationCoefficients& c) {
  if (c.A <= 0) return std::numeric_limits<double>::infinity();
  return c.P_in / c.A;
}

double beer_lambert(double z, const PropagationCoefficients& c) {
  return c.P_in * std::exp(-c.A * c.B * z);
}

double linear_law(double z, const PropagationCoefficients& c) { return c.P_in - c.A * z; }

double exponential_tail(double z, const PropagationCoefficients& c) {
  return c.P_in * std::exp(c.B * (c.P_in - c.A * z));
}

double local_diffusion_rate(double power, const PropagationCoefficients& c, double gamma) {
  return 0.5 * gamma * c.B * power;
}

PowerProfile power_profile(const PropagationCoefficients& c, double z_max, std::size_t n,
                           double tol) {
  if (n < 2) throw DomainError("power_profile: need at least two points");
  if (z_max <= 0) throw DomainError("power_profile: z_max must be positive");
  PowerProfile out;
  out.coeffs = c;
  out.tolerance = tol;
  out.method = "toms748 on ln(P/P_in)";
  out.z.resize(n);
  out.power.resize(n);
  out.regime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = z_max * static_cast<double>(i) / static_cast<double>(n - 1);
    out.z[i] = z;
    out.power[i] = power_at(z, c, tol);
    out.regime[i] = classify_regime(c.B * out.power[i]);
  }
  return out;
}

}  // namespace exciplex
