#pragma once

#include <vector>

#include "exciplex/core_model.hpp"

namespace exciplex {

/// Central potential for partial-wave scattering, in rad/s and measured from
/// its value at infinity.
class ScatteringPotential {
 public:
  enum class Kind { zero, hard_sphere, square_well, morse };

  static ScatteringPotential zero();
  static ScatteringPotential hard_sphere(double radius);
  /// U = -depth for r < radius, 0 outside.
  static ScatteringPotential square_well(double depth, double radius);
  /// Morse curve shifted so that U(inf) = 0. An optional hard core truncates the
  /// repulsive wall at `core_radius`.
  static ScatteringPotential morse(const MorsePotential& pot, double core_radius = 0.0);

  Kind kind() const { return kind_; }
  double operator()(double r) const;
  /// Hard-wall radius where u = 0 (0 for none).
  double core_radius() const { return core_; }
  /// Radius beyond which the potential is negligible (exactly zero for the
  /// piecewise potentials, below e^-30 of the depth for Morse).
  double range() const;
  /// Radius of a jump in U, or 0.
  double discontinuity() const { return kind_ == Kind::square_well ? radius_ : 0.0; }
  /// Mean of the left and right limits at the jump.
  double jump_average() const { return kind_ == Kind::square_well ? -0.5 * depth_ : 0.0; }
  /// Largest value of -U (the well depth), 0 if purely repulsive.
  double well_depth() const;
  /// Lower end of the integration domain when there is no hard wall.
  double inner_limit() const;

 private:
  Kind kind_ = Kind::zero;
  double depth_ = 0.0;
  double radius_ = 0.0;
  double core_ = 0.0;
  MorsePotential morse_{0.0, 1.0, 1.0, 0.0};
};

/// U(r) + hbar l(l+1) / (2 mu r^2), in rad/s.
double effective_potential(const MorsePotential& pot, int l, double reduced_mass, double r);

/// Centrifugal energy hbar l(l+1) / (2 mu r^2), in rad/s.
double centrifugal_energy(int l, double reduced_mass, double r);

struct PhaseShiftOptions {
  /// Step h = step_fraction / k_max where k_max is the largest local wavenumber.
  double step_fraction = 0.1;
  /// Required WKB attenuation integral between the start point and the
  /// innermost classically allowed point.
  double decay_integral = 30.0;
};

/// delta_l(k) in (-pi/2, pi/2] by Numerov integration of
/// u'' = [l(l+1)/r^2 + 2 mu U / hbar - k^2] u matched to j_l, y_l beyond the range.
double phase_shift(double k, int l, const ScatteringPotential& pot, double reduced_mass,
                   const PhaseShiftOptions& options = {});

/// Semiclassical (Langer-corrected) phase shift, used to anchor the branch.
double wkb_phase_shift(double k, int l, const ScatteringPotential& pot, double reduced_mass);

/// delta_l on a k grid with the branch chosen continuous in k, anchored to the
/// WKB value at the largest k.
std::vector<double> phase_shift_curve(const std::vector<double>& ks, int l,
                                      const ScatteringPotential& pot, double reduced_mass,
                                      const PhaseShiftOptions& options = {});

struct PartialWaveOptions {
  int l_max = 200;     // initial cap, extended automatically up to l_cap
  int l_cap = 20000;
  double tail = 1e-6;  // |sin delta_l| threshold for the tail
  int tail_run = 5;    // consecutive l below threshold required
  PhaseShiftOptions phase;
};

struct PartialWaveSet {
  double k = 0.0;
  std::vector<double> delta;  // principal values, l = 0..L
  bool converged = false;
};

PartialWaveSet partial_waves(double k, const ScatteringPotential& pot, double reduced_mass,
                             const PartialWaveOptions& options = {});

/// sigma(k) = 4 pi / k^2 sum (2l+1) sin^2 delta_l; refuses unconverged sets.
double cross_section(const PartialWaveSet& pw);
/// Sum restricted to l <= l_cut (no convergence requirement).
double cross_section(const PartialWaveSet& pw, int l_cut);
/// 4 pi / k^2 sum (2l+1) over the computed l.
double unitarity_bound(const PartialWaveSet& pw);

struct VelocityDistribution {
  double temperature;   // K
  double reduced_mass;  // kg

  double most_probable_speed() const;
};

/// P(v) = 4 pi v^2 (mu / 2 pi k_B T)^{3/2} exp(-mu v^2 / 2 k_B T).
double maxwell_density(double v, const VelocityDistribution& dist);

struct ThermalOptions {
  int panels = 4;              // 32-point Gauss-Legendre panels on [0, v_max]
  double v_max_factor = 5.0;   // v_max = factor * most probable speed
  PartialWaveOptions partial_waves;
  unsigned threads = 0;
};

struct ThermalCrossSection {
  double total = 0.0;              // m^2
  std::vector<double> cumulative;  // restricted to l <= index, m^2
  double tail_mass = 0.0;          // Maxwell probability beyond v_max
  std::vector<double> speeds;      // quadrature nodes, m/s
  std::vector<double> sigma;       // sigma(k) at each node, m^2
  std::vector<double> weights;     // quadrature weight times P(v)
  int l_used = 0;                  // largest l needed at any node
};

/// sigma_el = int P(v) sigma(mu v / hbar) dv with fixed Gauss panels.
/// Throws NumericalError if the l-sum fails to converge at any node.
ThermalCrossSection thermal_cross_section(double temperature, const ScatteringPotential& pot,
                                          double reduced_mass, const ThermalOptions& options = {});

/// Which energy the centrifugal barrier at the resonance radius is compared with.
enum class BarrierCriterion {
  mean_energy,                   // E_av = (3/2) k_B T
  mean_energy_minus_upconversion // E_av - hbar Omega, the energy left after absorption
};

/// Largest l whose centrifugal energy at `radius` stays below the chosen energy; -1 if none.
int barrier_l_cut(double temperature, double reduced_mass, double radius, double upconversion,
                  BarrierCriterion criterion);

/// Thermal cross section restricted to l <= l_cut.
double cooling_cross_section(double temperature, const ScatteringPotential& pot,
                             double reduced_mass, int l_cut, const ThermalOptions& options = {});

}  // namespace exciplex
