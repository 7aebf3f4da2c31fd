#pragma once

#include <cstddef>
#include <vector>

#include "exciplex/core_model.hpp"

namespace exciplex {

/// Gas-filled core with its own volumetric source (W/m^3, negative for cooling).
struct Core {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
  double q_vol = 0.0;
};

/// Cross section of one fibre or a bundle: circular glass body of radius
/// `outer_radius` held at `ambient` on its rim, containing disjoint gas cores.
struct ThermalScenario {
  std::vector<Core> cores;
  double outer_radius = 0.0;
  double gas_conductivity = 0.0;
  double glass_conductivity = 0.0;
  double ambient = 0.0;
  /// Stored for transient use only; ignored by the steady-state solver.
  double gas_heat_capacity = 0.0;
  double glass_heat_capacity = 0.0;

  /// Throws DomainError for overlapping cores, cores outside the body, or bad constants.
  void validate() const;
};

ThermalScenario single_fibre_scenario(const FibreGeometry& fibre, double q_vol, double ambient);

/// Hexagonally packed bundle with `rings` shells around the central core
/// (rings = 2 gives 19 cores). Pitch defaults to 2 r_e (touching claddings);
/// the glass body extends r_e beyond the outermost core centre.
ThermalScenario hexagonal_bundle(const FibreGeometry& fibre, double q_vol, double ambient,
                                 int rings = 2, double pitch = 0.0);

struct GridSpec {
  /// Cell size; 0 selects smallest core radius / cells_per_core_radius.
  double spacing = 0.0;
  double cells_per_core_radius = 8.0;
  /// Convergence target on the Jacobi-scaled residual, in kelvin.
  double tolerance = 0.0;  // 0 selects 1e-8 * ambient
  int max_iterations = 20000;
};

class TemperatureField {
 public:
  TemperatureField() = default;
  TemperatureField(std::size_t n, double spacing, double origin, std::vector<double> values,
                   std::vector<int> region, double residual, int iterations,
                   std::vector<Core> cores = {});

  std::size_t size() const { return n_; }  // cells per side
  double spacing() const { return h_; }
  double x(std::size_t i) const { return origin_ + (static_cast<double>(i) + 0.5) * h_; }
  double y(std::size_t j) const { return x(j); }
  double at(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
  /// -2 outside the body, -1 glass, otherwise the index of the core holding the cell centre.
  int region(std::size_t i, std::size_t j) const { return region_[j * n_ + i]; }
  const std::vector<double>& values() const { return values_; }

  /// Largest Jacobi-scaled residual at convergence (K) and CG iterations used.
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

  /// Bilinear interpolation between cell centres.
  double sample(double x, double y) const;
  /// Mean temperature over core `index`, each cell weighted by the fraction of its
  /// area inside the core (by cell centre if the field carries no core geometry).
  double core_mean(int index) const;
  double minimum() const;

 private:
  std::size_t n_ = 0;
  double h_ = 0.0;
  double origin_ = 0.0;
  std::vector<double> values_;
  std::vector<int> region_;
  std::vector<Core> cores_;
  double residual_ = 0.0;
  int iterations_ = 0;
};

/// Steady state of div(k grad T) = -q on the scenario cross section.
/// Cell-centred finite volumes; face conductances from the series resistance
/// of the gas and glass pieces of each centre-to-centre segment; the circular
/// rim enters through the exact distance to the boundary.
TemperatureField heat_solve_2d(const ThermalScenario& scenario, const GridSpec& grid = {});

struct RadialSection {
  std::vector<double> radius;       // annulus centre, m
  std::vector<double> temperature;  // azimuthal mean over glass cells, K
  std::vector<std::size_t> count;   // cells in the annulus
};

/// Azimuthal mean of the cladding (glass) temperature in annuli of width `width`
/// about the body centre; 0 selects the grid spacing. Empty annuli are skipped.
RadialSection cladding_radial_section(const TemperatureField& field,
                                      const ThermalScenario& scenario, double width = 0.0);

}  // namespace exciplex
