#pragma once

#include <vector>

#include "exciplex/constants.hpp"
#include "exciplex/core_model.hpp"
#include "exciplex/power_propagation.hpp"

namespace exciplex {

/// High-pressure buffer-gas cell closed by sapphire windows, pumped by a
/// collimated beam along its axis. Cell wall and outer window faces are held
/// at the ambient temperature.
struct GasCellParams {
  double ambient = 620.0;                 // K
  double buffer_density = 1e21 * constants::per_cm3;
  double dopant_density = 1e16 * constants::per_cm3;
  double beam_radius = 1.5e-3;            // m (3 mm diameter)
  double input_power = 2.5;               // W, not given for the experiment
  double gas_length = 10e-3;              // m
  double cell_radius = 5e-3;              // m
  double window_thickness = 3e-3;         // m
  double window_conductivity = 2.0;       // W/(K m)
  double gas_conductivity = 0.03;         // W/(K m)
  double cooling_cross_section = 20.0 * constants::angstrom2;
  double pulse_duration = 1.0 * constants::picosecond;
  double radial_spacing = 50e-6;          // m
  double axial_spacing = 50e-6;           // m
  double tolerance = 0.0;                 // K, 0 selects 1e-8 * ambient
};

struct GasCellResult {
  PropagationCoefficients coeffs;
  std::vector<double> z;                 // along the gas column, m
  std::vector<double> power;             // W
  std::vector<double> axis_z;            // window-to-window along the axis, m
  std::vector<double> axis_drop;         // T_e - T on the axis, K
  double absorbed_fraction = 0.0;        // 1 - P(gas_length) / P_in
  double cooling_power = 0.0;            // W, negative for extraction
  double max_drop = 0.0;                 // K
  double residual = 0.0;                 // K
  int iterations = 0;
  std::size_t n_radial = 0;
  std::size_t n_axial = 0;
  std::vector<double> temperature;       // row-major (axial, radial), K
};

/// Power profile along the cell from the propagation law, then the steady
/// axisymmetric (rho, z) heat equation with the local absorbed power as sink.
GasCellResult gas_cell_scenario(const Preset& preset, const GasCellParams& params = {});

}  // namespace exciplex
