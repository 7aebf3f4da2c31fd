#include "exciplex/gas_cell.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <string>

#include "exciplex/errors.hpp"
#include "exciplex/thermal_balance.hpp"

namespace exciplex {

using constants::pi;

GasCellResult gas_cell_scenario(const Preset& preset, const GasCellParams& prm) {
  if (prm.beam_radius <= 0 || prm.beam_radius >= prm.cell_radius)
    throw DomainError("gas_cell_scenario: need 0 < beam radius < cell radius");
  if (prm.gas_length <= 0 || prm.window_thickness <= 0)
    throw DomainError("gas_cell_scenario: lengths must be positive");
  if (prm.radial_spacing <= 0 || prm.axial_spacing <= 0)
    throw DomainError("gas_cell_scenario: grid spacings must be positive");

  const GasMixture mix = preset.mixture.with_temperature(prm.ambient)
                             .with_densities(prm.dopant_density, prm.buffer_density);
  const FibreGeometry beam(prm.beam_radius, prm.cell_radius, prm.gas_length,
                           prm.window_conductivity, prm.gas_conductivity);
  const DriveSpec drive(prm.input_power, prm.cooling_cross_section, prm.pulse_duration);
  const ExciplexSpec& ex = preset.exciplex;

  GasCellResult out;
  out.coeffs = coefficients(mix, beam, ex, drive);
  const double efficiency = ex.upconversion() / ex.laser_frequency();

  const auto nr = static_cast<std::size_t>(std::ceil(prm.cell_radius / prm.radial_spacing));
  const auto n_gas = static_cast<std::size_t>(std::ceil(prm.gas_length / prm.axial_spacing));
  const auto n_win =
      static_cast<std::size_t>(std::ceil(prm.window_thickness / prm.axial_spacing));
  const double dr = prm.cell_radius / static_cast<double>(nr);
  const double dz_gas = prm.gas_length / static_cast<double>(n_gas);
  const double dz_win = prm.window_thickness / static_cast<double>(n_win);
  const std::size_t nz = n_gas + 2 * n_win;

  // axial cell layout: window | gas | window
  std::vector<double> z_lo(nz), dz(nz), k(nz);
  for (std::size_t j = 0; j < nz; ++j) {
    if (j < n_win) {
      z_lo[j] = -prm.window_thickness + static_cast<double>(j) * dz_win;
      dz[j] = dz_win;
      k[j] = prm.window_conductivity;
    } else if (j < n_win + n_gas) {
      z_lo[j] = static_cast<double>(j - n_win) * dz_gas;
      dz[j] = dz_gas;
      k[j] = prm.gas_conductivity;
    } else {
      z_lo[j] = prm.gas_length + static_cast<double>(j - n_win - n_gas) * dz_win;
      dz[j] = dz_win;
      k[j] = prm.window_conductivity;
    }
  }

  out.z.resize(n_gas + 1);
  out.power.resize(n_gas + 1);
  for (std::size_t j = 0; j <= n_gas; ++j) {
    out.z[j] = static_cast<double>(j) * dz_gas;
    out.power[j] = power_at(out.z[j], out.coeffs);
  }
  out.absorbed_fraction = 1.0 - out.power.back() / prm.input_power;
  out.cooling_power =
      cooling_power(prm.input_power, out.power.back(), ex.upconversion(), ex.laser_frequency());

  const auto index = [nr](std::size_t i, std::size_t j) { return static_cast<long>(j * nr + i); };
  const long n_unknown = static_cast<long>(nr * nz);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n_unknown) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);
  const double beam_area = pi * prm.beam_radius * prm.beam_radius;

  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      const double r_lo = static_cast<double>(i) * dr;
      const double r_hi = r_lo + dr;
      const double ring = pi * (r_hi * r_hi - r_lo * r_lo);
      const long row = index(i, j);
      double diag = 0.0;

      // radial faces; the axis carries no flux, the outer wall is at T_e
      if (i + 1 < nr) {
        const double g = 2.0 * pi * r_hi * dz[j] * k[j] / dr;
        diag += g;
        triplets.emplace_back(row, index(i + 1, j), -g);
      } else {
        diag += 2.0 * pi * r_hi * dz[j] * k[j] / (0.5 * dr);
      }
      if (i > 0) {
        const double g = 2.0 * pi * r_lo * dz[j] * k[j] / dr;
        diag += g;
        triplets.emplace_back(row, index(i - 1, j), -g);
      }
      // axial faces with series resistance across material changes
      if (j + 1 < nz) {
        const double g = ring / (0.5 * dz[j] / k[j] + 0.5 * dz[j + 1] / k[j + 1]);
        diag += g;
        triplets.emplace_back(row, index(i, j + 1), -g);
      } else {
        diag += ring * k[j] / (0.5 * dz[j]);
      }
      if (j > 0) {
        const double g = ring / (0.5 * dz[j] / k[j] + 0.5 * dz[j - 1] / k[j - 1]);
        diag += g;
        triplets.emplace_back(row, index(i, j - 1), -g);
      } else {
        diag += ring * k[j] / (0.5 * dz[j]);
      }
      triplets.emplace_back(row, row, diag);

      if (j >= n_win && j < n_win + n_gas && r_lo < prm.beam_radius) {
        const std::size_t g = j - n_win;
        const double r_in = std::min(r_hi, prm.beam_radius);
        const double overlap = pi * (r_in * r_in - r_lo * r_lo) / beam_area;
        rhs[row] = -efficiency * (out.power[g] - out.power[g + 1]) * overlap;
      }
    }
  }

  Eigen::SparseMatrix<double> a(n_unknown, n_unknown);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(1e-14);
  cg.setMaxIterations(50000);
  cg.compute(a);
  if (cg.info() != Eigen::Success)
    throw NumericalError("thermal_balance", "gas cell preconditioner factorisation failed");
  const Eigen::VectorXd theta = cg.solve(rhs);

  const Eigen::VectorXd res = a * theta - rhs;
  double scaled = 0.0;
  for (long q = 0; q < n_unknown; ++q) scaled = std::max(scaled, std::abs(res[q]) / a.coeff(q, q));
  const double tol = prm.tolerance > 0 ? prm.tolerance : 1e-8 * prm.ambient;
  if (!std::isfinite(scaled) || scaled > tol)
    throw NumericalError("thermal_balance", "gas cell solve stalled at scaled residual " +
                                                std::to_string(scaled) + " K");

  out.residual = scaled;
  out.iterations = static_cast<int>(cg.iterations());
  out.n_radial = nr;
  out.n_axial = nz;
  out.temperature.resize(static_cast<std::size_t>(n_unknown));
  for (long q = 0; q < n_unknown; ++q)
    out.temperature[static_cast<std::size_t>(q)] = prm.ambient + theta[q];
  out.axis_z.resize(nz);
  out.axis_drop.resize(nz);
  for (std::size_t j = 0; j < nz; ++j) {
    out.axis_z[j] = z_lo[j] + 0.5 * dz[j];
    out.axis_drop[j] = -theta[index(0, j)];
  }
  out.max_drop = std::max(0.0, -theta.minCoeff());
  return out;
}

}  // namespace exciplex
