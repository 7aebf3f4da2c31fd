#include "exciplex/heat_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "exciplex/errors.hpp"

namespace exciplex {

void ThermalScenario::validate() const {
  if (outer_radius <= 0) throw DomainError("ThermalScenario: outer radius must be positive");
  if (gas_conductivity <= 0 || glass_conductivity <= 0)
    throw DomainError("ThermalScenario: conductivities must be positive");
  if (ambient <= 0) throw DomainError("ThermalScenario: ambient temperature must be positive");
  for (std::size_t a = 0; a < cores.size(); ++a) {
    const auto& c = cores[a];
    if (c.radius <= 0) throw DomainError("ThermalScenario: core radius must be positive");
    if (std::hypot(c.x, c.y) + c.radius >= outer_radius)
      throw DomainError("ThermalScenario: core " + std::to_string(a) + " leaves the body");
    for (std::size_t b = 0; b < a; ++b) {
      const auto& o = cores[b];
      if (std::hypot(c.x - o.x, c.y - o.y) < c.radius + o.radius)
        throw DomainError("ThermalScenario: cores overlap");
    }
  }
}

ThermalScenario single_fibre_scenario(const FibreGeometry& fibre, double q_vol, double ambient) {
  ThermalScenario s;
  s.cores.push_back({0.0, 0.0, fibre.inner_radius(), q_vol});
  s.outer_radius = fibre.outer_radius();
  s.gas_conductivity = fibre.gas_conductivity();
  s.glass_conductivity = fibre.wall_conductivity();
  s.ambient = ambient;
  return s;
}

ThermalScenario hexagonal_bundle(const FibreGeometry& fibre, double q_vol, double ambient,
                                 int rings, double pitch) {
  if (rings < 0) throw DomainError("hexagonal_bundle: rings must be non-negative");
  if (pitch <= 0) pitch = 2.0 * fibre.outer_radius();
  ThermalScenario s;
  s.gas_conductivity = fibre.gas_conductivity();
  s.glass_conductivity = fibre.wall_conductivity();
  s.ambient = ambient;
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  for (int i = -rings; i <= rings; ++i) {
    for (int j = -rings; j <= rings; ++j) {
      const int k = -i - j;
      if (std::max({std::abs(i), std::abs(j), std::abs(k)}) > rings) continue;
      const double x = pitch * (i + 0.5 * j);
      const double y = pitch * half_sqrt3 * j;
      s.cores.push_back({x, y, fibre.inner_radius(), q_vol});
    }
  }
  // central core first, then by distance and angle for a stable ordering
  std::stable_sort(s.cores.begin(), s.cores.end(), [](const Core& a, const Core& b) {
    const double ra = std::hypot(a.x, a.y), rb = std::hypot(b.x, b.y);
    if (std::abs(ra - rb) > 1e-9 * (ra + rb)) return ra < rb;
    return std::atan2(a.y, a.x) < std::atan2(b.y, b.x);
  });
  s.outer_radius = rings * pitch + fibre.outer_radius();
  return s;
}

// ---------------------------------------------------------------------------

TemperatureField::TemperatureField(std::size_t n, double spacing, double origin,
                                   std::vector<double> values, std::vector<int> region,
                                   double residual, int iterations, std::vector<Core> cores)
    : n_(n),
      h_(spacing),
      origin_(origin),
      values_(std::move(values)),
      region_(std::move(region)),
      residual_(residual),
      iterations_(iterations),
      cores_(std::move(cores)) {}

double TemperatureField::sample(double x, double y) const {
  const auto locate = [&](double v, std::size_t& i, double& f) {
    double s = (v - origin_) / h_ - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(n_ - 1));
    i = std::min(static_cast<std::size_t>(s), n_ - 2);
    f = s - static_cast<double>(i);
  };
  std::size_t i, j;
  double fx, fy;
  locate(x, i, fx);
  locate(y, j, fy);
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
         (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

double TemperatureField::core_mean(int index) const {
  if (index >= 0 && static_cast<std::size_t>(index) < cores_.size()) {
    const Core& c = cores_[static_cast<std::size_t>(index)];
    constexpr int kSub = 8;
    double sum = 0.0, area = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::abs(y(j) - c.y) > c.radius + h_) continue;
      for (std::size_t i = 0; i < n_; ++i) {
        if (std::abs(x(i) - c.x) > c.radius + h_) continue;
        int hits = 0;
        for (int a = 0; a < kSub; ++a)
          for (int b = 0; b < kSub; ++b) {
            const double sx = x(i) + ((a + 0.5) / kSub - 0.5) * h_ - c.x;
            const double sy = y(j) + ((b + 0.5) / kSub - 0.5) * h_ - c.y;
            if (sx * sx + sy * sy < c.radius * c.radius) ++hits;
          }
        sum += hits * at(i, j);
        area += hits;
      }
    }
    if (area == 0) throw DomainError("core_mean: core not resolved by the grid");
    return sum / area;
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (region_[k] == index) {
      sum += values_[k];
      ++count;
    }
  }
  if (count == 0) throw DomainError("core_mean: core not resolved by the grid");
  return sum / static_cast<double>(count);
}

double TemperatureField::minimum() const {
  return *std::min_element(values_.begin(), values_.end());
}

namespace {

struct Point {
  double x, y;
};

// Parameter interval [t0, t1] within [0, t_max] of p + t d inside the circle.
double inside_length(Point p, Point d, double t_max, double cx, double cy, double radius) {
  const double fx = p.x - cx, fy = p.y - cy;
  const double a = d.x * d.x + d.y * d.y;
  const double b = 2.0 * (fx * d.x + fy * d.y);
  const double c = fx * fx + fy * fy - radius * radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max((-b - sq) / (2.0 * a), 0.0);
  const double t1 = std::min((-b + sq) / (2.0 * a), t_max);
  return std::max(t1 - t0, 0.0);
}

class Discretisation {
 public:
  Discretisation(const ThermalScenario& s, double h, std::size_t n, double origin)
      : s_(s), h_(h), n_(n), origin_(origin) {}

  Point centre(std::size_t i, std::size_t j) const {
    return {origin_ + (static_cast<double>(i) + 0.5) * h_,
            origin_ + (static_cast<double>(j) + 0.5) * h_};
  }

  int region(Point p) const {
    if (p.x * p.x + p.y * p.y >= s_.outer_radius * s_.outer_radius) return -2;
    for (std::size_t c = 0; c < s_.cores.size(); ++c) {
      const auto& core = s_.cores[c];
      const double dx = p.x - core.x, dy = p.y - core.y;
      if (dx * dx + dy * dy < core.radius * core.radius) return static_cast<int>(c);
    }
    return -1;
  }

  // Conductance (per unit depth) from p along d over parameter [0, t_end],
  // face width h: h / sum(l_i / k_i).
  double conductance(Point p, Point d, double t_end) const {
    const double length = t_end * h_;
    double gas = 0.0;
    for (const auto& core : s_.cores) gas += inside_length(p, d, t_end, core.x, core.y, core.radius);
    gas *= h_;
    gas = std::min(gas, length);
    const double resistance =
        gas / s_.gas_conductivity + (length - gas) / s_.glass_conductivity;
    return h_ / resistance;
  }

  // Fraction of t in [0, 1] at which p + t d leaves the body.
  double exit_fraction(Point p, Point d) const {
    const double a = d.x * d.x + d.y * d.y;
    const double b = 2.0 * (p.x * d.x + p.y * d.y);
    const double c = p.x * p.x + p.y * p.y - s_.outer_radius * s_.outer_radius;
    const double t = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    return std::clamp(t, 1e-3, 1.0);
  }

  // Heat source of the cell (W per unit depth) by sub-sampling the core overlap.
  double source(Point p) const {
    double total = 0.0;
    constexpr int kSub = 8;
    for (const auto& core : s_.cores) {
      if (core.q_vol == 0.0) continue;
      const double reach = core.radius + h_;
      if (std::abs(p.x - core.x) > reach || std::abs(p.y - core.y) > reach) continue;
      int hits = 0;
      for (int a = 0; a < kSub; ++a) {
        for (int b = 0; b < kSub; ++b) {
          const double sx = p.x + ((a + 0.5) / kSub - 0.5) * h_ - core.x;
          const double sy = p.y + ((b + 0.5) / kSub - 0.5) * h_ - core.y;
          if (sx * sx + sy * sy < core.radius * core.radius) ++hits;
        }
      }
      total += core.q_vol * h_ * h_ * hits / static_cast<double>(kSub * kSub);
    }
    return total;
  }

 private:
  const ThermalScenario& s_;
  double h_;
  std::size_t n_;
  double origin_;
};

}  // namespace

TemperatureField heat_solve_2d(const ThermalScenario& scenario, const GridSpec& grid) {
  scenario.validate();
  double r_min = std::numeric_limits<double>::infinity();
  for (const auto& c : scenario.cores) r_min = std::min(r_min, c.radius);

  double h = grid.spacing;
  if (h <= 0) {
    if (scenario.cores.empty()) throw DomainError("heat_solve_2d: grid spacing required");
    h = r_min / grid.cells_per_core_radius;
  }
  if (!scenario.cores.empty() && r_min / h < 8.0 - 1e-9)
    throw DomainError("heat_solve_2d: grid must resolve the smallest core radius by >= 8 cells");

  const auto n = static_cast<std::size_t>(std::ceil(2.0 * scenario.outer_radius / h));
  h = 2.0 * scenario.outer_radius / static_cast<double>(n);
  const double origin = -scenario.outer_radius;
  const double tol = grid.tolerance > 0 ? grid.tolerance : 1e-8 * scenario.ambient;

  Discretisation disc(scenario, h, n, origin);
  std::vector<int> region(n * n);
  std::vector<long> unknown(n * n, -1);
  long n_unknown = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const int r = disc.region(disc.centre(i, j));
      region[j * n + i] = r;
      if (r != -2) unknown[j * n + i] = n_unknown++;
    }
  }

  // Unknowns are theta = T - T_ambient, so the rim contributes no right-hand side.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n_unknown) * 5);
  Eigen::VectorXd rhs(n_unknown);
  constexpr int di[4] = {1, -1, 0, 0};
  constexpr int dj[4] = {0, 0, 1, -1};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const long row = unknown[j * n + i];
      if (row < 0) continue;
      const Point p = disc.centre(i, j);
      double diag = 0.0;
      for (int k = 0; k < 4; ++k) {
        const Point d{di[k] * h, dj[k] * h};
        const long ni = static_cast<long>(i) + di[k];
        const long nj = static_cast<long>(j) + dj[k];
        long col = -1;
        if (ni >= 0 && nj >= 0 && ni < static_cast<long>(n) && nj < static_cast<long>(n))
          col = unknown[static_cast<std::size_t>(nj) * n + static_cast<std::size_t>(ni)];
        if (col >= 0) {
          const double g = disc.conductance(p, d, 1.0);
          diag += g;
          triplets.emplace_back(row, col, -g);
        } else {
          const double t = disc.exit_fraction(p, d);
          diag += disc.conductance(p, d, t) / t;
        }
      }
      triplets.emplace_back(row, row, diag);
      rhs[row] = disc.source(p);
    }
  }

  Eigen::SparseMatrix<double> a(n_unknown, n_unknown);
  a.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setMaxIterations(grid.max_iterations);
  cg.setTolerance(1e-14);
  cg.compute(a);
  if (cg.info() != Eigen::Success)
    throw NumericalError("thermal_balance", "preconditioner factorisation failed");
  Eigen::VectorXd theta = cg.solve(rhs);

  const Eigen::VectorXd res = a * theta - rhs;
  double scaled = 0.0;
  for (long k = 0; k < n_unknown; ++k)
    scaled = std::max(scaled, std::abs(res[k]) / a.coeff(k, k));
  if (!std::isfinite(scaled) || scaled > tol)
    throw NumericalError("thermal_balance",
                         "conjugate gradient stopped at scaled residual " +
                             std::to_string(scaled) + " K after " +
                             std::to_string(cg.iterations()) + " iterations (target " +
                             std::to_string(tol) + " K)");

  std::vector<double> values(n * n, scenario.ambient);
  for (std::size_t k = 0; k < n * n; ++k)
    if (unknown[k] >= 0) values[k] = scenario.ambient + theta[unknown[k]];
  return TemperatureField(n, h, origin, std::move(values), std::move(region), scaled,
                          static_cast<int>(cg.iterations()), scenario.cores);
}

RadialSection cladding_radial_section(const TemperatureField& field,
                                      const ThermalScenario& scenario, double width) {
  if (width <= 0) width = field.spacing();
  const auto bins = static_cast<std::size_t>(std::ceil(scenario.outer_radius / width));
  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (std::size_t j = 0; j < field.size(); ++j) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (field.region(i, j) != -1) continue;
      const double rho = std::hypot(field.x(i), field.y(j));
      const auto b = std::min(static_cast<std::size_t>(rho / width), bins - 1);
      sum[b] += field.at(i, j);
      ++count[b];
    }
  }
  RadialSection out;
  for (std::size_t b = 0; b < bins; ++b) {
    if (count[b] == 0) continue;
    out.radius.push_back((static_cast<double>(b) + 0.5) * width);
    out.temperature.push_back(sum[b] / static_cast<double>(count[b]));
    out.count.push_back(count[b]);
  }
  return out;
}

}  // namespace exciplex
