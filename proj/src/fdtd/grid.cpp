#include "lemp/fdtd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"

namespace lemp::fdtd {

namespace {

std::size_t cells_along(double extent, double dx, const char* axis) {
  const double n = extent / dx;
  const double rounded = std::round(n);
  if (!(rounded >= 1.0) || std::abs(n - rounded) > 1e-6 * std::max(1.0, rounded)) {
    throw ConfigError(std::string("grid: extent along ") + axis + " (" +
                      std::to_string(extent) + " m) is not a positive multiple of dx");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::string_view to_string(Dimensionality d) {
  return d == Dimensionality::Axi2D ? "axi2d" : "cart3d";
}

std::string_view to_string(Precision p) { return p == Precision::Single ? "single" : "double"; }

double cfl_timestep(double dx, int dims, double cfl_factor, bool allow_unsafe) {
  if (!(dx > 0.0)) throw ConfigError("cfl_timestep: dx must be > 0");
  if (dims < 1 || dims > 3) throw ConfigError("cfl_timestep: dims must be 1, 2 or 3");
  if (!(cfl_factor > 0.0)) throw ConfigError("cfl_timestep: cfl_factor must be > 0");
  if (cfl_factor > 1.0 && !allow_unsafe) {
    throw ConfigError("cfl_timestep: cfl_factor " + std::to_string(cfl_factor) +
                      " exceeds the stability bound (unsafe override not set)");
  }
  return cfl_factor * dx / (kC0 * std::sqrt(static_cast<double>(dims)));
}

double GridSpec::dt() const {
  return cfl_timestep(dx, effective_cfl_dims(), cfl_factor, allow_unsafe_cfl);
}

std::array<std::size_t, 3> GridSpec::cells() const {
  if (!(dx > 0.0)) throw ConfigError("grid: dx must be > 0");
  if (dimensionality == Dimensionality::Axi2D) {
    if (extents.size() != 2) throw ConfigError("grid: axi2d extents must be {r, z}");
    return {cells_along(extents[0], dx, "r"), 1, cells_along(extents[1], dx, "z")};
  }
  if (extents.size() != 3) throw ConfigError("grid: cart3d extents must be {x, y, z}");
  return {cells_along(extents[0], dx, "x"), cells_along(extents[1], dx, "y"),
          cells_along(extents[2], dx, "z")};
}

std::size_t GridSpec::cell_count() const {
  const auto c = cells();
  return c[0] * c[1] * c[2];
}

std::size_t GridSpec::ground_level_index() const {
  if (ground_depth == 0.0) return 0;
  return cells_along(ground_depth, dx, "ground depth");
}

void GridSpec::validate() const {
  const auto c = cells();
  (void)dt();
  if (ground_depth < 0.0) throw ConfigError("grid: ground_depth must be >= 0");
  if (ground_level_index() >= c[2]) throw ConfigError("grid: ground depth fills the domain");
  if (cfl_dims < 0 || cfl_dims > 3) throw ConfigError("grid: cfl_dims must be 0..3");
}

MaterialCoeffs material_coeffs(double sigma, double eps_r, double dt, double dx) {
  if (!(sigma >= 0.0)) throw DomainError("material_coeffs: sigma must be >= 0");
  if (!(eps_r >= 1.0)) throw DomainError("material_coeffs: eps_r must be >= 1");
  if (!(dt > 0.0) || !(dx > 0.0)) throw DomainError("material_coeffs: dt and dx must be > 0");
  const double eps = kEps0 * eps_r;
  if (std::isinf(sigma)) return {-1.0, 0.0};
  const double loss = sigma * dt / (2.0 * eps);
  return {(1.0 - loss) / (1.0 + loss), (dt / (eps * dx)) / (1.0 + loss)};
}

void CpmlProfile::validate() const {
  for (int t : thickness) {
    if (t < 1) throw ConfigError("pml: thickness_cells must be >= 1 on every face");
  }
  if (m_order < 2 || m_order > 4) throw ConfigError("pml: m_order must be in [2, 4]");
  if (!(kappa_max >= 1.0)) throw ConfigError("pml: kappa_max must be >= 1");
  if (!(alpha_max >= 0.0)) throw ConfigError("pml: alpha_max must be >= 0");
  if (!(sigma_ratio >= 0.0)) throw ConfigError("pml: sigma_ratio must be >= 0");
}

double cpml_sigma_opt(const CpmlProfile& p, double dx, double eps_r) {
  return p.sigma_ratio * (p.m_order + 1) / (150.0 * kPi * dx * std::sqrt(eps_r));
}

CpmlCoeffs cpml_coeffs(const CpmlProfile& p, double depth_fraction, double dt, double dx,
                       double eps_r) {
  const double xi = std::clamp(depth_fraction, 0.0, 1.0);
  const double grade = std::pow(xi, p.m_order);
  const double sigma = cpml_sigma_opt(p, dx, eps_r) * grade;
  const double kappa = 1.0 + (p.kappa_max - 1.0) * grade;
  const double alpha = p.alpha_max * (1.0 - xi);
  const double b = std::exp(-(sigma / kappa + alpha) * dt / kEps0);
  const double a = sigma > 0.0 ? sigma / (sigma * kappa + kappa * kappa * alpha) * (b - 1.0) : 0.0;
  return {b, a, kappa};
}

int values_per_cell(Dimensionality d) {
  // Axi2D: Ez, Er, Hphi + (Ca, Cb) for each E component + (Da, Db) for Hphi.
  // Cart3D: six components, each with its own update coefficient pair.
  return d == Dimensionality::Axi2D ? 9 : 18;
}

std::size_t memory_estimate(const GridSpec& g, const CpmlProfile& p) {
  const auto c = g.cells();
  const std::size_t bytes = g.precision == Precision::Single ? 4 : 8;
  std::size_t n = 0;
  if (g.dimensionality == Dimensionality::Axi2D) {
    // fields and coefficients on an (nr+1) x (nz+1) node array
    n = (c[0] + 1) * (c[2] + 1) * values_per_cell(g.dimensionality);
    const std::size_t lr = p.thickness[XHi] + 1;
    const std::size_t lz = p.thickness[ZLo] + p.thickness[ZHi] + 2;
    n += 2 * lr * (c[2] + 1) + 2 * lz * (c[0] + 1);
  } else {
    const std::size_t nx = c[0] + 1, ny = c[1] + 1, nz = c[2] + 1;
    n = nx * ny * nz * values_per_cell(g.dimensionality);
    const std::size_t lx = p.thickness[XLo] + p.thickness[XHi] + 2;
    const std::size_t ly = p.thickness[YLo] + p.thickness[YHi] + 2;
    const std::size_t lz = p.thickness[ZLo] + p.thickness[ZHi] + 2;
    n += 4 * (lx * ny * nz + ly * nx * nz + lz * nx * ny);
  }
  return n * bytes;
}

}  // namespace lemp::fdtd
