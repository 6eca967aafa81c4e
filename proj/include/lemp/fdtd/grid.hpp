#pragma once
/**
 * @file grid.hpp
 * @brief Discretisation records for the Yee solvers: grid layout, CFL time
 * step, lossy-medium update coefficients and CPML grading.
 */

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace lemp::fdtd {

enum class Dimensionality { Axi2D, Cart3D };
enum class Precision { Single, Double };

std::string_view to_string(Dimensionality d);
std::string_view to_string(Precision p);

/// Absorbing faces. In Axi2D, XHi is the outer radius and XLo/YLo/YHi are
/// unused (the axis is not a boundary).
enum Face : int { XLo = 0, XHi, YLo, YHi, ZLo, ZHi };

/// Uniform Yee lattice. Extents are total lattice sizes including absorbing
/// layers: Axi2D {r, z}, Cart3D {x, y, z}; z spans ground_depth of soil
/// below the interface and the air above it.
struct GridSpec {
  Dimensionality dimensionality = Dimensionality::Axi2D;
  double dx = 5.0;
  std::vector<double> extents{2000.0, 8000.0};
  double ground_depth = 0.0;
  double cfl_factor = 0.9;
  /// Dimension count used in the CFL bound; 0 selects the lattice's own
  /// dimension count (2 for Axi2D, 3 for Cart3D).
  int cfl_dims = 0;
  /// Allows cfl_factor > 1 (divergence experiments only).
  bool allow_unsafe_cfl = false;
  std::size_t n_steps = 0;
  Precision precision = Precision::Single;
  /// Cart3D channel position; defaults to the centre of the x-y plane.
  std::optional<double> source_x;
  std::optional<double> source_y;

  int spatial_dims() const { return dimensionality == Dimensionality::Axi2D ? 2 : 3; }
  int effective_cfl_dims() const { return cfl_dims > 0 ? cfl_dims : spatial_dims(); }
  double dt() const;
  /// Cell counts per axis ({nr, 1, nz} for Axi2D).
  std::array<std::size_t, 3> cells() const;
  std::size_t cell_count() const;
  /// z index of the air/ground interface plane.
  std::size_t ground_level_index() const;
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// dt = cfl_factor * dx / (c0 sqrt(dims)). cfl_factor > 1 throws unless
/// allow_unsafe is set.
double cfl_timestep(double dx, int dims, double cfl_factor, bool allow_unsafe = false);

struct MaterialCoeffs {
  double ca;
  double cb;
};

/// Semi-implicit lossy update E <- Ca E + Cb curl H (curl without 1/dx).
MaterialCoeffs material_coeffs(double sigma, double eps_r, double dt, double dx);

struct CpmlProfile {
  std::array<int, 6> thickness{10, 10, 10, 10, 10, 10};
  int m_order = 3;
  double kappa_max = 5.0;
  double alpha_max = 0.0;  // [S/m]
  double sigma_ratio = 1.0;

  void set_all(int cells) { thickness.fill(cells); }
  void validate() const;

  bool operator==(const CpmlProfile&) const = default;
};

struct CpmlCoeffs {
  double b;
  double a;
  double kappa;
};

/// Standard optimal sigma_max = (m+1) / (150 pi dx sqrt(eps_r)).
double cpml_sigma_opt(const CpmlProfile& p, double dx, double eps_r = 1.0);

/// Recursive-convolution coefficients at depth fraction xi in [0, 1] (0 at
/// the inner edge of the layer, 1 at the outer wall).
CpmlCoeffs cpml_coeffs(const CpmlProfile& p, double depth_fraction, double dt, double dx,
                       double eps_r = 1.0);

/// Bytes needed by the lattice: field and coefficient arrays for every cell
/// plus CPML auxiliary arrays.
std::size_t memory_estimate(const GridSpec& g, const CpmlProfile& p);

/// Stored values per cell (fields plus per-component update coefficients).
int values_per_cell(Dimensionality d);

}  // namespace lemp::fdtd
