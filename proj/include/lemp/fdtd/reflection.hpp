#pragma once
/**
 * @file reflection.hpp
 * @brief Normal-incidence reflection check for the CPML grading on a 1-D
 * transmission-line lattice (Ez, Hy along x).
 *
 * A Gaussian current sheet launches a pulse toward the right wall. Three runs
 * share the source and probe: the wall backed by the CPML, the bare PEC wall
 * at the same location, and an oversized lattice whose wall is out of reach
 * within the window. Reflections are the probe differences against the
 * oversized run.
 */

#include "lemp/fdtd/grid.hpp"

namespace lemp::fdtd {

struct ReflectionSetup {
  double dx = 10.0;
  double cfl_factor = 0.9;
  /// Gaussian 1/e half-width of the source current, in cells.
  double pulse_cells = 20.0;
  std::size_t gap_cells = 400;  // source to absorbing layer
};

struct ReflectionResult {
  double reflected_energy = 0.0;  // CPML wall
  double baseline_energy = 0.0;   // PEC wall
  double db = 0.0;                // 10 log10(reflected / baseline)
};

ReflectionResult cpml_reflection_1d(const CpmlProfile& p, const ReflectionSetup& s = {});

}  // namespace lemp::fdtd
