#pragma once
/**
 * @file pipeline.hpp
 * @brief Scenario-driven runs of the reference engine and the FDTD solver.
 *
 * Each observer yields a fixed set of components:
 *
 *   PEC ground,   z >= 0   Ez, Hphi
 *   lossy ground, z >= 0   Ez (attenuated)
 *   lossy ground, z <= 0   Ex (attenuated, wave tilt, Weyl factor for z < 0)
 *
 * so a lossy surface observer gives both Ez and Ex. FDTD Ez probes are
 * lifted to one cell above the interface; the lifted height is recorded in
 * the probe waveform.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "lemp/fdtd/simulation.hpp"
#include "lemp/harness/scenario.hpp"

namespace lemp::harness {

struct ObserverField {
  FieldComponent component = FieldComponent::Ez;
  ObservationPoint point;
};

std::vector<ObserverField> observer_fields(const Scenario& sc);

/// Reference waveforms on the scenario timebase, in observer_fields order.
std::vector<FieldWaveform> reference_waveforms(const Scenario& sc);

/// Reference for one field on an arbitrary timebase.
FieldWaveform reference_waveform(const Scenario& sc, const ObserverField& f, const Timebase& tb);

/// Axi2D: dx 10 m; Cart3D: dx 50 m with the channel 500 m inside the x-lo
/// layer and a 2 km corridor. Both leave 2 km beyond the farthest observer,
/// 500 m above the channel top and a 500 m soil slab plus the layer below a
/// lossy interface. n_steps covers the scenario timebase.
fdtd::GridSpec default_grid(const Scenario& sc, fdtd::Dimensionality dim);

struct FdtdRun {
  fdtd::GridSpec grid;
  fdtd::CpmlProfile pml;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t memory_estimate = 0;
  std::size_t allocated_bytes = 0;
  double init_time = 0.0;   // [s]
  double solve_time = 0.0;  // [s]
  std::vector<FieldWaveform> waves;  // observer_fields order

  double seconds_per_iteration() const {
    return steps ? solve_time / static_cast<double>(steps) : 0.0;
  }
};

/// Runs grid.n_steps steps, or enough to cover the scenario timebase when
/// n_steps is 0, recording the given probes. DivergenceFault propagates.
FdtdRun run_probes(const Scenario& sc, const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml,
                   const std::vector<fdtd::ProbeSpec>& probes, int threads = 0);

/// run_probes with one probe per observer_fields entry.
FdtdRun run_fdtd(const Scenario& sc, const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml,
                 int threads = 0);

/// Grid and layer taken from the scenario, defaults where absent.
FdtdRun run_fdtd(const Scenario& sc, fdtd::Dimensionality dim, int threads = 0);

}  // namespace lemp::harness
