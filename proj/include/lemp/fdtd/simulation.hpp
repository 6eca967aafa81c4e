#pragma once
/**
 * @file simulation.hpp
 * @brief Time-domain Yee solver driven by the channel current.
 *
 * Coordinates: z is height above the ground surface (negative underground),
 * r is the horizontal distance from the channel. In Cart3D the channel runs
 * along z at (source_x, source_y) and probes sit at (source_x + r, source_y).
 *
 * Per step n -> n+1: probes sample E at t_n, H is advanced from t_{n-1/2} to
 * t_{n+1/2} (probes record the mean of both), then E is advanced with the
 * channel current evaluated at t_{n+1/2}.
 */

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "lemp/channel.hpp"
#include "lemp/fdtd/grid.hpp"
#include "lemp/groundfx.hpp"
#include "lemp/waveform.hpp"

namespace lemp::fdtd {

struct ProbeSpec {
  FieldComponent component = FieldComponent::Ez;
  ObservationPoint point;
};

struct StabilityTrace {
  std::vector<double> max_e;
  std::vector<double> max_h;
  std::vector<double> energy;
  /// Set once the energy grows more than 1000x within 10 steps (from step 50).
  bool growth_flag = false;
  std::size_t growth_step = 0;
};

class DivergenceFault : public std::runtime_error {
 public:
  DivergenceFault(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Interpolation stencil of one probe on one field array.
struct ProbeStencil {
  int array = 0;
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

struct FieldStats {
  double max_e = 0.0;
  double max_h = 0.0;
  double energy = 0.0;
};

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual void update_h() = 0;
  /// Advances E; `current_time` is where the channel current is evaluated.
  virtual void update_e(double current_time) = 0;
  /// Charge delivered by the base cell of the channel so far [C].
  virtual double injected_charge() const = 0;
  virtual ProbeStencil locate(const ProbeSpec& p) const = 0;
  virtual double sample(const ProbeStencil& s) const = 0;
  virtual FieldStats stats() const = 0;
  virtual std::size_t allocated_bytes() const = 0;
};

struct SimulationOptions {
  int threads = 0;  // 0: OpenMP default
  bool source_enabled = true;
  /// Also drive the mirror image of the channel below z = 0 (full-space
  /// equivalent of a perfectly conducting ground).
  bool mirror_source = false;
};

class Simulation {
 public:
  /// Throws ConfigError for probes inside the absorbing layers, Ez probes
  /// less than one cell above the ground, or a channel that does not fit.
  Simulation(const MtleModel& source, const GroundModel& ground, const GridSpec& grid,
             const CpmlProfile& pml, std::vector<ProbeSpec> probes,
             const SimulationOptions& opt = {});

  void step();
  /// Throws DivergenceFault on nonfinite fields or runaway growth.
  void run(std::size_t n_steps);

  std::size_t steps_done() const { return steps_; }
  double dt() const { return dt_; }
  const GridSpec& grid() const { return grid_; }
  const StabilityTrace& stability_report() const { return trace_; }
  std::size_t allocated_bytes() const { return kernel_->allocated_bytes(); }
  double injected_charge() const { return kernel_->injected_charge(); }

  std::size_t probe_count() const { return probes_.size(); }
  /// Recorded probe samples at t_n = n dt, n = 0..steps_done()-1.
  FieldWaveform probe_waveform(std::size_t i, const std::string& scenario_id = "") const;

 private:
  void monitor();

  GridSpec grid_;
  double dt_ = 0.0;
  std::unique_ptr<Kernel> kernel_;
  std::vector<ProbeSpec> probes_;
  std::vector<ProbeStencil> stencils_;
  std::vector<std::vector<double>> records_;
  std::vector<double> h_before_;
  StabilityTrace trace_;
  double history_max_ = 0.0;
  std::size_t steps_ = 0;
};

std::unique_ptr<Kernel> make_axi2d_kernel(const MtleModel& source, const GroundModel& ground,
                                          const GridSpec& grid, const CpmlProfile& pml,
                                          const SimulationOptions& opt);
std::unique_ptr<Kernel> make_cart3d_kernel(const MtleModel& source, const GroundModel& ground,
                                           const GridSpec& grid, const CpmlProfile& pml,
                                           const SimulationOptions& opt);

}  // namespace lemp::fdtd
