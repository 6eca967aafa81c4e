#pragma once
/**
 * @file experiment.hpp
 * @brief Named, desk-scale validation experiments.
 *
 * Every preset writes into its own directory: scenario files, reference and
 * FDTD waveform CSVs, comparison reports, a plot-ready bundle CSV and
 * manifest.json (grids, time steps, layers, cell counts, memory estimates,
 * timings, windows and the pass/fail thresholds). Waveform CSVs are
 * byte-identical between runs; timings in the manifest are not.
 *
 *   fig2_pec_1km            Axi2D dx 5 m, PEC ground, Ez and Hphi at 1 km
 *   fig3_lossy_10km         Axi2D dx 10 m, 1 mS/m, Ex at 10 km on and 10 m below the surface
 *   fig4_pml_sweep_scaled   Cart3D dx 50 m, 2 km corridor, lateral layer 4/8/16 cells
 *                           against an Axi2D run of the same lattice
 *   fig5_dispersion_scaled  Axi2D, 3 mS/m, Ez at 30 km for dx 50/25/12.5 m
 *   cfl_divergence          Axi2D beyond (1.05) and inside (0.9) the stability bound
 */

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lemp::harness {

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">", ">="
  double limit = 0.0;
  bool passed = false;
};

/// Reported quantity without a threshold.
struct Metric {
  std::string name;
  double value = 0.0;
};

struct ExperimentResult {
  std::string name;
  std::filesystem::path dir;
  std::vector<Check> checks;
  std::vector<Metric> metrics;

  bool passed() const;
};

struct ExperimentOptions {
  int threads = 0;
};

/// A stage of an experiment failed; what() names the stage.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& experiment, const std::string& stage, const std::string& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

const std::vector<std::string>& experiment_names();

/// Throws ConfigError listing the presets for an unknown name.
ExperimentResult run_experiment(const std::string& name, const std::filesystem::path& dir,
                                const ExperimentOptions& opt = {});

std::string format_check(const Check& c);

}  // namespace lemp::harness
