#include "lemp/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>
#include <omp.h>

#include "lemp/errors.hpp"
#include "lemp/fdtd/simulation.hpp"

namespace lemp::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

InsufficientMemory::InsufficientMemory(std::size_t estimate, std::size_t available)
    : std::runtime_error("bench: lattice needs an estimated " + std::to_string(estimate) +
                         " bytes but only " + std::to_string(available) + " are available"),
      estimate_(estimate),
      available_(available) {}

std::size_t available_memory() {
  std::ifstream in("/proc/meminfo");
  std::string key, unit;
  std::size_t value = 0;
  while (in >> key >> value) {
    std::getline(in, unit);
    if (key == "MemAvailable:") return value * 1024;
  }
  return 0;
}

PerfReport bench(const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml, const Scenario& sc,
                 const BenchOptions& opt) {
  if (opt.iterations < 10) throw ConfigError("bench: need at least 10 timed iterations");
  if (opt.warmup < 3) throw ConfigError("bench: need at least 3 warm-up iterations");
  grid.validate();
  pml.validate();

  PerfReport r;
  r.dimensionality = std::string(fdtd::to_string(grid.dimensionality));
  r.cells = grid.cell_count();
  r.iterations = opt.iterations;
  r.warmup = opt.warmup;
  r.precision = grid.precision;
  r.memory_estimate = fdtd::memory_estimate(grid, pml);
  r.threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();

  const std::size_t avail = opt.memory_limit.value_or(available_memory());
  if (avail > 0 && r.memory_estimate > avail) throw InsufficientMemory(r.memory_estimate, avail);

  fdtd::SimulationOptions so;
  so.threads = opt.threads;
  const auto t0 = Clock::now();
  fdtd::Simulation sim(sc.mtle, sc.ground, grid, pml, {}, so);
  r.init_time = seconds_since(t0);
  r.allocated_bytes = sim.allocated_bytes();

  for (std::size_t i = 0; i < opt.warmup; ++i) sim.step();
  std::vector<double> laps(opt.iterations);
  for (auto& lap : laps) {
    const auto s0 = Clock::now();
    sim.step();
    lap = seconds_since(s0);
  }
  for (double lap : laps) r.solve_time += lap;
  std::sort(laps.begin(), laps.end());
  const std::size_t m = laps.size() / 2;
  r.seconds_per_iteration = laps.size() % 2 ? laps[m] : 0.5 * (laps[m - 1] + laps[m]);
  r.mcells_per_second = static_cast<double>(r.cells) / (r.seconds_per_iteration * 1e6);
  return r;
}

std::string perf_json(const PerfReport& r) {
  nlohmann::json j = {
      {"dimensionality", r.dimensionality},
      {"cells", r.cells},
      {"iterations", r.iterations},
      {"warmup", r.warmup},
      {"seconds_per_iteration", r.seconds_per_iteration},
      {"mcells_per_second", r.mcells_per_second},
      {"init_time_s", r.init_time},
      {"solve_time_s", r.solve_time},
      {"precision", std::string(fdtd::to_string(r.precision))},
      {"memory_estimate_bytes", r.memory_estimate},
      {"allocated_bytes", r.allocated_bytes},
      {"threads", r.threads},
  };
  return j.dump(2) + "\n";
}

}  // namespace lemp::harness
