#pragma once
/**
 * @file bench.hpp
 * @brief Solver throughput measurement.
 */

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "lemp/fdtd/grid.hpp"
#include "lemp/harness/scenario.hpp"

namespace lemp::harness {

struct PerfReport {
  std::string dimensionality;
  std::size_t cells = 0;
  std::size_t iterations = 0;
  std::size_t warmup = 0;
  double seconds_per_iteration = 0.0;  // median over the timed iterations
  double mcells_per_second = 0.0;      // cells / (seconds_per_iteration * 1e6)
  double init_time = 0.0;              // lattice construction [s]
  double solve_time = 0.0;             // sum of the timed iterations [s]
  fdtd::Precision precision = fdtd::Precision::Single;
  std::size_t memory_estimate = 0;     // [bytes], computed before allocation
  std::size_t allocated_bytes = 0;
  int threads = 0;
};

struct BenchOptions {
  std::size_t iterations = 20;
  std::size_t warmup = 3;
  int threads = 0;
  /// Overrides MemAvailable from /proc/meminfo.
  std::optional<std::size_t> memory_limit;
};

/// Refusal to build a lattice that does not fit in memory.
class InsufficientMemory : public std::runtime_error {
 public:
  InsufficientMemory(std::size_t estimate, std::size_t available);
  std::size_t estimate() const { return estimate_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t estimate_;
  std::size_t available_;
};

/// Bytes the kernel may still allocate; 0 when unknown.
std::size_t available_memory();

/// Times single solver steps of the scenario's source on `grid`. Throws
/// ConfigError for fewer than 10 timed or 3 warm-up iterations and
/// InsufficientMemory before allocating anything too large.
PerfReport bench(const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml, const Scenario& sc,
                 const BenchOptions& opt = {});

std::string perf_json(const PerfReport& r);

}  // namespace lemp::harness
