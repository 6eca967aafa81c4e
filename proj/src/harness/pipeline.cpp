#include "lemp/harness/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lemp/errors.hpp"
#include "lemp/reffields.hpp"

namespace lemp::harness {

namespace {

using Clock = std::chrono::steady_clock;

double round_up(double v, double dx) { return std::ceil(v / dx - 1e-9) * dx; }

}  // namespace

std::vector<ObserverField> observer_fields(const Scenario& sc) {
  std::vector<ObserverField> out;
  for (const auto& p : sc.observers) {
    if (sc.ground.is_pec()) {
      if (p.z < 0.0) throw ConfigError("observer below a perfectly conducting ground");
      out.push_back({FieldComponent::Ez, p});
      out.push_back({FieldComponent::Hphi, p});
    } else {
      if (p.z >= 0.0) out.push_back({FieldComponent::Ez, p});
      if (p.z <= 0.0) out.push_back({FieldComponent::Ex, p});
    }
  }
  return out;
}

FieldWaveform reference_waveform(const Scenario& sc, const ObserverField& f, const Timebase& tb) {
  FieldWaveform w;
  const ObservationPoint surface{f.point.r, 0.0};
  switch (f.component) {
    case FieldComponent::Ez:
      w = ez_pec(f.point, sc.mtle, tb);
      if (!sc.ground.is_pec()) w = apply_chain(w, {FilterStep::attenuation()}, sc.ground);
      break;
    case FieldComponent::Hphi:
      w = hphi_pec(f.point, sc.mtle, tb);
      break;
    case FieldComponent::Ex: {
      std::vector<FilterStep> chain{FilterStep::attenuation(), FilterStep::tilt()};
      if (f.point.z < 0.0) chain.push_back(FilterStep::weyl(-f.point.z));
      w = apply_chain(ez_pec(surface, sc.mtle, tb), chain, sc.ground);
      w.point = f.point;
      break;
    }
    case FieldComponent::Er:
      w = er_pec(f.point, sc.mtle, tb);
      break;
  }
  w.scenario_id = sc.id;
  return w;
}

std::vector<FieldWaveform> reference_waveforms(const Scenario& sc) {
  std::vector<FieldWaveform> out;
  for (const auto& f : observer_fields(sc)) out.push_back(reference_waveform(sc, f, sc.timebase));
  return out;
}

fdtd::GridSpec default_grid(const Scenario& sc, fdtd::Dimensionality dim) {
  fdtd::GridSpec g;
  g.dimensionality = dim;
  const bool axi = dim == fdtd::Dimensionality::Axi2D;
  g.dx = axi ? 10.0 : 50.0;
  const double layer = 10.0 * g.dx;
  double r_max = 0.0, z_min = 0.0;
  for (const auto& p : sc.observers) {
    r_max = std::max(r_max, p.r);
    z_min = std::min(z_min, p.z);
  }
  g.ground_depth = sc.ground.is_pec() ? 0.0 : round_up(std::max(500.0, 2.0 * -z_min) + layer, g.dx);
  const double z = g.ground_depth + round_up(sc.mtle.channel_height + 500.0, g.dx) + layer;
  if (axi) {
    g.extents = {round_up(r_max + 2000.0, g.dx) + layer, z};
  } else {
    const double x0 = layer + 500.0;
    g.source_x = x0;
    g.extents = {round_up(x0 + r_max + 2000.0, g.dx) + layer, 2000.0 + 2.0 * layer, z};
  }
  g.n_steps = static_cast<std::size_t>(std::ceil(sc.timebase.duration() / g.dt() - 1e-9)) + 1;
  return g;
}

FdtdRun run_probes(const Scenario& sc, const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml,
                   const std::vector<fdtd::ProbeSpec>& probes, int threads) {
  FdtdRun run;
  run.grid = grid;
  run.pml = pml;
  run.dt = grid.dt();
  run.steps = grid.n_steps > 0
                  ? grid.n_steps
                  : static_cast<std::size_t>(std::ceil(sc.timebase.duration() / run.dt - 1e-9)) + 1;
  run.memory_estimate = fdtd::memory_estimate(grid, pml);

  fdtd::SimulationOptions opt;
  opt.threads = threads;
  auto t0 = Clock::now();
  fdtd::Simulation sim(sc.mtle, sc.ground, grid, pml, probes, opt);
  run.init_time = std::chrono::duration<double>(Clock::now() - t0).count();
  run.allocated_bytes = sim.allocated_bytes();
  t0 = Clock::now();
  sim.run(run.steps);
  run.solve_time = std::chrono::duration<double>(Clock::now() - t0).count();
  for (std::size_t i = 0; i < probes.size(); ++i) run.waves.push_back(sim.probe_waveform(i, sc.id));
  return run;
}

FdtdRun run_fdtd(const Scenario& sc, const fdtd::GridSpec& grid, const fdtd::CpmlProfile& pml,
                 int threads) {
  std::vector<fdtd::ProbeSpec> probes;
  for (const auto& f : observer_fields(sc)) {
    ObservationPoint p = f.point;
    if (f.component == FieldComponent::Ez) p.z = std::max(p.z, grid.dx);
    probes.push_back({f.component, p});
  }
  return run_probes(sc, grid, pml, probes, threads);
}

FdtdRun run_fdtd(const Scenario& sc, fdtd::Dimensionality dim, int threads) {
  fdtd::GridSpec g = sc.grid.value_or(default_grid(sc, dim));
  if (sc.grid && sc.grid->dimensionality != dim) {
    throw ConfigError("grid.dimensionality in the scenario disagrees with the requested grid");
  }
  return run_fdtd(sc, g, sc.pml.value_or(fdtd::CpmlProfile{}), threads);
}

}  // namespace lemp::harness
