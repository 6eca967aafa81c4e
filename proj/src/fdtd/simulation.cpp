#include "lemp/fdtd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lemp/errors.hpp"

namespace lemp::fdtd {

namespace {

// Source start-up raises the energy polynomially in t (a factor below 10
// over 10 steps once n >= 50); an unstable lattice mode multiplies it by
// several per step.
constexpr std::size_t kGrowthGuard = 50;
constexpr std::size_t kGrowthLag = 10;
constexpr double kGrowthRatio = 1000.0;
constexpr std::size_t kRunawayGuard = 400;
constexpr std::size_t kHistoryLag = 200;
constexpr double kRunawayRatio = 1e6;

bool is_h(FieldComponent c) { return c == FieldComponent::Hphi; }

}  // namespace

Simulation::Simulation(const MtleModel& source, const GroundModel& ground, const GridSpec& grid,
                       const CpmlProfile& pml, std::vector<ProbeSpec> probes,
                       const SimulationOptions& opt)
    : grid_(grid), probes_(std::move(probes)) {
  grid_.validate();
  pml.validate();
  source.validate();
  dt_ = grid_.dt();
  kernel_ = grid_.dimensionality == Dimensionality::Axi2D
                ? make_axi2d_kernel(source, ground, grid_, pml, opt)
                : make_cart3d_kernel(source, ground, grid_, pml, opt);
  stencils_.reserve(probes_.size());
  for (const auto& p : probes_) stencils_.push_back(kernel_->locate(p));
  records_.resize(probes_.size());
  h_before_.resize(probes_.size());
}

void Simulation::step() {
  const std::size_t n = steps_;
  // E probes at t_n
  for (std::size_t p = 0; p < probes_.size(); ++p) {
    if (is_h(probes_[p].component)) {
      h_before_[p] = kernel_->sample(stencils_[p]);
    } else {
      records_[p].push_back(kernel_->sample(stencils_[p]));
    }
  }
  kernel_->update_h();
  for (std::size_t p = 0; p < probes_.size(); ++p) {
    if (is_h(probes_[p].component)) {
      records_[p].push_back(0.5 * (h_before_[p] + kernel_->sample(stencils_[p])));
    }
  }
  kernel_->update_e((static_cast<double>(n) + 0.5) * dt_);
  ++steps_;
  monitor();
}

void Simulation::run(std::size_t n_steps) {
  for (std::size_t s = 0; s < n_steps; ++s) step();
}

void Simulation::monitor() {
  const FieldStats st = kernel_->stats();
  trace_.max_e.push_back(st.max_e);
  trace_.max_h.push_back(st.max_h);
  trace_.energy.push_back(st.energy);
  const std::size_t n = trace_.energy.size() - 1;

  if (!trace_.growth_flag && n >= kGrowthGuard &&
      st.energy > kGrowthRatio * trace_.energy[n - kGrowthLag] && st.energy > 0.0) {
    trace_.growth_flag = true;
    trace_.growth_step = n;
  }
  if (!std::isfinite(st.energy) || !std::isfinite(st.max_e) || !std::isfinite(st.max_h)) {
    throw DivergenceFault(n, "fdtd: nonfinite field values at step " + std::to_string(n));
  }
  if (n >= kHistoryLag) history_max_ = std::max(history_max_, trace_.max_e[n - kHistoryLag]);
  if (n >= kRunawayGuard && history_max_ > 0.0 && st.max_e > kRunawayRatio * history_max_) {
    throw DivergenceFault(n, "fdtd: |E| exceeded 1e6 x its running maximum at step " +
                                 std::to_string(n));
  }
}

FieldWaveform Simulation::probe_waveform(std::size_t i, const std::string& scenario_id) const {
  if (i >= probes_.size()) throw ConfigError("probe index out of range");
  FieldWaveform w;
  w.component = probes_[i].component;
  w.point = probes_[i].point;
  w.scenario_id = scenario_id;
  w.timebase = Timebase{dt_, records_[i].size()};
  w.values = records_[i];
  return w;
}

}  // namespace lemp::fdtd
