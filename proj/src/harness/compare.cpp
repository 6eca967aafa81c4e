#include "lemp/harness/compare.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "lemp/errors.hpp"
#include "lemp/spectrum.hpp"

namespace lemp::harness {

namespace {

constexpr int kPad = 4;

FieldWaveform resample(const FieldWaveform& w, double t0, double dt, std::size_t n) {
  FieldWaveform out;
  out.component = w.component;
  out.point = w.point;
  out.scenario_id = w.scenario_id;
  out.timebase = Timebase{dt, n};
  out.values.resize(n);
  const bool aligned = dt == w.timebase.dt && t0 == 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = aligned ? w.values[k] : w.at(t0 + static_cast<double>(k) * dt);
  }
  return out;
}

// Least-squares non-increasing fit (pool adjacent violators).
std::vector<double> fit_nonincreasing(const std::vector<double>& y) {
  std::vector<double> level;
  std::vector<std::size_t> width;
  for (double v : y) {
    level.push_back(v);
    width.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] < level.back()) {
      const double l = level.back();
      const std::size_t n = width.back();
      level.pop_back();
      width.pop_back();
      const double wsum = static_cast<double>(width.back() + n);
      level.back() = (level.back() * static_cast<double>(width.back()) + l * static_cast<double>(n)) / wsum;
      width.back() += n;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t i = 0; i < level.size(); ++i) out.insert(out.end(), width[i], level[i]);
  return out;
}

// One-sided energy of the bins strictly above f, in units of sum x^2 dt.
double energy_above(const Spectrum& s, double f) {
  const std::size_t last = s.bins.size() - 1;
  double sum = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    if (s.frequency(k) <= f) continue;
    const double weight = (k == last && s.n_fft % 2 == 0) ? 1.0 : 2.0;
    sum += weight * std::norm(s.bins[k]);
  }
  return sum * s.df;
}

std::optional<double> index_if_long_enough(const FieldWaveform& w, double fc) {
  if (w.timebase.duration() < 4.0 / fc) return std::nullopt;
  return oscillation_index(w, fc);
}

nlohmann::json optional_number(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

double rise_time_10_90(const FieldWaveform& w) {
  w.validate();
  const std::size_t gp = w.peak_index();
  const double global = std::abs(w.values[gp]);
  if (!(global > 0.0)) throw DomainError("rise_time_10_90: all-zero waveform");
  const double sign = w.values[gp] < 0.0 ? -1.0 : 1.0;
  const auto& v = w.values;
  const std::size_t n = v.size();

  std::size_t p = 0;
  while (sign * v[p] < 0.5 * global) ++p;
  while (p + 1 < n && sign * v[p + 1] >= sign * v[p]) ++p;
  const double peak = sign * v[p];

  // Last upward crossing of `level` before the peak.
  auto crossing = [&](double level) {
    std::size_t j = p;
    while (j > 0 && sign * v[j - 1] >= level) --j;
    if (j == 0) return 0.0;
    const double lo = sign * v[j - 1];
    const double hi = sign * v[j];
    const double frac = (level - lo) / (hi - lo);
    return w.timebase.time(j - 1) + frac * w.timebase.dt;
  };
  return crossing(0.9 * peak) - crossing(0.1 * peak);
}

double oscillation_index(const FieldWaveform& w, double f_cutoff) {
  w.validate();
  if (!(f_cutoff > 0.0)) throw DomainError("oscillation_index: f_cutoff must be > 0");
  if (w.timebase.duration() < 4.0 / f_cutoff) {
    throw DomainError("oscillation_index: record shorter than 4 / f_cutoff");
  }
  const std::size_t p = w.peak_index();
  if (w.values[p] == 0.0) throw DomainError("oscillation_index: all-zero waveform");
  const double sign = w.values[p] < 0.0 ? -1.0 : 1.0;

  Spectrum s = to_spectrum(w, kPad);
  for (std::size_t k = 0; k < s.bins.size(); ++k) {
    if (s.frequency(k) > f_cutoff) s.bins[k] = 0.0;
  }
  FieldWaveform env = to_waveform(s);

  std::vector<double> tail(env.values.begin() + static_cast<std::ptrdiff_t>(p), env.values.end());
  for (double& x : tail) x *= sign;
  tail = fit_nonincreasing(tail);
  for (std::size_t k = 0; k < tail.size(); ++k) env.values[p + k] = sign * tail[k];

  FieldWaveform residual = w;
  double env_energy = 0.0;
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    residual.values[k] = w.values[k] - env.values[k];
    env_energy += env.values[k] * env.values[k];
  }
  env_energy *= w.timebase.dt;
  if (!(env_energy > 0.0)) throw DomainError("oscillation_index: empty envelope");
  return energy_above(to_spectrum(residual, kPad), f_cutoff) / env_energy;
}

ComparisonReport compare(const FieldWaveform& a, const FieldWaveform& b,
                         const CompareOptions& opt) {
  a.validate();
  b.validate();
  if (a.component != b.component) {
    throw ConfigError("compare: component mismatch (" + std::string(to_string(a.component)) +
                      " vs " + std::string(to_string(b.component)) + ")");
  }
  const double span = std::min(a.timebase.duration(), b.timebase.duration());
  TimeWindow win = opt.window.value_or(TimeWindow{0.0, span});
  if (!(win.t_end > win.t_start)) throw ConfigError("compare: window end must follow its start");
  if (win.t_start >= span || win.t_end <= 0.0) {
    throw ConfigError("compare: window does not overlap both records");
  }
  win.t_start = std::max(win.t_start, 0.0);
  win.t_end = std::min(win.t_end, span);

  const double dt = std::max(a.timebase.dt, b.timebase.dt);
  // Tolerate rounding in t_end so that a window ending on a sample keeps it.
  const auto n = static_cast<std::size_t>(std::floor((win.t_end - win.t_start) / dt * (1.0 + 1e-12))) + 1;
  if (n < 2) throw ConfigError("compare: window holds fewer than two samples");
  const FieldWaveform ra = resample(a, win.t_start, dt, n);
  const FieldWaveform rb = resample(b, win.t_start, dt, n);

  const double peak_a = ra.peak_abs();
  if (!(peak_a > 0.0)) throw DomainError("compare: reference is zero over the window");

  ComparisonReport r;
  r.component = a.component;
  r.window = win;
  r.dt = dt;
  r.samples = n;
  r.f_cutoff = opt.f_cutoff;
  r.peak_relative_error = std::abs(peak_a - rb.peak_abs()) / peak_a;
  double se = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = ra.values[k] - rb.values[k];
    se += d * d;
  }
  r.nrmse = std::sqrt(se / static_cast<double>(n)) / peak_a;
  r.rise_time_a = rise_time_10_90(ra);
  r.rise_time_b = rb.peak_abs() > 0.0 ? rise_time_10_90(rb) : 0.0;
  r.oscillation_index_a = index_if_long_enough(ra, opt.f_cutoff);
  if (rb.peak_abs() > 0.0) r.oscillation_index_b = index_if_long_enough(rb, opt.f_cutoff);
  return r;
}

std::string report_json(const ComparisonReport& r) {
  nlohmann::json j = {
      {"component", std::string(to_string(r.component))},
      {"window", {r.window.t_start, r.window.t_end}},
      {"dt_s", r.dt},
      {"samples", r.samples},
      {"peak_relative_error", r.peak_relative_error},
      {"nrmse", r.nrmse},
      {"rise_time_a_s", r.rise_time_a},
      {"rise_time_b_s", r.rise_time_b},
      {"f_cutoff_hz", r.f_cutoff},
      {"oscillation_index_a", optional_number(r.oscillation_index_a)},
      {"oscillation_index_b", optional_number(r.oscillation_index_b)},
  };
  return j.dump(2) + "\n";
}

}  // namespace lemp::harness
