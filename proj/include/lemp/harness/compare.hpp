#pragma once
/**
 * @file compare.hpp
 * @brief Waveform comparison metrics and the oscillation (dispersion) index.
 */

#include <optional>
#include <string>

#include "lemp/waveform.hpp"

namespace lemp::harness {

/// 1/(2 * 0.33 us): half the inverse of the nominal base-current rise time.
inline constexpr double kDefaultOscillationCutoff = 1.5e6;

struct TimeWindow {
  double t_start = 0.0;
  double t_end = 0.0;

  bool operator==(const TimeWindow&) const = default;
};

/// `a` is the reference: both error metrics are normalised by max|a|.
struct ComparisonReport {
  FieldComponent component = FieldComponent::Ez;
  TimeWindow window;
  double dt = 0.0;  // common (coarser) sampling step
  std::size_t samples = 0;
  double peak_relative_error = 0.0;
  double nrmse = 0.0;
  double rise_time_a = 0.0;
  double rise_time_b = 0.0;
  double f_cutoff = kDefaultOscillationCutoff;
  /// Empty when the window is shorter than 4 / f_cutoff.
  std::optional<double> oscillation_index_a;
  std::optional<double> oscillation_index_b;
};

struct CompareOptions {
  /// Defaults to the span covered by both records.
  std::optional<TimeWindow> window;
  double f_cutoff = kDefaultOscillationCutoff;
};

/// Both records are resampled by linear interpolation onto the coarser of
/// the two steps, starting at window.t_start. Throws ConfigError on a
/// component mismatch or a window that misses either record.
ComparisonReport compare(const FieldWaveform& a, const FieldWaveform& b,
                         const CompareOptions& opt = {});

/// 10-90 % rise time of the first peak: the first local maximum of |w| that
/// reaches half the global peak. Threshold crossings are interpolated
/// linearly between the bracketing samples.
double rise_time_10_90(const FieldWaveform& w);

/// Share of spectral energy above f_cutoff left after removing a smooth
/// envelope, relative to the envelope energy.
///
/// The envelope is the ideal low-pass (f <= f_cutoff) of the record up to
/// the global peak of |w| and, after it, the best non-increasing fit (in the
/// peak's polarity, least squares) to that low-pass. Ringing that the
/// low-pass keeps after the peak therefore also counts as residual.
/// Throws DomainError for a record shorter than 4 / f_cutoff or a zero
/// record.
double oscillation_index(const FieldWaveform& w, double f_cutoff = kDefaultOscillationCutoff);

std::string report_json(const ComparisonReport& r);

}  // namespace lemp::harness
