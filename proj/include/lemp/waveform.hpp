#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lemp {

enum class FieldComponent { Ez, Ex, Er, Hphi };

std::string_view to_string(FieldComponent c);
FieldComponent component_from_string(std::string_view s);
/// "V/m" for electric components, "A/m" for Hphi.
std::string_view unit_of(FieldComponent c);

/// Horizontal distance r from the channel and height z above ground
/// (negative z is a depth below the surface).
struct ObservationPoint {
  double r = 0.0;
  double z = 0.0;

  bool operator==(const ObservationPoint&) const = default;
};

/// Uniform sampling starting at t = 0.
struct Timebase {
  double dt = 10e-9;
  std::size_t n_samples = 6000;

  void validate() const;
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double duration() const { return static_cast<double>(n_samples - 1) * dt; }

  bool operator==(const Timebase&) const = default;
};

struct FieldWaveform {
  FieldComponent component = FieldComponent::Ez;
  std::vector<double> values;
  Timebase timebase;
  ObservationPoint point;
  std::string scenario_id;

  /// Checks length(values) == n_samples and that every value is finite.
  void validate() const;
  double peak_abs() const;
  std::size_t peak_index() const;
  /// Linear interpolation at time t; zero outside the record.
  double at(double t) const;
};

}  // namespace lemp
