#include "lemp/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "lemp/errors.hpp"

namespace lemp {

std::string_view to_string(FieldComponent c) {
  switch (c) {
    case FieldComponent::Ez: return "Ez";
    case FieldComponent::Ex: return "Ex";
    case FieldComponent::Er: return "Er";
    case FieldComponent::Hphi: return "Hphi";
  }
  return "?";
}

FieldComponent component_from_string(std::string_view s) {
  if (s == "Ez") return FieldComponent::Ez;
  if (s == "Ex") return FieldComponent::Ex;
  if (s == "Er") return FieldComponent::Er;
  if (s == "Hphi") return FieldComponent::Hphi;
  throw ConfigError("unknown field component '" + std::string(s) + "'");
}

std::string_view unit_of(FieldComponent c) {
  return c == FieldComponent::Hphi ? "A/m" : "V/m";
}

void Timebase::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("timebase: dt must be > 0");
  if (n_samples < 2) throw ConfigError("timebase: n_samples must be >= 2");
}

void FieldWaveform::validate() const {
  timebase.validate();
  if (values.size() != timebase.n_samples) {
    throw ConfigError("waveform: sample count does not match timebase");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("waveform: non-finite sample");
  }
}

double FieldWaveform::peak_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::size_t FieldWaveform::peak_index() const {
  std::size_t k = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i]) > std::abs(values[k])) k = i;
  }
  return k;
}

double FieldWaveform::at(double t) const {
  if (values.empty() || t < 0.0) return 0.0;
  const double s = t / timebase.dt;
  const auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= values.size()) return i + 1 == values.size() ? values.back() : 0.0;
  const double f = s - static_cast<double>(i);
  return values[i] * (1.0 - f) + values[i + 1] * f;
}

}  // namespace lemp
