#include "lemp/groundfx.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"

namespace lemp {

namespace {

constexpr cplx kJ{0.0, 1.0};
const double kSqrtPi = std::sqrt(kPi);

// Taylor series w(z) = e^{-z^2} (1 + (2jz/sqrt(pi)) sum z^{2n} / (n! (2n+1))).
cplx faddeeva_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = 1.0;  // z^{2n}/n!
  cplx sum = 1.0;
  for (int n = 1; n < 400; ++n) {
    term *= z2 / static_cast<double>(n);
    const cplx add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return std::exp(-z2) * (1.0 + 2.0 * kJ * z / kSqrtPi * sum);
}

// Laplace continued fraction, valid for Im z > 0:
// w(z) = (j/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))).
cplx faddeeva_cf(cplx z, int depth) {
  cplx tail = z;
  for (int k = depth; k >= 1; --k) tail = z - (0.5 * k) / tail;
  return kJ / (kSqrtPi * tail);
}

cplx faddeeva_cf_converged(cplx z) {
  int depth = 64;
  cplx prev = faddeeva_cf(z, depth);
  while (depth < 65536) {
    depth *= 2;
    const cplx next = faddeeva_cf(z, depth);
    if (std::abs(next - prev) <= 1e-15 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

void require_lossy(const GroundModel& g, const char* who) {
  g.validate();
  if (g.is_pec()) throw ConfigError(std::string(who) + ": needs a lossy ground model");
}

Spectrum map_bins(const Spectrum& s, auto&& fn) {
  Spectrum out = s;
  for (std::size_t k = 0; k < out.bins.size(); ++k) out.bins[k] = fn(k, out.bins[k]);
  return out;
}

std::size_t first_arrival(const FieldWaveform& w) {
  const double peak = w.peak_abs();
  std::size_t k = 0;
  while (k < w.values.size() && std::abs(w.values[k]) <= 1e-9 * peak) ++k;
  return k;
}

FieldWaveform differenced(const FieldWaveform& w) {
  FieldWaveform d = w;
  for (std::size_t k = d.values.size(); k-- > 1;) d.values[k] -= d.values[k - 1];
  return d;
}

}  // namespace

void GroundModel::validate() const {
  if (kind == Kind::PEC) return;
  if (!(sigma >= 0.0)) throw ConfigError("ground: sigma must be >= 0");
  if (!(eps_r >= 1.0)) throw ConfigError("ground: eps_r must be >= 1");
}

cplx complex_permittivity(const GroundModel& g, double f) {
  if (!(f > 0.0)) throw DomainError("complex_permittivity: f must be > 0");
  if (g.is_pec()) throw ConfigError("complex_permittivity: PEC ground has no permittivity");
  return {g.eps_r, -g.sigma / (2.0 * kPi * f * kEps0)};
}

cplx numerical_distance(const GroundModel& g, double f, double r) {
  const double omega = 2.0 * kPi * f;
  return -kJ * (omega * r / (2.0 * kC0)) / complex_permittivity(g, f);
}

cplx faddeeva_w(cplx z) {
  if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
  const cplx z2 = z * z;
  // The series loses about |z|^2 - Re(z^2) digits to cancellation.
  const double loss = std::norm(z) - z2.real();
  if (std::norm(z) <= 30.0 && loss <= 12.0) return faddeeva_series(z);
  if (z.imag() == 0.0 && std::abs(z.real()) < 6.0) return faddeeva_series(z);
  return faddeeva_cf_converged(z);
}

cplx norton_attenuation_erfc(cplx p) {
  if (p == cplx{0.0, 0.0}) return 1.0;
  const cplx root = std::sqrt(p);
  // e^{-p} erfc(j sqrt p) = w(-sqrt p)
  return 1.0 - kJ * std::sqrt(kPi * p) * faddeeva_w(-root);
}

cplx norton_attenuation_asymptotic(cplx p) {
  cplx sum = 0.0;
  cplx term = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n < 60; ++n) {
    term *= static_cast<double>(2 * n - 1) / (2.0 * p);
    const double mag = std::abs(term);
    if (mag > best) break;  // optimal truncation
    best = mag;
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return -sum;
}

cplx norton_attenuation(cplx p) {
  if (p == cplx{0.0, 0.0}) return 1.0;
  if (std::abs(p) > 25.0) return norton_attenuation_asymptotic(p);
  const cplx f = norton_attenuation_erfc(p);
  if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
    return norton_attenuation_asymptotic(p);
  }
  return f;
}

Spectrum attenuation_filter(const Spectrum& s, double r, const GroundModel& g) {
  require_lossy(g, "attenuation_filter");
  if (!(r > 0.0)) throw DomainError("attenuation_filter: r must be > 0");
  return map_bins(s, [&](std::size_t k, cplx v) {
    if (k == 0) return v;
    return v * norton_attenuation(numerical_distance(g, s.frequency(k), r));
  });
}

Spectrum wave_tilt(const Spectrum& s, const GroundModel& g) {
  require_lossy(g, "wave_tilt");
  return map_bins(s, [&](std::size_t k, cplx v) {
    if (k == 0) return cplx{0.0, 0.0};
    return v / std::sqrt(complex_permittivity(g, s.frequency(k)));
  });
}

Spectrum cooray_rubinstein(const Spectrum& s_er, const Spectrum& s_hphi,
                           const GroundModel& g) {
  require_lossy(g, "cooray_rubinstein");
  if (!s_er.same_grid(s_hphi)) {
    throw ConfigError("cooray_rubinstein: E_r and H_phi spectra are on different grids");
  }
  return map_bins(s_er, [&](std::size_t k, cplx v) {
    if (k == 0) return v;
    return v - kC0 * kMu0 * s_hphi.bins[k] / std::sqrt(complex_permittivity(g, s_er.frequency(k)));
  });
}

Spectrum weyl_underground(const Spectrum& s, double depth, const GroundModel& g) {
  require_lossy(g, "weyl_underground");
  if (depth < 0.0) throw DomainError("weyl_underground: depth must be >= 0");
  if (g.sigma < 1e-3) {
    std::clog << "warning: weyl_underground is an approximation for sigma >= 1 mS/m (got "
              << g.sigma << " S/m)\n";
  }
  return map_bins(s, [&](std::size_t k, cplx v) {
    if (k == 0 || depth == 0.0) return v;
    const double omega = 2.0 * kPi * s.frequency(k);
    cplx gamma = std::sqrt(kJ * omega * kMu0 * (g.sigma + kJ * omega * kEps0 * g.eps_r));
    if (gamma.real() < 0.0) gamma = -gamma;
    return v * std::exp(-gamma * depth);
  });
}

std::vector<FilterStep> parse_chain(std::string_view text) {
  std::vector<FilterStep> steps;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "attenuation") {
      steps.push_back(FilterStep::attenuation());
    } else if (item == "wave_tilt") {
      steps.push_back(FilterStep::tilt());
    } else if (item == "cooray_rubinstein") {
      steps.push_back(FilterStep::cooray());
    } else if (item.rfind("weyl:", 0) == 0) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(item.substr(5), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size() - 5) {
        throw ConfigError("chain: bad weyl depth in '" + item + "'");
      }
      steps.push_back(FilterStep::weyl(d));
    } else {
      throw ConfigError("chain: unknown step '" + item + "'");
    }
  }
  return steps;
}

std::string format_chain(const std::vector<FilterStep>& steps) {
  std::ostringstream os;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) os << ',';
    switch (steps[i].kind) {
      case FilterStep::Kind::Attenuation: os << "attenuation"; break;
      case FilterStep::Kind::WaveTilt: os << "wave_tilt"; break;
      case FilterStep::Kind::CoorayRubinstein: os << "cooray_rubinstein"; break;
      case FilterStep::Kind::Weyl: os << "weyl:" << steps[i].depth; break;
    }
  }
  return os.str();
}

void validate_chain(FieldComponent input, const std::vector<FilterStep>& steps,
                    bool have_hphi) {
  // Quantity carried along the pipeline.
  enum class Q { VerticalPec, VerticalLossy, MagneticPec, MagneticLossy, RadialPec,
                 HorizontalSurface, HorizontalDepth };
  Q q{};
  switch (input) {
    case FieldComponent::Ez: q = Q::VerticalPec; break;
    case FieldComponent::Hphi: q = Q::MagneticPec; break;
    case FieldComponent::Er: q = Q::RadialPec; break;
    case FieldComponent::Ex: q = Q::HorizontalSurface; break;
  }
  for (const auto& s : steps) {
    switch (s.kind) {
      case FilterStep::Kind::Attenuation:
        if (q == Q::VerticalPec) q = Q::VerticalLossy;
        else if (q == Q::MagneticPec) q = Q::MagneticLossy;
        else throw ConfigError("chain: attenuation applies to a PEC-ground E_z or H_phi only");
        break;
      case FilterStep::Kind::WaveTilt:
        if (q != Q::VerticalPec && q != Q::VerticalLossy) {
          throw ConfigError("chain: wave_tilt needs a vertical field input");
        }
        q = Q::HorizontalSurface;
        break;
      case FilterStep::Kind::CoorayRubinstein:
        if (q != Q::RadialPec) throw ConfigError("chain: cooray_rubinstein needs an E_r input");
        if (!have_hphi) throw ConfigError("chain: cooray_rubinstein needs the H_phi record");
        q = Q::HorizontalSurface;
        break;
      case FilterStep::Kind::Weyl:
        if (q != Q::HorizontalSurface) {
          throw ConfigError("chain: weyl must follow a step producing the surface horizontal field");
        }
        if (s.depth < 0.0) throw ConfigError("chain: weyl depth must be >= 0");
        q = Q::HorizontalDepth;
        break;
    }
  }
}

FieldWaveform apply_chain(const FieldWaveform& w, const std::vector<FilterStep>& steps,
                          const GroundModel& g, const ChainOptions& opt,
                          ChainDiagnostics* diag) {
  w.validate();
  validate_chain(w.component, steps, opt.hphi.has_value());
  if (!steps.empty()) require_lossy(g, "apply_chain");

  // The chain filters the first difference and integrates the result. This
  // treats the record as holding its last value instead of dropping to zero,
  // so the truncation edge does not ring back into the window.
  Spectrum s = to_spectrum(differenced(w), opt.pad_factor);
  FieldComponent comp = w.component;
  ObservationPoint point = w.point;
  const double r = opt.r.value_or(w.point.r);
  for (const auto& step : steps) {
    switch (step.kind) {
      case FilterStep::Kind::Attenuation:
        s = attenuation_filter(s, r, g);
        break;
      case FilterStep::Kind::WaveTilt:
        s = wave_tilt(s, g);
        comp = FieldComponent::Ex;
        break;
      case FilterStep::Kind::CoorayRubinstein:
        s = cooray_rubinstein(s, to_spectrum(differenced(*opt.hphi), opt.pad_factor), g);
        comp = FieldComponent::Ex;
        break;
      case FilterStep::Kind::Weyl:
        s = weyl_underground(s, step.depth, g);
        point.z = -step.depth;
        break;
    }
  }

  FieldWaveform out = to_waveform(s);
  double acc = 0.0;
  for (double& v : out.values) v = (acc += v);
  out.component = comp;
  out.point = point;

  // A one-sided spectrum has a real-valued inverse except for the imaginary
  // parts of the DC and Nyquist bins, which contribute |Im X| df per sample
  // (accumulated over the record by the integration).
  const double residue =
      (std::abs(s.bins.front().imag()) +
       (s.n_fft % 2 == 0 ? std::abs(s.bins.back().imag()) : 0.0)) * s.df *
      static_cast<double>(out.values.size());

  // Earliest arrival over all inputs (E_r over PEC vanishes on the surface,
  // leaving H_phi to carry the signal).
  std::size_t arrival = first_arrival(w);
  if (opt.hphi) arrival = std::min(arrival, first_arrival(*opt.hphi));
  if (opt.enforce_causality) {
    for (std::size_t k = 0; k < arrival && k < out.values.size(); ++k) out.values[k] = 0.0;
  }
  if (diag) {
    diag->imaginary_residue = residue;
    diag->first_arrival = arrival;
  }
  return out;
}

}  // namespace lemp
