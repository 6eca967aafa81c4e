#pragma once
/**
 * @file groundfx.hpp
 * @brief Lossy-ground corrections applied to perfectly-conducting-ground fields.
 *
 * Every filter is a per-frequency multiplication on a zero-padded spectrum
 * (see spectrum.hpp for the e^{+j omega t} convention). The complex relative
 * permittivity is eps_c = eps_r - j sigma / (omega eps0).
 *
 *   attenuation         E_z,lossy = F(p) E_z,PEC, Norton ground-wave function
 *                       F(p) = 1 - j sqrt(pi p) e^{-p} erfc(j sqrt(p)),
 *                       numerical distance p = -j (omega r / 2c) / eps_c
 *   wave_tilt           E_x = E_z / sqrt(eps_c)
 *   cooray_rubinstein   E_r,lossy = E_r,PEC - c mu0 H_phi,PEC / sqrt(eps_c)
 *   weyl_underground    E_x(d) = E_x(0) exp(-gamma d),
 *                       gamma = sqrt(j omega mu0 (sigma + j omega eps0 eps_r))
 *
 * DC policy: attenuation, cooray_rubinstein and weyl pass the DC bin,
 * wave_tilt zeroes it.
 */

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lemp/spectrum.hpp"
#include "lemp/waveform.hpp"

namespace lemp {

struct GroundModel {
  enum class Kind { PEC, Lossy };
  Kind kind = Kind::Lossy;
  double sigma = 1e-3;  // [S/m]
  double eps_r = 10.0;

  static GroundModel pec() { return {Kind::PEC, 0.0, 1.0}; }
  static GroundModel lossy(double sigma, double eps_r) { return {Kind::Lossy, sigma, eps_r}; }
  bool is_pec() const { return kind == Kind::PEC; }
  void validate() const;

  bool operator==(const GroundModel&) const = default;
};

using cplx = std::complex<double>;

cplx complex_permittivity(const GroundModel& g, double f);
cplx numerical_distance(const GroundModel& g, double f, double r);

/// Faddeeva function w(z) = exp(-z^2) erfc(-j z): Taylor series near the
/// origin, Laplace continued fraction elsewhere in the upper half plane,
/// reflection for Im z < 0.
cplx faddeeva_w(cplx z);

/// F(p) through the complex error function.
cplx norton_attenuation_erfc(cplx p);
/// F(p) from its large-|p| asymptotic series -sum (2n-1)!!/(2p)^n.
cplx norton_attenuation_asymptotic(cplx p);
/// F(p) with branch selection: exact 1 at p = 0, asymptotic series for
/// |p| > 25 or when the erfc branch is not finite.
cplx norton_attenuation(cplx p);

Spectrum attenuation_filter(const Spectrum& s, double r, const GroundModel& g);
Spectrum wave_tilt(const Spectrum& s, const GroundModel& g);
Spectrum cooray_rubinstein(const Spectrum& s_er, const Spectrum& s_hphi,
                           const GroundModel& g);
Spectrum weyl_underground(const Spectrum& s, double depth, const GroundModel& g);

struct FilterStep {
  enum class Kind { Attenuation, WaveTilt, CoorayRubinstein, Weyl };
  Kind kind = Kind::Attenuation;
  double depth = 0.0;  // Weyl only [m]

  static FilterStep attenuation() { return {Kind::Attenuation, 0.0}; }
  static FilterStep tilt() { return {Kind::WaveTilt, 0.0}; }
  static FilterStep cooray() { return {Kind::CoorayRubinstein, 0.0}; }
  static FilterStep weyl(double d) { return {Kind::Weyl, d}; }
};

/// Parses "attenuation,wave_tilt,weyl:10" style lists.
std::vector<FilterStep> parse_chain(std::string_view text);
std::string format_chain(const std::vector<FilterStep>& steps);

struct ChainOptions {
  int pad_factor = 4;
  /// Zero the output ahead of the input's first arrival.
  bool enforce_causality = true;
  /// Surface H_phi over PEC, required by a cooray_rubinstein step.
  std::optional<FieldWaveform> hphi;
  /// Horizontal distance for the attenuation step; defaults to the
  /// waveform's observation point.
  std::optional<double> r;
};

struct ChainDiagnostics {
  /// Largest imaginary part of the inverse transform, before it is dropped.
  double imaginary_residue = 0.0;
  std::size_t first_arrival = 0;
};

/// Rejects step orders that do not describe a physical pipeline, e.g. a
/// weyl step before the horizontal field exists.
void validate_chain(FieldComponent input, const std::vector<FilterStep>& steps,
                    bool have_hphi);

FieldWaveform apply_chain(const FieldWaveform& w, const std::vector<FilterStep>& steps,
                          const GroundModel& g, const ChainOptions& opt = {},
                          ChainDiagnostics* diag = nullptr);

}  // namespace lemp
