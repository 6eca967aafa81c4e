#pragma once
/**
 * @file spectrum.hpp
 * @brief One-sided spectra of real waveforms (FFTW backed).
 *
 * Time dependence is e^{+j omega t} throughout the project: the forward
 * transform is X(f) = sum_n x_n e^{-j 2 pi f t_n} dt, so X approximates the
 * continuous Fourier integral and X(0) is the time integral of the record.
 */

#include <complex>
#include <cstddef>
#include <vector>

#include "lemp/waveform.hpp"

namespace lemp {

enum class SignConvention { PositiveJOmegaT };

struct Spectrum {
  // bins[0] is DC. The padded length is odd, so there is no Nyquist bin.
  std::vector<std::complex<double>> bins;
  double df = 0.0;
  std::size_t n_fft = 0;
  FieldWaveform source;  // metadata of the originating record; values empty
  SignConvention convention = SignConvention::PositiveJOmegaT;

  double frequency(std::size_t k) const { return static_cast<double>(k) * df; }
  /// sum |x_n|^2 dt of the padded record, computed from the bins.
  double energy() const;
  bool same_grid(const Spectrum& other) const;
};

/// Zero-pads to pad_factor * n samples, rounded up to odd (pad_factor >= 2),
/// and transforms.
Spectrum to_spectrum(const FieldWaveform& w, int pad_factor = 4);

/// Inverse transform truncated back to the original record length.
FieldWaveform to_waveform(const Spectrum& s);

/// Energy sum |x_n|^2 dt of a waveform.
double energy(const FieldWaveform& w);

}  // namespace lemp
