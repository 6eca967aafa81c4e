#include "lemp/spectrum.hpp"

#include <fftw3.h>

#include <mutex>

#include "lemp/errors.hpp"

namespace lemp {

namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double Spectrum::energy() const {
  if (bins.empty() || n_fft == 0) return 0.0;
  // bins carry a factor dt; sum |x|^2 dt = df * (|X0|^2 + 2 sum |Xk|^2 + |X_N/2|^2)
  double sum = std::norm(bins.front());
  const std::size_t last = bins.size() - 1;
  for (std::size_t k = 1; k < last; ++k) sum += 2.0 * std::norm(bins[k]);
  sum += (n_fft % 2 == 0) ? std::norm(bins[last]) : 2.0 * std::norm(bins[last]);
  return sum * df;
}

bool Spectrum::same_grid(const Spectrum& other) const {
  return n_fft == other.n_fft && bins.size() == other.bins.size() && df == other.df &&
         source.timebase == other.source.timebase;
}

double energy(const FieldWaveform& w) {
  double sum = 0.0;
  for (double v : w.values) sum += v * v;
  return sum * w.timebase.dt;
}

Spectrum to_spectrum(const FieldWaveform& w, int pad_factor) {
  w.validate();
  if (pad_factor < 2) throw ConfigError("to_spectrum: pad_factor must be >= 2");
  // Odd transform length: there is no Nyquist bin, so any filter that keeps
  // the DC bin real yields an exactly real inverse.
  std::size_t n = static_cast<std::size_t>(pad_factor) * w.values.size();
  if (n % 2 == 0) ++n;
  std::vector<double> in(n, 0.0);
  std::copy(w.values.begin(), w.values.end(), in.begin());

  Spectrum s;
  s.n_fft = n;
  s.df = 1.0 / (static_cast<double>(n) * w.timebase.dt);
  s.bins.resize(n / 2 + 1);
  s.source = w;
  s.source.values.clear();

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(s.bins.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (auto& b : s.bins) b *= w.timebase.dt;
  return s;
}

FieldWaveform to_waveform(const Spectrum& s) {
  if (s.n_fft == 0 || s.bins.size() != s.n_fft / 2 + 1) {
    throw ConfigError("to_waveform: malformed spectrum");
  }
  std::vector<std::complex<double>> bins = s.bins;  // c2r destroys its input
  std::vector<double> out(s.n_fft);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(s.n_fft),
                                reinterpret_cast<fftw_complex*>(bins.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  FieldWaveform w = s.source;
  const std::size_t n = w.timebase.n_samples;
  const double scale = s.df;  // 1 / (N dt)
  w.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) w.values[k] = out[k] * scale;
  return w;
}

}  // namespace lemp
