#include "lemp/reffields.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"

namespace lemp {

namespace {

constexpr std::size_t kBlockSegments = 64;

enum class Kind { Ez, Hphi, Er };

// Base current, its derivative and its running charge on a fine grid.
struct BaseTables {
  double h = 0.0;
  std::vector<double> charge;
  std::vector<double> current;
  std::vector<double> derivative;
};

BaseTables make_tables(const HeidlerParams& p, const Timebase& tb, int oversample) {
  BaseTables t;
  t.h = tb.dt / oversample;
  const std::size_t n = (tb.n_samples - 1) * static_cast<std::size_t>(oversample) + 1;
  t.current.resize(n);
  t.derivative.resize(n);
  t.charge.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double time = static_cast<double>(k) * t.h;
    t.current[k] = heidler_current(time, p);
    t.derivative[k] = heidler_derivative(time, p);
  }
  t.charge[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    t.charge[k] = t.charge[k - 1] + 0.5 * t.h * (t.current[k - 1] + t.current[k]);
  }
  return t;
}

struct Coefficients {
  double charge;
  double current;
  double derivative;
};

Coefficients coefficients(Kind kind, double r, double dzv, double R) {
  const double R2 = R * R;
  const double R3 = R2 * R;
  switch (kind) {
    case Kind::Ez: {
      const double g = 2.0 * dzv * dzv - r * r;
      return {g / (R3 * R2), g / (kC0 * R2 * R2), -r * r / (kC0 * kC0 * R3)};
    }
    case Kind::Hphi:
      return {0.0, r / R3, r / (kC0 * R2)};
    case Kind::Er: {
      const double g = r * dzv;
      return {3.0 * g / (R3 * R2), 3.0 * g / (kC0 * R2 * R2), g / (kC0 * kC0 * R3)};
    }
  }
  return {0.0, 0.0, 0.0};
}

// Adds one retarded element into `out`.
void accumulate(std::vector<double>& out, const BaseTables& tab, int oversample,
                double delay, double weight, const Coefficients& k) {
  const double off = delay / tab.h;
  const auto i0 = static_cast<long long>(std::floor(off));
  const double f = off - static_cast<double>(i0);
  const long long os = oversample;
  const long long n_out = static_cast<long long>(out.size());
  const long long n_tab = static_cast<long long>(tab.current.size());
  long long n_begin = (i0 + 1 + os - 1) / os;
  if (n_begin < 0) n_begin = 0;
  const double kq = weight * k.charge;
  const double ki = weight * k.current;
  const double kd = weight * k.derivative;
  for (long long n = n_begin; n < n_out; ++n) {
    const long long j = n * os - i0 - 1;
    if (j + 1 >= n_tab) break;
    const double lo = f;
    const double hi = 1.0 - f;
    const double q = tab.charge[j] * lo + tab.charge[j + 1] * hi;
    const double c = tab.current[j] * lo + tab.current[j + 1] * hi;
    const double d = tab.derivative[j] * lo + tab.derivative[j + 1] * hi;
    out[n] += kq * q + ki * c + kd * d;
  }
}

FieldWaveform evaluate(Kind kind, const ObservationPoint& point, const MtleModel& model,
                       const Timebase& tb, const ReferenceOptions& opt) {
  model.validate();
  tb.validate();
  if (!(point.r > 0.0)) {
    throw DomainError("reference fields are singular on the channel axis (r = 0)");
  }
  if (point.z < 0.0) throw DomainError("reference fields need z >= 0");
  if (opt.oversample < 1) throw ConfigError("oversample must be >= 1");

  const ChannelQuadrature quad = quadrature_spec(model, tb, opt.dz_seg);
  const BaseTables tab = make_tables(model.base, tb, opt.oversample);
  const std::size_t n_seg = quad.midpoints.size();
  const std::size_t n_blocks = (n_seg + kBlockSegments - 1) / kBlockSegments;
  std::vector<std::vector<double>> partial(n_blocks);

  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long b = 0; b < static_cast<long long>(n_blocks); ++b) {
    std::vector<double> acc(tb.n_samples, 0.0);
    const std::size_t s_end = std::min<std::size_t>(n_seg, (b + 1) * kBlockSegments);
    for (std::size_t s = b * kBlockSegments; s < s_end; ++s) {
      const double zp = quad.midpoints[s];
      const double weight = quad.dz * std::exp(-zp / model.lambda_decay);
      const double front = zp / model.v_front;
      for (int img = 0; img < (opt.image ? 2 : 1); ++img) {
        const double zs = img ? -zp : zp;
        const double dzv = point.z - zs;
        const double R = std::hypot(point.r, dzv);
        accumulate(acc, tab, opt.oversample, R / kC0 + front, weight,
                   coefficients(kind, point.r, dzv, R));
      }
    }
    partial[b] = std::move(acc);
  }

  FieldWaveform w;
  w.timebase = tb;
  w.point = point;
  w.values.assign(tb.n_samples, 0.0);
  for (const auto& p : partial) {
    for (std::size_t n = 0; n < tb.n_samples; ++n) w.values[n] += p[n];
  }
  const double pre = kind == Kind::Hphi ? 1.0 / (4.0 * kPi) : 1.0 / (4.0 * kPi * kEps0);
  for (double& v : w.values) v *= pre;
  switch (kind) {
    case Kind::Ez: w.component = FieldComponent::Ez; break;
    case Kind::Hphi: w.component = FieldComponent::Hphi; break;
    case Kind::Er: w.component = FieldComponent::Er; break;
  }
  return w;
}

}  // namespace

ChannelQuadrature quadrature_spec(const MtleModel& model, const Timebase& tb,
                                  std::optional<double> dz_seg) {
  const double H = model.channel_height;
  double dz = dz_seg.value_or(std::min(model.lambda_decay / 50.0, model.v_front * tb.dt));
  if (!(dz > 0.0)) throw ConfigError("quadrature: segment length must be > 0");
  if (dz >= H) {
    throw ConfigError("quadrature: segment length " + std::to_string(dz) +
                      " m is not smaller than the channel height");
  }
  const auto n = static_cast<std::size_t>(std::ceil(H / dz - 1e-9));
  ChannelQuadrature q;
  q.dz = H / static_cast<double>(n);
  q.midpoints.resize(n);
  for (std::size_t k = 0; k < n; ++k) q.midpoints[k] = (static_cast<double>(k) + 0.5) * q.dz;
  return q;
}

FieldWaveform ez_pec(const ObservationPoint& point, const MtleModel& model,
                     const Timebase& tb, const ReferenceOptions& opt) {
  return evaluate(Kind::Ez, point, model, tb, opt);
}

FieldWaveform hphi_pec(const ObservationPoint& point, const MtleModel& model,
                       const Timebase& tb, const ReferenceOptions& opt) {
  return evaluate(Kind::Hphi, point, model, tb, opt);
}

FieldWaveform er_pec(const ObservationPoint& point, const MtleModel& model,
                     const Timebase& tb, const ReferenceOptions& opt) {
  return evaluate(Kind::Er, point, model, tb, opt);
}

}  // namespace lemp
