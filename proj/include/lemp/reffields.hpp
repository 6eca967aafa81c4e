#pragma once
/**
 * @file reffields.hpp
 * @brief Semi-analytical reference fields over perfectly conducting ground.
 *
 * The channel is split into short vertical current elements; the field of
 * each element and of its image below the ground plane is summed at the
 * observation point. Retarded currents are looked up by linear interpolation
 * in base-current tables sampled on an oversampled copy of the timebase, the
 * charge term uses the cumulative trapezoid of the same table.
 *
 * Segments are grouped into fixed-size blocks whose partial waveforms are
 * reduced in block order, so the output does not depend on the thread count.
 */

#include <optional>
#include <vector>

#include "lemp/channel.hpp"
#include "lemp/waveform.hpp"

namespace lemp {

struct ChannelQuadrature {
  double dz = 0.0;
  std::vector<double> midpoints;
};

struct ReferenceOptions {
  /// Segment length; defaults to min(lambda/50, v*dt) rounded so that an
  /// integer number of segments covers [0, H].
  std::optional<double> dz_seg;
  /// Base-current tables are sampled at dt/oversample.
  int oversample = 4;
  /// Include the image channel. Disabling it gives the direct free-space sum,
  /// used by the image-symmetry tests.
  bool image = true;
  /// 0 = OpenMP default.
  int threads = 0;
};

/// Midpoint segmentation of [0, H]. Throws ConfigError if dz >= H.
ChannelQuadrature quadrature_spec(const MtleModel& model, const Timebase& tb,
                                  std::optional<double> dz_seg = std::nullopt);

FieldWaveform ez_pec(const ObservationPoint& point, const MtleModel& model,
                     const Timebase& tb, const ReferenceOptions& opt = {});

FieldWaveform hphi_pec(const ObservationPoint& point, const MtleModel& model,
                       const Timebase& tb, const ReferenceOptions& opt = {});

/// Radial field; zero at z = 0 where direct and image terms cancel.
FieldWaveform er_pec(const ObservationPoint& point, const MtleModel& model,
                     const Timebase& tb, const ReferenceOptions& opt = {});

}  // namespace lemp
