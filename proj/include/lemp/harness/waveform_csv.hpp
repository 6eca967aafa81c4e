#pragma once
/**
 * @file waveform_csv.hpp
 * @brief Waveform CSV exchange format.
 *
 *   # scenario_id=fig2_pec_1km
 *   # component=Ez
 *   # unit=V/m
 *   # dt_s=8.6656501992751e-09
 *   # r_m=1000
 *   # z_m=5
 *   t_s,value
 *   0.00000000e+00,0.00000000e+00
 *   ...
 *
 * UTF-8 with LF line endings. Samples are written with 9 significant digits;
 * metadata numbers use the shortest form that reads back exactly.
 */

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lemp/waveform.hpp"

namespace lemp::harness {

std::string format_waveform_csv(const FieldWaveform& w);

/// Throws ConfigError on a missing component, a unit that disagrees with the
/// component, malformed rows, or a time column that is not uniform from 0.
FieldWaveform parse_waveform_csv(std::string_view text);

void write_waveform_csv(const FieldWaveform& w, const std::filesystem::path& path);
FieldWaveform read_waveform_csv(const std::filesystem::path& path);

/// Plot-ready table: a time column and one column per named series, each
/// series linearly interpolated onto `time` (zero outside its record).
struct CsvColumn {
  std::string name;
  const FieldWaveform* wave = nullptr;
};
void write_bundle_csv(const Timebase& time, const std::vector<CsvColumn>& cols,
                      const std::filesystem::path& path);

}  // namespace lemp::harness
