#pragma once
/**
 * @file scenario.hpp
 * @brief Scenario files: the single input shared by the reference engine and
 * the FDTD solver.
 *
 * JSON key tree:
 *
 *   id                       text, default "scenario"
 *   mtle      { lambda_m, v_mps, height_m,
 *               heidler { i1_a, tau11_s, tau12_s, n1, i2_a, tau21_s, tau22_s, n2 } }
 *   ground    { kind: "lossy" | "pec", sigma_spm, eps_r }
 *   observers [ { r_m, z_m }, ... ]          required, non-empty
 *   timebase  { dt_s, n }
 *   grid      { dimensionality: "axi2d" | "cart3d", dx_m, extents_m, ground_depth_m,
 *               cfl_factor, cfl_dims, allow_unsafe_cfl, n_steps,
 *               precision: "single" | "double", source_x_m, source_y_m }   optional
 *   pml       { thickness_cells (int or 6 ints), m_order, kappa_max,
 *               alpha_max_spm, sigma_ratio }                               optional
 *
 * Omitted fields take the library defaults. Unknown keys, type errors,
 * invariant violations and contradictions (a "pec" ground that also gives
 * sigma_spm or eps_r) raise ConfigError naming the key path.
 */

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lemp/channel.hpp"
#include "lemp/fdtd/grid.hpp"
#include "lemp/groundfx.hpp"
#include "lemp/waveform.hpp"

namespace lemp::harness {

struct Scenario {
  std::string id = "scenario";
  MtleModel mtle;
  GroundModel ground;
  std::vector<ObservationPoint> observers;
  Timebase timebase;
  std::optional<fdtd::GridSpec> grid;
  std::optional<fdtd::CpmlProfile> pml;

  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(std::string_view json_text);
/// Pretty-printed JSON with every field written out.
std::string dump_scenario(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace lemp::harness
