// Command-line front end. Exit codes: 0 ok / thresholds met, 1 thresholds
// violated or a run failed, 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lemp/errors.hpp"
#include "lemp/fdtd/simulation.hpp"
#include "lemp/groundfx.hpp"
#include "lemp/harness/bench.hpp"
#include "lemp/harness/compare.hpp"
#include "lemp/harness/experiment.hpp"
#include "lemp/harness/pipeline.hpp"
#include "lemp/harness/scenario.hpp"
#include "lemp/harness/waveform_csv.hpp"

namespace fs = std::filesystem;
using namespace lemp;
using namespace lemp::harness;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

std::string wave_name(const std::string& prefix, const FieldWaveform& w) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s_%s_r%g_z%g.csv", prefix.c_str(),
                std::string(to_string(w.component)).c_str(), w.point.r, w.point.z);
  return buf;
}

fdtd::Dimensionality parse_dim(const std::string& s) {
  if (s == "axi2d") return fdtd::Dimensionality::Axi2D;
  if (s == "cart3d") return fdtd::Dimensionality::Cart3D;
  throw ConfigError("--grid must be axi2d or cart3d");
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << body;
}

TimeWindow parse_window(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("--window expects t0,t1 in seconds");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--window expects t0,t1 in seconds");
  }
}

int cmd_reference(const std::string& scenario, const fs::path& out) {
  const Scenario sc = load_scenario(scenario);
  fs::create_directories(out);
  for (const auto& w : reference_waveforms(sc)) {
    const std::string name = wave_name("reference", w);
    write_waveform_csv(w, out / name);
    std::cout << name << "\n";
  }
  return kOk;
}

int cmd_filter(const fs::path& in, const std::string& scenario, const std::string& chain,
               const std::optional<fs::path>& hphi, const fs::path& out) {
  const Scenario sc = load_scenario(scenario);
  const FieldWaveform w = read_waveform_csv(in);
  ChainOptions opt;
  if (hphi) opt.hphi = read_waveform_csv(*hphi);
  ChainDiagnostics diag;
  FieldWaveform y = apply_chain(w, parse_chain(chain), sc.ground, opt, &diag);
  write_waveform_csv(y, out);
  std::cout << "peak " << y.peak_abs() << " " << unit_of(y.component) << ", imaginary residue "
            << diag.imaginary_residue << "\n";
  return kOk;
}

int cmd_fdtd(const std::string& scenario, const std::string& grid, const fs::path& out, int threads) {
  const Scenario sc = load_scenario(scenario);
  const fdtd::Dimensionality dim = parse_dim(grid);
  fs::create_directories(out);
  const FdtdRun run = run_fdtd(sc, dim, threads);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& w : run.waves) {
    const std::string name = wave_name("fdtd", w);
    write_waveform_csv(w, out / name);
    files.push_back(name);
  }
  nlohmann::json m = {{"scenario_id", sc.id},
                      {"dimensionality", grid},
                      {"dx_m", run.grid.dx},
                      {"extents_m", run.grid.extents},
                      {"ground_depth_m", run.grid.ground_depth},
                      {"cfl_factor", run.grid.cfl_factor},
                      {"dt_s", run.dt},
                      {"steps", run.steps},
                      {"cells", run.grid.cell_count()},
                      {"pml_thickness_cells", run.pml.thickness},
                      {"memory_estimate_bytes", run.memory_estimate},
                      {"allocated_bytes", run.allocated_bytes},
                      {"init_time_s", run.init_time},
                      {"seconds_per_iteration", run.seconds_per_iteration()},
                      {"files", files}};
  write_text(out / "manifest.json", m.dump(2) + "\n");
  std::cout << run.steps << " steps, " << run.seconds_per_iteration() << " s/iteration\n";
  return kOk;
}

int cmd_compare(const fs::path& a, const fs::path& b, const std::string& window,
                const std::optional<fs::path>& report, std::optional<double> max_nrmse,
                std::optional<double> max_peak) {
  CompareOptions opt;
  if (!window.empty()) opt.window = parse_window(window);
  const ComparisonReport r = compare(read_waveform_csv(a), read_waveform_csv(b), opt);
  const std::string body = report_json(r);
  if (report) write_text(*report, body);
  std::cout << body;
  bool ok = true;
  if (max_nrmse && !(r.nrmse < *max_nrmse)) ok = false;
  if (max_peak && !(r.peak_relative_error < *max_peak)) ok = false;
  return ok ? kOk : kViolated;
}

int cmd_bench(const std::string& scenario, const std::string& grid, std::size_t iterations,
              std::size_t warmup, const std::optional<fs::path>& report, int threads) {
  const Scenario sc = load_scenario(scenario);
  const fdtd::Dimensionality dim = parse_dim(grid);
  fdtd::GridSpec g = sc.grid && sc.grid->dimensionality == dim ? *sc.grid : default_grid(sc, dim);
  BenchOptions opt;
  opt.iterations = iterations;
  opt.warmup = warmup;
  opt.threads = threads;
  const PerfReport r = bench(g, sc.pml.value_or(fdtd::CpmlProfile{}), sc, opt);
  const std::string body = perf_json(r);
  if (report) write_text(*report, body);
  std::cout << body;
  return kOk;
}

int cmd_experiment(const std::string& name, const fs::path& out, int threads) {
  ExperimentOptions opt;
  opt.threads = threads;
  const ExperimentResult res = run_experiment(name, out, opt);
  for (const auto& m : res.metrics) std::cout << "     " << m.name << " = " << m.value << "\n";
  for (const auto& c : res.checks) std::cout << format_check(c) << "\n";
  std::cout << (res.passed() ? "experiment passed" : "experiment failed") << " (" << res.dir.string()
            << ")\n";
  return res.passed() ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightning return-stroke fields: reference engine, FDTD solver and validation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = default)");

  std::string scenario, grid = "axi2d", chain, window, preset;
  fs::path out, in, a, b;
  std::optional<fs::path> report, hphi;
  std::optional<double> max_nrmse, max_peak;
  std::size_t iterations = 20, warmup = 3;

  auto* ref = app.add_subcommand("reference", "Reference waveforms for every observer");
  ref->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  ref->add_option("--out", out, "Output directory")->required();

  auto* fil = app.add_subcommand("filter", "Apply a lossy-ground filter chain to a waveform");
  fil->add_option("--in", in, "Input waveform CSV")->required()->check(CLI::ExistingFile);
  fil->add_option("--scenario", scenario, "Scenario file (ground parameters)")->required()->check(CLI::ExistingFile);
  fil->add_option("--chain", chain, "e.g. attenuation,wave_tilt,weyl:10")->required();
  fil->add_option("--hphi", hphi, "Surface Hphi CSV for a cooray_rubinstein step");
  fil->add_option("--out", out, "Output waveform CSV")->required();

  auto* fd = app.add_subcommand("fdtd", "Run the FDTD solver on a scenario");
  fd->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  fd->add_option("--grid", grid, "axi2d or cart3d");
  fd->add_option("--out", out, "Output directory")->required();

  auto* cmp = app.add_subcommand("compare", "Compare two waveform CSVs (a is the reference)");
  cmp->add_option("--a", a, "Reference CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--b", b, "Test CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--window", window, "t0,t1 in seconds");
  cmp->add_option("--report", report, "Report JSON file");
  cmp->add_option("--max-nrmse", max_nrmse, "Exit 1 unless nrmse is below this");
  cmp->add_option("--max-peak-error", max_peak, "Exit 1 unless the peak error is below this");

  auto* ben = app.add_subcommand("bench", "Time solver iterations");
  ben->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  ben->add_option("--grid", grid, "axi2d or cart3d");
  ben->add_option("--iterations", iterations, "Timed iterations (>= 10)");
  ben->add_option("--warmup", warmup, "Warm-up iterations (>= 3)");
  ben->add_option("--report", report, "Report JSON file");

  auto* exp = app.add_subcommand("experiment", "Run a named validation experiment");
  exp->add_option("preset", preset, "Preset name")->required();
  exp->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ref) return cmd_reference(scenario, out);
    if (*fil) return cmd_filter(in, scenario, chain, hphi, out);
    if (*fd) return cmd_fdtd(scenario, grid, out, threads);
    if (*cmp) return cmd_compare(a, b, window, report, max_nrmse, max_peak);
    if (*ben) return cmd_bench(scenario, grid, iterations, warmup, report, threads);
    if (*exp) return cmd_experiment(preset, out, threads);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InsufficientMemory& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kViolated;
  }
  return kUsage;
}
