#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lemp/channel.hpp"
#include "lemp/constants.hpp"
#include "lemp/errors.hpp"
#include "lemp/harness/bench.hpp"
#include "lemp/harness/compare.hpp"
#include "lemp/harness/experiment.hpp"
#include "lemp/harness/pipeline.hpp"
#include "lemp/harness/scenario.hpp"
#include "lemp/harness/waveform_csv.hpp"
#include "lemp/reffields.hpp"

using namespace lemp;
using namespace lemp::harness;
namespace fs = std::filesystem;

namespace {

FieldWaveform sampled(double dt, std::size_t n, double (*f)(double),
                      FieldComponent c = FieldComponent::Ez) {
  FieldWaveform w;
  w.component = c;
  w.timebase = {dt, n};
  w.point = {1000.0, 0.0};
  w.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) w.values[k] = f(w.timebase.time(k));
  return w;
}

double base_current(double t) { return heidler_current(t, HeidlerParams::typical_subsequent()); }

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::string error_of(const std::string& json) {
  try {
    parse_scenario(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({"observers": [{"r_m": 1000, "z_m": 0}]})";

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lemp_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("omitted scenario sections take the default stroke and ground") {
    const Scenario s = parse_scenario(R"({"ground": {}, "observers": [{"r_m": 1000, "z_m": 0}]})");
    CHECK(s.id == "scenario");
    CHECK_FALSE(s.ground.is_pec());
    CHECK(s.ground.sigma == 1e-3);
    CHECK(s.ground.eps_r == 10.0);
    CHECK(s.mtle.lambda_decay == 2000.0);
    CHECK(s.mtle.v_front == 1.5e8);
    CHECK(s.mtle.base == HeidlerParams::typical_subsequent());
    CHECK_FALSE(s.grid.has_value());
    CHECK_FALSE(s.pml.has_value());
    REQUIRE(s.observers.size() == 1);
    CHECK(s.observers[0] == ObservationPoint{1000.0, 0.0});
  }

  TEST_CASE("scenario errors name the offending key") {
    CHECK(error_of(R"({"ground": {"kind": "pec", "sigma_spm": 1}, "observers": [{"r_m": 1, "z_m": 0}]})")
              .find("ground.sigma_spm") != std::string::npos);
    CHECK(error_of(R"({"mtle": {"heidler": {"i1": 5}}, "observers": [{"r_m": 1, "z_m": 0}]})")
              .find("mtle.heidler.i1") != std::string::npos);
    CHECK(error_of(R"({"observers": [{"r_m": 1}]})").find("observers[0].z_m") != std::string::npos);
    CHECK(error_of(R"({"timebase": {"dt_s": "fast"}, "observers": [{"r_m": 1, "z_m": 0}]})")
              .find("timebase.dt_s") != std::string::npos);
    CHECK(error_of(R"({"ground": {"sigma_spm": -1}, "observers": [{"r_m": 1, "z_m": 0}]})")
              .find("ground") != std::string::npos);
    CHECK(error_of("{}").find("observers") != std::string::npos);
    CHECK(error_of(R"({"observers": []})").find("observers") != std::string::npos);
    CHECK_FALSE(error_of("{ not json").empty());
    CHECK_FALSE(error_of(R"({"grid": {"dimensionality": "4d"}, "observers": [{"r_m": 1, "z_m": 0}]})").empty());
  }

  TEST_CASE("scenario round-trips through its file") {
    Scenario s = parse_scenario(kMinimal);
    s.id = "round-trip";
    s.mtle.channel_height = 5000.0;
    s.mtle.base = HeidlerParams::make(9e3, 0.2e-6, 2e-6, 2.0, 5e3, 2e-6, 200e-6, 3.0);
    s.ground = GroundModel::lossy(3e-3, 12.0);
    s.observers.push_back({30e3, -10.0});
    s.timebase = {7.5e-9, 1234};
    fdtd::GridSpec g;
    g.dimensionality = fdtd::Dimensionality::Cart3D;
    g.dx = 25.0;
    g.extents = {1000, 500, 750};
    g.ground_depth = 250;
    g.cfl_dims = 3;
    g.precision = fdtd::Precision::Double;
    g.source_x = 300.0;
    s.grid = g;
    fdtd::CpmlProfile p;
    p.thickness = {4, 8, 8, 8, 10, 12};
    p.alpha_max = 0.01;
    s.pml = p;

    const std::string text = dump_scenario(s);
    CHECK(parse_scenario(text) == s);
    CHECK(dump_scenario(parse_scenario(text)) == text);

    const fs::path dir = scratch_dir("scenario");
    save_scenario(s, dir / "s.json");
    CHECK(load_scenario(dir / "s.json") == s);
    CHECK_THROWS_AS(load_scenario(dir / "missing.json"), ConfigError);
  }

  TEST_CASE("waveform CSV layout") {
    FieldWaveform w;
    w.component = FieldComponent::Hphi;
    w.scenario_id = "csv";
    w.point = {1000.0, 5.0};
    w.timebase = {1e-8, 3};
    w.values = {0.0, 1.5, -2.25e-3};
    const std::string expected =
        "# scenario_id=csv\n"
        "# component=Hphi\n"
        "# unit=A/m\n"
        "# dt_s=1e-08\n"
        "# r_m=1000\n"
        "# z_m=5\n"
        "t_s,value\n"
        "0.00000000e+00,0.00000000e+00\n"
        "1.00000000e-08,1.50000000e+00\n"
        "2.00000000e-08,-2.25000000e-03\n";
    CHECK(format_waveform_csv(w) == expected);
  }

  TEST_CASE("waveform CSV round trip and rejection") {
    const auto ez = ez_pec({1e3, 0.0}, MtleModel{}, Timebase{8.6656501992751e-09, 500});
    FieldWaveform w = ez;
    w.scenario_id = "trip";
    const FieldWaveform back = parse_waveform_csv(format_waveform_csv(w));
    CHECK(back.component == w.component);
    CHECK(back.timebase == w.timebase);
    CHECK(back.point == w.point);
    CHECK(back.scenario_id == "trip");
    for (std::size_t k = 0; k < w.values.size(); ++k) {
      REQUIRE(back.values[k] == doctest::Approx(w.values[k]).epsilon(1e-8).scale(1e-300));
    }
    CHECK(format_waveform_csv(back) == format_waveform_csv(w));

    const std::string good = format_waveform_csv(w);
    std::string skewed = "# component=Ez\n# unit=V/m\n# dt_s=1e-8\nt_s,value\n0,1\n1e-8,2\n2.5e-8,3\n";
    CHECK_THROWS_AS(parse_waveform_csv(skewed), ConfigError);
    CHECK_THROWS_AS(parse_waveform_csv("# unit=V/m\nt_s,value\n0,1\n1e-8,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_waveform_csv("# component=Ez\n# unit=A/m\nt_s,value\n0,1\n1e-8,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_waveform_csv("# component=Ez\nt_s,value\n0,1\n1e-8,abc\n"), ConfigError);

    const fs::path dir = scratch_dir("csv");
    write_waveform_csv(w, dir / "w.csv");
    std::ifstream in(dir / "w.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == good);
    CHECK(read_waveform_csv(dir / "w.csv").values.size() == w.values.size());
  }

  TEST_CASE("comparing a waveform with itself gives zero errors") {
    const auto a = sampled(10e-9, 2001, base_current);
    const auto r = compare(a, a);
    CHECK(r.peak_relative_error == 0.0);
    CHECK(r.nrmse == 0.0);
    CHECK(r.rise_time_a == r.rise_time_b);
    CHECK(r.samples == 2001);
    REQUIRE(r.oscillation_index_a.has_value());
    CHECK(*r.oscillation_index_a == *r.oscillation_index_b);
  }

  TEST_CASE("doubling the test waveform") {
    const auto a = sampled(10e-9, 2001, base_current);
    auto b = a;
    for (double& v : b.values) v *= 2.0;
    const auto r = compare(a, b);
    CHECK(r.peak_relative_error == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.nrmse == doctest::Approx(rms(a.values) / a.peak_abs()).epsilon(1e-12));
  }

  TEST_CASE("records on different steps are compared on the coarser one") {
    const auto a = sampled(20e-9, 1001, base_current);
    const auto b = sampled(5e-9, 4001, base_current);
    const auto r = compare(a, b);
    CHECK(r.dt == 20e-9);
    CHECK(r.samples == 1001);
    CHECK(r.nrmse < 1e-12);
    CHECK(std::abs(r.rise_time_a - r.rise_time_b) < 1e-15);

    CompareOptions win;
    win.window = TimeWindow{2e-6, 10e-6};
    const auto w = compare(a, b, win);
    CHECK(w.window == *win.window);
    CHECK(w.samples == 401);
  }

  TEST_CASE("comparison errors") {
    const auto a = sampled(10e-9, 1001, base_current);
    const auto h = sampled(10e-9, 1001, base_current, FieldComponent::Hphi);
    CHECK_THROWS_AS(compare(a, h), ConfigError);
    CompareOptions off;
    off.window = TimeWindow{50e-6, 60e-6};
    CHECK_THROWS_AS(compare(a, a, off), ConfigError);
    auto zero = a;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    CHECK_THROWS_AS(compare(zero, a), DomainError);
  }

  TEST_CASE("comparison report fields") {
    const auto a = sampled(10e-9, 1001, base_current);
    const auto j = nlohmann::json::parse(report_json(compare(a, a)));
    for (const char* key : {"component", "window", "dt_s", "samples", "peak_relative_error", "nrmse",
                            "rise_time_a_s", "rise_time_b_s", "f_cutoff_hz", "oscillation_index_a",
                            "oscillation_index_b"}) {
      CAPTURE(key);
      CHECK(j.contains(key));
    }
  }

  TEST_CASE("oscillation index of a smooth waveform is small") {
    const auto a = sampled(10e-9, 6001, base_current);
    CHECK(oscillation_index(a) < 0.01);
    const auto ez = ez_pec({10e3, 0.0}, MtleModel{}, Timebase{10e-9, 6001});
    CHECK(oscillation_index(ez) < 0.01);
  }

  TEST_CASE("oscillation index ignores amplitude and time shift") {
    const auto a = sampled(10e-9, 4001, base_current);
    const double i0 = oscillation_index(a);
    auto scaled = a;
    for (double& v : scaled.values) v *= -7.25;
    CHECK(oscillation_index(scaled) == doctest::Approx(i0).epsilon(1e-9));

    auto shifted = a;
    shifted.values.insert(shifted.values.begin(), 537, 0.0);
    shifted.timebase.n_samples = shifted.values.size();
    CHECK(oscillation_index(shifted) == doctest::Approx(i0).epsilon(1e-3));
  }

  TEST_CASE("ringing above the cutoff raises the index") {
    const auto a = sampled(10e-9, 4001, base_current);
    const double i0 = oscillation_index(a);
    const double amp = 0.05 * a.peak_abs();
    auto b = a;
    double ring = 0.0;
    for (std::size_t k = 0; k < b.values.size(); ++k) {
      const double v = amp * std::sin(2.0 * kPi * 4e6 * b.timebase.time(k));
      b.values[k] += v;
      ring += v * v;
    }
    double env = 0.0;
    for (double v : a.values) env += v * v;
    const double frac = ring / env;
    const double i1 = oscillation_index(b);
    CHECK(i1 > i0);
    // Energies add for orthogonal parts; the envelope's own residual can
    // correlate with the sinusoid, bounded by Cauchy-Schwarz.
    CHECK(i1 - i0 >= frac - 2.0 * std::sqrt(i0 * frac));
  }

  TEST_CASE("oscillation index needs a long enough record") {
    const auto a = sampled(10e-9, 200, base_current);
    CHECK_THROWS_AS(oscillation_index(a), DomainError);
    auto zero = sampled(10e-9, 4001, base_current);
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    CHECK_THROWS_AS(oscillation_index(zero), DomainError);
  }

  TEST_CASE("bench arithmetic and refusals") {
    Scenario sc = parse_scenario(R"({"ground": {"kind": "pec"}, "mtle": {"height_m": 500},
                                     "observers": [{"r_m": 300, "z_m": 0}]})");
    fdtd::GridSpec g;
    g.dx = 10.0;
    g.extents = {1000, 1000};
    BenchOptions opt;
    opt.iterations = 10;
    const PerfReport r = bench(g, fdtd::CpmlProfile{}, sc, opt);
    CHECK(r.cells == g.cell_count());
    CHECK(r.iterations == 10);
    CHECK(r.warmup == 3);
    CHECK(r.seconds_per_iteration > 0.0);
    CHECK(r.mcells_per_second == static_cast<double>(r.cells) / (r.seconds_per_iteration * 1e6));
    CHECK(r.memory_estimate == fdtd::memory_estimate(g, fdtd::CpmlProfile{}));
    CHECK(std::abs(static_cast<double>(r.allocated_bytes) - static_cast<double>(r.memory_estimate)) <
          0.1 * static_cast<double>(r.memory_estimate));
    const auto j = nlohmann::json::parse(perf_json(r));
    CHECK(j.contains("seconds_per_iteration"));
    CHECK(j.contains("mcells_per_second"));

    BenchOptions few = opt;
    few.iterations = 0;
    CHECK_THROWS_AS(bench(g, fdtd::CpmlProfile{}, sc, few), ConfigError);
    few.iterations = 9;
    CHECK_THROWS_AS(bench(g, fdtd::CpmlProfile{}, sc, few), ConfigError);
    few.iterations = 10;
    few.warmup = 2;
    CHECK_THROWS_AS(bench(g, fdtd::CpmlProfile{}, sc, few), ConfigError);

    BenchOptions tight = opt;
    tight.memory_limit = 1000;
    try {
      bench(g, fdtd::CpmlProfile{}, sc, tight);
      FAIL("expected a refusal");
    } catch (const InsufficientMemory& e) {
      CHECK(e.estimate() == r.memory_estimate);
      CHECK(e.available() == 1000);
    }

    // 265e6 cells at 1.2 s per iteration
    CHECK(265e6 / (1.2 * 1e6) == doctest::Approx(220.8).epsilon(1e-3));
  }

  TEST_CASE("coarser 3-D lattices need an eighth of the cells") {
    fdtd::GridSpec g;
    g.dimensionality = fdtd::Dimensionality::Cart3D;
    g.dx = 25.0;
    g.extents = {4000, 2000, 1000};
    fdtd::GridSpec h = g;
    h.dx = 50.0;
    CHECK(g.cell_count() == 8 * h.cell_count());
  }

  TEST_CASE("observer components by ground type") {
    Scenario pec = parse_scenario(R"({"ground": {"kind": "pec"}, "observers": [{"r_m": 1000, "z_m": 5}]})");
    auto f = observer_fields(pec);
    REQUIRE(f.size() == 2);
    CHECK(f[0].component == FieldComponent::Ez);
    CHECK(f[1].component == FieldComponent::Hphi);

    Scenario lossy = parse_scenario(
        R"({"observers": [{"r_m": 10000, "z_m": 0}, {"r_m": 10000, "z_m": -10}, {"r_m": 500, "z_m": 20}]})");
    f = observer_fields(lossy);
    REQUIRE(f.size() == 4);
    CHECK(f[0].component == FieldComponent::Ez);
    CHECK(f[1].component == FieldComponent::Ex);
    CHECK(f[2].component == FieldComponent::Ex);
    CHECK(f[2].point.z == -10.0);
    CHECK(f[3].component == FieldComponent::Ez);

    pec.observers.push_back({1000, -5});
    CHECK_THROWS_AS(observer_fields(pec), ConfigError);
  }

  TEST_CASE("default lattices contain every observer") {
    Scenario s = parse_scenario(R"({"observers": [{"r_m": 10000, "z_m": 0}, {"r_m": 10000, "z_m": -10}],
                                    "timebase": {"dt_s": 1e-8, "n": 2001}})");
    for (auto dim : {fdtd::Dimensionality::Axi2D, fdtd::Dimensionality::Cart3D}) {
      const auto g = default_grid(s, dim);
      CHECK_NOTHROW(g.validate());
      CHECK(g.ground_depth >= 500.0);
      const double r_room = dim == fdtd::Dimensionality::Axi2D ? g.extents[0] : g.extents[0] - *g.source_x;
      CHECK(r_room > 10000.0 + 2000.0);
      CHECK(static_cast<double>(g.n_steps - 1) * g.dt() >= s.timebase.duration());
    }
  }

  TEST_CASE("unknown experiment names are rejected with the list") {
    const auto& names = experiment_names();
    CHECK(names.size() == 5);
    try {
      run_experiment("fig9_nothing", scratch_dir("experiment"));
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      for (const auto& n : names) CHECK(msg.find(n) != std::string::npos);
    }
  }
}
