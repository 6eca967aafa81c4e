#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lemp/channel.hpp"
#include "lemp/constants.hpp"
#include "lemp/errors.hpp"
#include "lemp/fdtd/reflection.hpp"
#include "lemp/fdtd/simulation.hpp"

using namespace lemp;
using namespace lemp::fdtd;

namespace {

GridSpec axi(double r, double z, double dx = 10.0) {
  GridSpec g;
  g.dx = dx;
  g.extents = {r, z};
  g.precision = Precision::Double;
  return g;
}

MtleModel short_channel(double h) {
  MtleModel m;
  m.channel_height = h;
  return m;
}

std::vector<FieldWaveform> run(const MtleModel& m, const GroundModel& ground, const GridSpec& g,
                               const CpmlProfile& p, const std::vector<ProbeSpec>& probes,
                               double span, const SimulationOptions& opt = {}) {
  Simulation sim(m, ground, g, p, probes, opt);
  sim.run(static_cast<std::size_t>(span / sim.dt()));
  std::vector<FieldWaveform> out;
  for (std::size_t i = 0; i < probes.size(); ++i) out.push_back(sim.probe_waveform(i));
  return out;
}

double max_abs_diff(const FieldWaveform& a, const FieldWaveform& b) {
  REQUIRE(a.values.size() == b.values.size());
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace

TEST_SUITE("fdtd") {
  TEST_CASE("time step from the stability bound") {
    CHECK(cfl_timestep(5.0, 3, 0.9) == doctest::Approx(8.67e-9).epsilon(1e-3));
    CHECK(cfl_timestep(10.0, 3, 0.9) == doctest::Approx(17.33e-9).epsilon(1e-3));
    CHECK(cfl_timestep(50.0, 3, 0.9) == doctest::Approx(86.66e-9).epsilon(1e-3));
    CHECK(cfl_timestep(10.0, 2, 1.0) == doctest::Approx(10.0 / (kC0 * std::sqrt(2.0))).epsilon(1e-15));
    CHECK_THROWS_AS(cfl_timestep(10.0, 3, 1.05), ConfigError);
    CHECK_NOTHROW(cfl_timestep(10.0, 3, 1.05, true));
    CHECK_THROWS_AS(cfl_timestep(10.0, 3, 0.0), ConfigError);

    GridSpec g = axi(2000, 2000);
    g.cfl_dims = 3;
    CHECK(g.dt() == cfl_timestep(10.0, 3, 0.9));
    g.cfl_dims = 0;
    CHECK(g.dt() == cfl_timestep(10.0, 2, 0.9));
  }

  TEST_CASE("lattice sizes") {
    GridSpec g = axi(12000, 9000, 5.0);
    const auto c = g.cells();
    CHECK(c[0] == 2400);
    CHECK(c[1] == 1);
    CHECK(c[2] == 1800);

    GridSpec big;
    big.dimensionality = Dimensionality::Cart3D;
    big.dx = 50.0;
    big.extents = {218e3, 20e3, 7.6e3};
    big.precision = Precision::Single;
    CHECK(big.cell_count() == 265088000u);
    const double gb = static_cast<double>(memory_estimate(big, CpmlProfile{})) / 1e9;
    // "about 19 GB": fields and coefficients 19.1 GB, CPML memory 1.1 GB
    CHECK(std::abs(gb - 19.0) < 0.1 * 19.0);

    GridSpec odd = axi(2005, 2000);
    CHECK_THROWS_AS(odd.validate(), ConfigError);
  }

  TEST_CASE("lossy update coefficients") {
    const double dt = 17.33e-9, dx = 10.0;
    const auto air = material_coeffs(0.0, 1.0, dt, dx);
    CHECK(air.ca == 1.0);
    CHECK(air.cb == doctest::Approx(dt / (kEps0 * dx)).epsilon(1e-15));
    const auto soil = material_coeffs(1e-3, 10.0, dt, dx);
    const double loss = 1e-3 * dt / (2.0 * kEps0 * 10.0);
    CHECK(loss == doctest::Approx(0.0979).epsilon(1e-3));
    CHECK(soil.ca == doctest::Approx((1.0 - loss) / (1.0 + loss)).epsilon(1e-15));
    CHECK(soil.ca == doctest::Approx(0.82172).epsilon(1e-5));
    const auto metal = material_coeffs(1e9, 1.0, dt, dx);
    CHECK(metal.ca == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(metal.cb) < 1e-9 * air.cb);
    CHECK_THROWS_AS(material_coeffs(-1.0, 1.0, dt, dx), DomainError);
  }

  TEST_CASE("absorbing layer grading") {
    CpmlProfile p;
    const double dt = cfl_timestep(10.0, 2, 0.9);
    const auto inner = cpml_coeffs(p, 0.0, dt, 10.0);
    CHECK(inner.b == 1.0);
    CHECK(inner.a == 0.0);
    CHECK(inner.kappa == 1.0);
    double prev = inner.b;
    for (double xi = 0.1; xi <= 1.0 + 1e-12; xi += 0.1) {
      const auto c = cpml_coeffs(p, xi, dt, 10.0);
      CHECK(c.b < prev);
      CHECK(c.a < 0.0);
      prev = c.b;
    }
    const auto outer = cpml_coeffs(p, 1.0, dt, 10.0);
    CHECK(outer.kappa == doctest::Approx(p.kappa_max));
    CHECK(cpml_sigma_opt(p, 10.0) == doctest::Approx(4.0 / (150.0 * kPi * 10.0)));
    CpmlProfile bad;
    bad.m_order = 5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.thickness[ZHi] = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("normal-incidence reflection of the default layer") {
    const auto r = cpml_reflection_1d(CpmlProfile{});
    CHECK(r.db < -40.0);
    CHECK(r.baseline_energy > 0.0);
  }

  TEST_CASE("no source, no field") {
    SimulationOptions opt;
    opt.source_enabled = false;
    Simulation sim(short_channel(500), GroundModel::pec(), axi(1500, 1500), CpmlProfile{},
                   {{FieldComponent::Ez, {300, 10}}, {FieldComponent::Hphi, {300, 5}}}, opt);
    sim.run(300);
    for (std::size_t i = 0; i < 2; ++i) {
      for (double v : sim.probe_waveform(i).values) REQUIRE(v == 0.0);
    }
    for (double e : sim.stability_report().energy) REQUIRE(e == 0.0);
    CHECK(sim.injected_charge() == 0.0);
  }

  TEST_CASE("illegal builds and probes") {
    const auto m = short_channel(500);
    const GridSpec g = axi(1500, 1500);
    CHECK_THROWS_AS(Simulation(m, GroundModel::pec(), g, CpmlProfile{}, {{FieldComponent::Ez, {1450, 10}}}),
                    ConfigError);
    CHECK_THROWS_AS(Simulation(m, GroundModel::pec(), g, CpmlProfile{}, {{FieldComponent::Ez, {300, 2}}}),
                    ConfigError);
    CHECK_THROWS_AS(Simulation(m, GroundModel::pec(), g, CpmlProfile{}, {{FieldComponent::Ez, {300, 1450}}}),
                    ConfigError);
    CHECK_THROWS_AS(Simulation(short_channel(1450), GroundModel::pec(), g, CpmlProfile{}, {}), ConfigError);
    CHECK_THROWS_AS(Simulation(m, GroundModel::lossy(1e-3, 10.0), g, CpmlProfile{}, {}), ConfigError);
    Simulation ok(m, GroundModel::pec(), g, CpmlProfile{}, {{FieldComponent::Ez, {300, 10}}});
    CHECK_THROWS_AS(ok.probe_waveform(3), ConfigError);
  }

  TEST_CASE("charge delivered by the base cell") {
    for (auto dim : {Dimensionality::Axi2D, Dimensionality::Cart3D}) {
      CAPTURE(static_cast<int>(dim));
      GridSpec g = dim == Dimensionality::Axi2D ? axi(1500, 1500) : GridSpec{};
      if (dim == Dimensionality::Cart3D) {
        g.dimensionality = dim;
        g.dx = 50.0;
        g.extents = {2000, 2000, 2000};
        g.precision = Precision::Double;
      }
      const auto m = short_channel(500);
      Simulation sim(m, GroundModel::pec(), g, CpmlProfile{}, {});
      const std::size_t n = 400;
      sim.run(n);
      // Injection at t_{n+1/2} is a midpoint rule for the delayed, decayed
      // base-current integral at the cell centre z0 = dx / 2.
      const double z0 = 0.5 * g.dx;
      double midpoint = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        midpoint += mtle_current(z0, (static_cast<double>(k) + 0.5) * sim.dt(), m) * sim.dt();
      }
      CHECK(std::abs(sim.injected_charge() - midpoint) < 1e-12 * midpoint);
      // The rule itself is within 5e-6 of the integral even at the coarse
      // 3-D step (the sharp current onset dominates its error).
      const double t = static_cast<double>(n) * sim.dt();
      const double exact =
          std::exp(-z0 / m.lambda_decay) * heidler_charge(t - z0 / m.v_front, m.base, 200000);
      CHECK(std::abs(sim.injected_charge() - exact) < 1e-5 * exact);
      if (dim == Dimensionality::Axi2D) CHECK(std::abs(sim.injected_charge() - exact) < 1e-6 * exact);
    }
  }

  TEST_CASE("perfectly conducting ground equals a mirrored channel in free space") {
    const auto m = short_channel(500);
    const std::vector<ProbeSpec> probes{{FieldComponent::Ez, {400, 10}},
                                        {FieldComponent::Ez, {250, 300}},
                                        {FieldComponent::Hphi, {400, 5}}};
    const auto pec = run(m, GroundModel::pec(), axi(1500, 1500), CpmlProfile{}, probes, 8e-6);
    GridSpec full = axi(1500, 3000);
    full.ground_depth = 1500;
    SimulationOptions mirror;
    mirror.mirror_source = true;
    const auto img = run(m, GroundModel::lossy(0.0, 1.0), full, CpmlProfile{}, probes, 8e-6, mirror);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      CAPTURE(i);
      CHECK(max_abs_diff(pec[i], img[i]) < 1e-6 * pec[i].peak_abs());
    }
  }

  TEST_CASE("absorbing layer against an oversized lattice and a bare wall") {
    const auto m = short_channel(1000);
    const std::vector<ProbeSpec> probe{{FieldComponent::Ez, {500, 10}}};
    const double span = 30e-6;
    // Reflections from the oversized lattice's walls reach the probe after
    // the window closes.
    const auto oracle = run(m, GroundModel::pec(), axi(5000, 5000), CpmlProfile{}, probe, span)[0];
    const auto layer = run(m, GroundModel::pec(), axi(3000, 3000), CpmlProfile{}, probe, span)[0];
    CpmlProfile wall;
    wall.sigma_ratio = 0.0;
    wall.kappa_max = 1.0;
    const auto bare = run(m, GroundModel::pec(), axi(3000, 3000), wall, probe, span)[0];
    const double peak = oracle.peak_abs();
    CHECK(max_abs_diff(layer, oracle) < 0.01 * peak);
    CHECK(max_abs_diff(bare, oracle) > 0.10 * peak);
  }

  TEST_CASE("energy stops growing once a short pulse has been injected") {
    MtleModel m = short_channel(500);
    m.base = HeidlerParams::make(10e3, 0.1e-6, 0.3e-6, 2.0, 0.0, 0.1e-6, 0.2e-6, 2.0);
    Simulation sim(m, GroundModel::pec(), axi(3000, 3000), CpmlProfile{}, {});
    sim.run(static_cast<std::size_t>(30e-6 / sim.dt()));
    const auto& e = sim.stability_report().energy;
    // The current front leaves the 500 m channel at 3.3 us and the pulse has
    // decayed by 6 us; what remains is the field of the deposited charge.
    const std::size_t from = static_cast<std::size_t>(6e-6 / sim.dt());
    double running = e[from];
    for (std::size_t n = from + 1; n < e.size(); ++n) {
      REQUIRE(e[n] <= running * (1.0 + 1e-3));
      running = std::min(running, e[n]);
    }
    CHECK(e.back() < e[from]);
    CHECK_FALSE(sim.stability_report().growth_flag);
  }

  TEST_CASE("beyond the stability bound the run diverges and is flagged first") {
    GridSpec g = axi(2000, 3000);
    g.cfl_factor = 1.05;
    CHECK_THROWS_AS(g.dt(), ConfigError);
    g.allow_unsafe_cfl = true;
    Simulation sim(short_channel(2000), GroundModel::pec(), g, CpmlProfile{}, {});
    std::size_t fault = 0;
    try {
      sim.run(2000);
    } catch (const DivergenceFault& f) {
      fault = f.step();
    }
    REQUIRE(fault > 0);
    CHECK(fault < 2000);
    REQUIRE(sim.stability_report().growth_flag);
    CHECK(sim.stability_report().growth_step < fault);
  }

  TEST_CASE("results do not depend on the thread count") {
    GridSpec g = axi(1500, 1500);
    g.ground_depth = 200;
    g.extents = {1500, 1700};
    const std::vector<ProbeSpec> probes{{FieldComponent::Ez, {400, 10}},
                                        {FieldComponent::Ex, {400, 0}},
                                        {FieldComponent::Hphi, {400, 5}}};
    SimulationOptions one, many;
    one.threads = 1;
    many.threads = 3;
    const auto ground = GroundModel::lossy(1e-3, 10.0);
    const auto a = run(short_channel(500), ground, g, CpmlProfile{}, probes, 5e-6, one);
    const auto b = run(short_channel(500), ground, g, CpmlProfile{}, probes, 5e-6, many);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      CHECK(max_abs_diff(a[i], b[i]) <= 1e-12 * a[i].peak_abs());
    }

    GridSpec c;
    c.dimensionality = Dimensionality::Cart3D;
    c.dx = 50.0;
    c.extents = {2000, 1500, 2000};
    c.ground_depth = 500;
    c.source_x = 700;
    const std::vector<ProbeSpec> p3{{FieldComponent::Ez, {400, 50}}, {FieldComponent::Hphi, {400, 25}}};
    const auto a3 = run(short_channel(500), ground, c, CpmlProfile{}, p3, 5e-6, one);
    const auto b3 = run(short_channel(500), ground, c, CpmlProfile{}, p3, 5e-6, many);
    for (std::size_t i = 0; i < p3.size(); ++i) {
      CHECK(max_abs_diff(a3[i], b3[i]) <= 1e-12 * a3[i].peak_abs());
    }
  }

  TEST_CASE("memory estimate matches the allocation") {
    for (auto prec : {Precision::Single, Precision::Double}) {
      GridSpec a = axi(2000, 2500);
      a.ground_depth = 500;
      a.precision = prec;
      GridSpec c;
      c.dimensionality = Dimensionality::Cart3D;
      c.dx = 50.0;
      c.extents = {3000, 2000, 2500};
      c.ground_depth = 500;
      c.precision = prec;
      for (const auto& g : {a, c}) {
        Simulation sim(short_channel(500), GroundModel::lossy(1e-3, 10.0), g, CpmlProfile{}, {});
        const double est = static_cast<double>(memory_estimate(g, CpmlProfile{}));
        CHECK(std::abs(est - static_cast<double>(sim.allocated_bytes())) < 0.1 * est);
      }
    }
  }

  TEST_CASE("probe records follow the solver time step") {
    Simulation sim(short_channel(500), GroundModel::pec(), axi(1500, 1500), CpmlProfile{},
                   {{FieldComponent::Ez, {300, 10}}});
    sim.run(123);
    const auto w = sim.probe_waveform(0, "probe-check");
    CHECK(w.values.size() == 123);
    CHECK(w.timebase.dt == sim.dt());
    CHECK(w.scenario_id == "probe-check");
    CHECK(w.values.front() == 0.0);
  }
}
