#include <doctest.h>

#include <cmath>

#include "lemp/errors.hpp"
#include "lemp/groundfx.hpp"
#include "lemp/reffields.hpp"

using namespace lemp;

namespace {

// Reference values from 30-digit mpmath evaluations of exp(-z^2) erfc(-jz)
// and 1 - j sqrt(pi p) exp(-p) erfc(j sqrt p).
struct Pair {
  cplx arg;
  cplx value;
};

const Pair kFaddeeva[] = {
    {{0.5, 0.5}, {0.533156707912175, 0.230488231384458}},
    {{2.0, 1.0}, {0.140239581366278, 0.222213440179899}},
    {{5.0, 0.1}, {0.00240691171694271, 0.115194424550728}},
    {{0.1, 3.0}, {0.178842429690194, 0.00543274980885665}},
    {{-1.0, 0.5}, {0.354900332867578, -0.342871719131101}},
    {{1.0, -0.5}, {0.155541142454331, 1.13783721578169}},
    {{8.0, 8.0}, {0.0353979457743811, 0.0351225255719074}},
};

const Pair kNorton[] = {
    {{0.1, 0.05}, {0.906828323254418, -0.614794687164263}},
    {{1.0, 1.0}, {-0.85569482891604, -0.943189012827669}},
    {{3.0, -0.5}, {-0.202034541803323, -0.167743839701548}},
    {{10.0, 2.0}, {-0.0571870280551448, 0.0145145017024134}},
    {{50.0, 0.0}, {-0.0103161564918599, 0.0}},
    {{30.0, 40.0}, {-0.00590107667861687, 0.00829261493579673}},
};

FieldWaveform pec_ez(double r, double span = 40e-6, double dt = 10e-9) {
  return ez_pec({r, 0.0}, MtleModel{}, Timebase{dt, static_cast<std::size_t>(span / dt) + 1});
}

double max_abs_diff(const FieldWaveform& a, const FieldWaveform& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace

TEST_SUITE("groundfx") {
  TEST_CASE("Faddeeva function against high-precision values") {
    for (const auto& [z, w] : kFaddeeva) {
      CAPTURE(z);
      CHECK(std::abs(faddeeva_w(z) - w) < 1e-13 * std::abs(w));
    }
  }

  TEST_CASE("Norton attenuation function against high-precision values") {
    for (const auto& [p, f] : kNorton) {
      CAPTURE(p);
      CHECK(std::abs(norton_attenuation(p) - f) < 1e-9 * std::abs(f));
      CHECK(std::abs(norton_attenuation_erfc(p) - f) < 1e-12 * std::abs(f));
    }
    CHECK(norton_attenuation(cplx(0.0, 0.0)) == cplx(1.0, 0.0));
  }

  TEST_CASE("erfc and asymptotic branches agree at |p| = 50") {
    for (double arg : {0.0, -0.3, -0.7, -1.1, -1.5, 0.5}) {
      const cplx p = std::polar(50.0, arg);
      CAPTURE(arg);
      const cplx a = norton_attenuation_erfc(p), b = norton_attenuation_asymptotic(p);
      CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
    }
  }

  TEST_CASE("numerical distance of a good conductor is nearly real and small") {
    const auto g = GroundModel::lossy(100.0, 10.0);
    const cplx p = numerical_distance(g, 1e5, 10e3);
    CHECK(std::abs(p) < 1e-4);
    CHECK(std::abs(std::arg(p)) < 1e-3);
  }

  TEST_CASE("weyl at zero depth is the identity") {
    const auto ez = pec_ez(10e3);
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const auto ex = apply_chain(ez, parse_chain("attenuation,wave_tilt"), g);
    const auto same = apply_chain(ez, parse_chain("attenuation,wave_tilt,weyl:0"), g);
    CHECK(max_abs_diff(ex, same) <= 1e-12 * ex.peak_abs());
  }

  TEST_CASE("highly conducting ground approaches the PEC limit") {
    const auto ez = pec_ez(10e3);
    const auto g = GroundModel::lossy(100.0, 10.0);
    const auto att = apply_chain(ez, {FilterStep::attenuation()}, g);
    CHECK(max_abs_diff(att, ez) < 0.01 * ez.peak_abs());
    const auto ex = apply_chain(ez, {FilterStep::tilt()}, g);
    CHECK(ex.peak_abs() < 0.01 * ez.peak_abs());
  }

  TEST_CASE("deeper observers see smaller and later horizontal fields") {
    const auto ez = pec_ez(10e3);
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const auto ex0 = apply_chain(ez, parse_chain("attenuation,wave_tilt"), g);
    const auto ex10 = apply_chain(ez, parse_chain("attenuation,wave_tilt,weyl:10"), g);
    const auto ex50 = apply_chain(ez, parse_chain("attenuation,wave_tilt,weyl:50"), g);
    CHECK(ex10.peak_abs() < ex0.peak_abs());
    CHECK(ex50.peak_abs() < ex10.peak_abs());
    CHECK(ex10.point.z == -10.0);
    CHECK(ex10.component == FieldComponent::Ex);
  }

  TEST_CASE("wave tilt and Cooray-Rubinstein paths agree on the surface peak at 10 km") {
    const double r = 10e3;
    const Timebase tb{10e-9, 4001};
    const MtleModel m;
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const auto ez = ez_pec({r, 0.0}, m, tb);
    const auto tilt = apply_chain(ez, parse_chain("attenuation,wave_tilt"), g);
    ChainOptions opt;
    opt.hphi = apply_chain(hphi_pec({r, 0.0}, m, tb), {FilterStep::attenuation()}, g);
    const auto cr = apply_chain(er_pec({r, 0.0}, m, tb), {FilterStep::cooray()}, g, opt);
    CHECK(std::abs(cr.peak_abs() - tilt.peak_abs()) < 0.10 * tilt.peak_abs());
  }

  TEST_CASE("radial field over PEC vanishes on the surface") {
    const auto er = er_pec({5e3, 0.0}, MtleModel{}, Timebase{10e-9, 1001});
    CHECK(er.peak_abs() == 0.0);
  }

  TEST_CASE("wave tilt removes the DC bin, the others keep it") {
    const auto ez = pec_ez(5e3, 20e-6);
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const auto s = to_spectrum(ez, 4);
    CHECK(wave_tilt(s, g).bins.front() == cplx(0.0, 0.0));
    CHECK(attenuation_filter(s, 5e3, g).bins.front() == s.bins.front());
    CHECK(weyl_underground(s, 10.0, g).bins.front() == s.bins.front());
  }

  TEST_CASE("filtered output stays causal") {
    const auto ez = pec_ez(10e3);
    ChainDiagnostics diag;
    const auto out = apply_chain(ez, parse_chain("attenuation,wave_tilt"), GroundModel::lossy(1e-3, 10.0),
                                 {}, &diag);
    REQUIRE(diag.first_arrival > 0);
    for (std::size_t k = 0; k < diag.first_arrival; ++k) CHECK(out.values[k] == 0.0);
    CHECK(diag.imaginary_residue < 1e-9 * out.peak_abs());
  }

  TEST_CASE("chain text round-trips") {
    const auto steps = parse_chain("attenuation,wave_tilt,weyl:12.5");
    REQUIRE(steps.size() == 3);
    CHECK(steps[2].kind == FilterStep::Kind::Weyl);
    CHECK(steps[2].depth == 12.5);
    CHECK(format_chain(steps) == "attenuation,wave_tilt,weyl:12.5");
    CHECK_THROWS_AS(parse_chain("attenuation,bogus"), ConfigError);
    CHECK_THROWS_AS(parse_chain("weyl:abc"), ConfigError);
  }

  TEST_CASE("non-physical step orders are rejected") {
    CHECK_THROWS_AS(validate_chain(FieldComponent::Ez, parse_chain("weyl:10"), false), ConfigError);
    CHECK_THROWS_AS(validate_chain(FieldComponent::Ez, parse_chain("wave_tilt,attenuation"), false),
                    ConfigError);
    CHECK_THROWS_AS(validate_chain(FieldComponent::Er, {FilterStep::cooray()}, false), ConfigError);
    CHECK_THROWS_AS(validate_chain(FieldComponent::Ez, {FilterStep::cooray()}, true), ConfigError);
    CHECK_NOTHROW(validate_chain(FieldComponent::Ez, parse_chain("attenuation,wave_tilt,weyl:1"), false));
  }

  TEST_CASE("a PEC ground cannot drive the lossy filters") {
    CHECK_THROWS_AS(apply_chain(pec_ez(1e3, 5e-6), {FilterStep::attenuation()}, GroundModel::pec()),
                    ConfigError);
    CHECK_THROWS_AS(complex_permittivity(GroundModel::pec(), 1e3), ConfigError);
  }

  TEST_CASE("complex permittivity, wave tilt and skin-depth values") {
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const cplx eps = complex_permittivity(g, 1e6);
    CHECK(eps.real() == 10.0);
    CHECK(eps.imag() == doctest::Approx(-17.975).epsilon(1e-4));
    CHECK(1.0 / std::sqrt(std::abs(eps)) == doctest::Approx(0.2205).epsilon(1e-3));

    Spectrum one;
    one.n_fft = 2001;
    one.df = 1e5;
    one.bins.assign(2, cplx(1.0, 0.0));
    CHECK(std::abs(wave_tilt(one, g).bins[1]) < 1.0);
    // bin 1 sits at 100 kHz: skin depth about 50.3 m
    CHECK(std::abs(weyl_underground(one, 10.0, g).bins[1]) == doctest::Approx(std::exp(-10.0 / 50.33)).epsilon(0.01));
    const auto lossless = GroundModel::lossy(0.0, 1.0);
    CHECK(std::abs(weyl_underground(one, 10.0, lossless).bins[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(wave_tilt(one, lossless).bins[1] - cplx(1.0, 0.0)) < 1e-15);
  }

  TEST_CASE("filter magnitudes never exceed one") {
    Spectrum s;
    s.n_fft = 8001;
    s.df = 5e3;
    s.bins.assign(4001, cplx(1.0, 0.0));
    for (double sigma : {1e-4, 1e-3, 1e-2, 1.0}) {
      for (double eps_r : {1.0, 4.0, 10.0, 40.0}) {
        const auto g = GroundModel::lossy(sigma, eps_r);
        const auto a = attenuation_filter(s, 30e3, g);
        const auto t = wave_tilt(s, g);
        const auto w = weyl_underground(s, 20.0, g);
        for (std::size_t k = 0; k < s.bins.size(); ++k) {
          REQUIRE(std::abs(a.bins[k]) <= 1.0 + 1e-12);
          REQUIRE(std::abs(t.bins[k]) <= 1.0 + 1e-12);
          REQUIRE(std::abs(w.bins[k]) <= 1.0 + 1e-12);
        }
      }
    }
  }

  TEST_CASE("empty chain is the identity") {
    const auto ez = pec_ez(2e3, 10e-6);
    const auto out = apply_chain(ez, {}, GroundModel::pec());
    CHECK(max_abs_diff(out, ez) <= 1e-12 * ez.peak_abs());
  }

  TEST_CASE("chain is linear and shift invariant") {
    const auto g = GroundModel::lossy(1e-3, 10.0);
    const auto chain = parse_chain("attenuation,wave_tilt,weyl:5");
    const auto ez = pec_ez(5e3, 30e-6);
    const auto base = apply_chain(ez, chain, g);

    auto scaled = ez;
    for (double& v : scaled.values) v *= -3.5;
    const auto out_scaled = apply_chain(scaled, chain, g);
    for (std::size_t k = 0; k < ez.values.size(); ++k) {
      REQUIRE(out_scaled.values[k] == doctest::Approx(-3.5 * base.values[k]).epsilon(1e-9).scale(base.peak_abs()));
    }

    const std::size_t shift = 137;
    auto delayed = ez;
    std::fill(delayed.values.begin(), delayed.values.end(), 0.0);
    std::copy(ez.values.begin(), ez.values.end() - shift, delayed.values.begin() + shift);
    const auto out_delayed = apply_chain(delayed, chain, g);
    // The wave-tilt impulse response has a slowly decaying tail, so a little
    // of it wraps around the padded record; the shifted record wraps
    // differently.
    for (std::size_t k = shift; k < ez.values.size(); ++k) {
      REQUIRE(std::abs(out_delayed.values[k] - base.values[k - shift]) < 1e-3 * base.peak_abs());
    }
    const auto att = apply_chain(ez, {FilterStep::attenuation()}, g);
    const auto att_delayed = apply_chain(delayed, {FilterStep::attenuation()}, g);
    for (std::size_t k = shift; k < ez.values.size(); ++k) {
      REQUIRE(std::abs(att_delayed.values[k] - att.values[k - shift]) < 1e-7 * att.peak_abs());
    }
  }

  TEST_CASE("surface horizontal field at 10 km: sharp pulse with the sign of Ez, then a slow tail") {
    const auto ez = pec_ez(10e3, 60e-6);
    const auto ex = apply_chain(ez, parse_chain("attenuation,wave_tilt"), GroundModel::lossy(1e-3, 10.0));
    const double t_peak = ex.timebase.time(ex.peak_index());
    CHECK(t_peak > 33.4e-6);
    CHECK(t_peak < 36e-6);
    CHECK(ex.values[ex.peak_index()] * ez.values[ez.peak_index()] > 0.0);
    // Trough of the tail (~42 us) is a few percent of the pulse peak.
    CHECK(std::abs(ex.at(42e-6)) < 0.05 * ex.peak_abs());
  }
}
