#pragma once
/**
 * @file channel.hpp
 * @brief Return-stroke source: Heidler channel-base current and the MTLE
 * (modified transmission line, exponential decay) current distribution.
 *
 * All functions are pure and may be called concurrently.
 */

namespace lemp {

/// Two-term Heidler channel-base current. The correction factors xi1/xi2 are
/// derived from the time constants and exponents; use make() to get a record
/// with consistent corrections.
struct HeidlerParams {
  double i1 = 10.7e3;     // [A]
  double tau11 = 0.25e-6; // rise time constant, term 1 [s]
  double tau12 = 2.5e-6;  // decay time constant, term 1 [s]
  double n1 = 2.0;
  double i2 = 6.5e3;      // [A]
  double tau21 = 2.0e-6;
  double tau22 = 230e-6;
  double n2 = 2.0;
  double xi1 = 0.0;
  double xi2 = 0.0;

  /// Builds a validated record with xi1/xi2 filled in.
  static HeidlerParams make(double i1, double tau11, double tau12, double n1,
                            double i2, double tau21, double tau22, double n2);
  /// Typical subsequent return stroke (10.7 kA / 6.5 kA, n = 2).
  static HeidlerParams typical_subsequent();

  /// Throws DomainError if an invariant does not hold, including a stored
  /// xi that differs from its recomputed value.
  void validate() const;

  /// Copy with both amplitudes multiplied by k.
  HeidlerParams scaled(double k) const;

  bool operator==(const HeidlerParams&) const = default;
};

struct MtleModel {
  double lambda_decay = 2000.0;   // current decay height constant [m]
  double v_front = 1.5e8;         // front speed [m/s]
  double channel_height = 7500.0; // [m]
  HeidlerParams base = HeidlerParams::typical_subsequent();

  void validate() const;

  bool operator==(const MtleModel&) const = default;
};

/// Peak-normalisation factor xi = exp(-(tau1/tau2) * (n tau2/tau1)^(1/n)).
double heidler_correction(double tau1, double tau2, double n);

/// Channel-base current I(0, t); zero for t <= 0.
double heidler_current(double t, const HeidlerParams& p);

/// Analytic dI(0, t)/dt; zero for t <= 0.
double heidler_derivative(double t, const HeidlerParams& p);

/// Time integral of I(0, t) from 0 to t by composite Simpson on
/// `panels` panels. Used as an independent charge check.
double heidler_charge(double t, const HeidlerParams& p, int panels = 20000);

/// i(z', t) = I(0, t - z'/v) exp(-z'/lambda) behind the front, 0 ahead of it.
double mtle_current(double z_prime, double t, const MtleModel& m);

/// d i(z', t)/dt.
double mtle_derivative(double z_prime, double t, const MtleModel& m);

}  // namespace lemp
