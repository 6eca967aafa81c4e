#include "lemp/channel.hpp"

#include <cmath>
#include <string>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"

namespace lemp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// One Heidler term and its time derivative.
double term(double t, double amp, double xi, double tau1, double tau2, double n) {
  const double x = std::pow(t / tau1, n);
  return amp / xi * x / (x + 1.0) * std::exp(-t / tau2);
}

double term_derivative(double t, double amp, double xi, double tau1, double tau2,
                       double n) {
  const double x = std::pow(t / tau1, n);
  const double dx = n * x / t;  // d/dt (t/tau1)^n
  const double shape = x / (x + 1.0);
  const double dshape = dx / ((x + 1.0) * (x + 1.0));
  const double decay = std::exp(-t / tau2);
  return amp / xi * (dshape - shape / tau2) * decay;
}

}  // namespace

double heidler_correction(double tau1, double tau2, double n) {
  require(tau1 > 0.0 && tau2 > 0.0, "heidler_correction: time constants must be > 0");
  require(n >= 1.0, "heidler_correction: steepness exponent must be >= 1");
  return std::exp(-(tau1 / tau2) * std::pow(n * tau2 / tau1, 1.0 / n));
}

HeidlerParams HeidlerParams::make(double i1, double tau11, double tau12, double n1,
                                  double i2, double tau21, double tau22, double n2) {
  HeidlerParams p;
  p.i1 = i1;
  p.tau11 = tau11;
  p.tau12 = tau12;
  p.n1 = n1;
  p.i2 = i2;
  p.tau21 = tau21;
  p.tau22 = tau22;
  p.n2 = n2;
  p.xi1 = heidler_correction(tau11, tau12, n1);
  p.xi2 = heidler_correction(tau21, tau22, n2);
  p.validate();
  return p;
}

HeidlerParams HeidlerParams::typical_subsequent() {
  return make(10.7e3, 0.25e-6, 2.5e-6, 2.0, 6.5e3, 2.0e-6, 230e-6, 2.0);
}

void HeidlerParams::validate() const {
  require(i1 >= 0.0 && i2 >= 0.0, "HeidlerParams: amplitudes must be >= 0");
  require(tau11 > 0.0 && tau12 > 0.0 && tau21 > 0.0 && tau22 > 0.0,
          "HeidlerParams: time constants must be > 0");
  require(n1 >= 1.0 && n2 >= 1.0, "HeidlerParams: exponents must be >= 1");
  require(xi1 == heidler_correction(tau11, tau12, n1),
          "HeidlerParams: xi1 inconsistent with (tau11, tau12, n1)");
  require(xi2 == heidler_correction(tau21, tau22, n2),
          "HeidlerParams: xi2 inconsistent with (tau21, tau22, n2)");
}

HeidlerParams HeidlerParams::scaled(double k) const {
  HeidlerParams p = *this;
  p.i1 *= k;
  p.i2 *= k;
  return p;
}

void MtleModel::validate() const {
  require(lambda_decay > 0.0, "MtleModel: lambda_decay must be > 0");
  require(v_front > 0.0 && v_front < kC0, "MtleModel: v_front must lie in (0, c0)");
  require(channel_height > 0.0, "MtleModel: channel_height must be > 0");
  base.validate();
}

double heidler_current(double t, const HeidlerParams& p) {
  if (t <= 0.0) return 0.0;
  return term(t, p.i1, p.xi1, p.tau11, p.tau12, p.n1) +
         term(t, p.i2, p.xi2, p.tau21, p.tau22, p.n2);
}

double heidler_derivative(double t, const HeidlerParams& p) {
  if (t <= 0.0) return 0.0;
  return term_derivative(t, p.i1, p.xi1, p.tau11, p.tau12, p.n1) +
         term_derivative(t, p.i2, p.xi2, p.tau21, p.tau22, p.n2);
}

double heidler_charge(double t, const HeidlerParams& p, int panels) {
  if (t <= 0.0) return 0.0;
  if (panels % 2) ++panels;
  const double h = t / panels;
  double sum = heidler_current(0.0, p) + heidler_current(t, p);
  for (int k = 1; k < panels; ++k) {
    sum += (k % 2 ? 4.0 : 2.0) * heidler_current(k * h, p);
  }
  return sum * h / 3.0;
}

double mtle_current(double z_prime, double t, const MtleModel& m) {
  require(z_prime >= 0.0 && z_prime <= m.channel_height,
          "mtle_current: z' outside [0, H]");
  const double local = t - z_prime / m.v_front;
  if (local <= 0.0) return 0.0;
  return heidler_current(local, m.base) * std::exp(-z_prime / m.lambda_decay);
}

double mtle_derivative(double z_prime, double t, const MtleModel& m) {
  require(z_prime >= 0.0 && z_prime <= m.channel_height,
          "mtle_derivative: z' outside [0, H]");
  const double local = t - z_prime / m.v_front;
  if (local <= 0.0) return 0.0;
  return heidler_derivative(local, m.base) * std::exp(-z_prime / m.lambda_decay);
}

}  // namespace lemp
