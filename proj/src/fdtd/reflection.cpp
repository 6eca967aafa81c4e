#include "lemp/fdtd/reflection.hpp"

#include <cmath>
#include <vector>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"
#include "pml_axis.hpp"

namespace lemp::fdtd {

namespace {

enum class Wall { Cpml, Pec };

// Lattice: Ez at integer nodes 0..n, Hy at half nodes. Both ends PEC; the
// right end optionally lined with `layer` CPML cells.
std::vector<double> run_line(std::size_t n, int layer, const CpmlProfile& p, double dx,
                             double dt, std::size_t src, std::size_t probe,
                             std::size_t steps, double t0, double tau) {
  detail::PmlAxis<double> ax = detail::PmlAxis<double>::make(n, 0, layer, p, dt, dx, 1.0, 1.0);
  std::vector<double> ez(n + 1, 0.0), hy(n, 0.0);
  std::vector<double> psi_e(n + 1, 0.0), psi_h(n, 0.0);
  const double ce = dt / (kEps0 * dx);
  const double ch = dt / (kMu0 * dx);
  std::vector<double> rec;
  rec.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    rec.push_back(ez[probe]);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ez[i + 1] - ez[i];
      psi_h[i] = ax.bh[i] * psi_h[i] + ax.ah[i] * d;
      hy[i] += ch * (d * ax.ikh[i] + psi_h[i]);
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double d = hy[i] - hy[i - 1];
      psi_e[i] = ax.be[i] * psi_e[i] + ax.ae[i] * d;
      ez[i] += ce * (d * ax.ike[i] + psi_e[i]);
    }
    const double t = (static_cast<double>(s) + 0.5) * dt;
    const double x = (t - t0) / tau;
    ez[src] -= ce * dx * std::exp(-x * x);  // unit current sheet density / dx
  }
  return rec;
}

double diff_energy(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e += (a[i] - b[i]) * (a[i] - b[i]);
  return e;
}

}  // namespace

ReflectionResult cpml_reflection_1d(const CpmlProfile& p, const ReflectionSetup& s) {
  p.validate();
  if (!(s.pulse_cells > 0.0) || s.gap_cells < 8) throw ConfigError("reflection: bad setup");
  const int layer = p.thickness[XHi];
  const double dt = cfl_timestep(s.dx, 1, s.cfl_factor);
  const double tau = s.pulse_cells * s.dx / kC0;
  const double t0 = 5.0 * tau;
  const std::size_t lead = static_cast<std::size_t>(std::ceil(6.0 * s.pulse_cells)) + s.gap_cells;
  // src sits `lead` cells from the left wall so its echo never reaches the
  // probe inside the window; the probe is halfway between src and the layer.
  const std::size_t src = 4 * lead;
  const std::size_t wall = src + s.gap_cells;
  const std::size_t probe = src + s.gap_cells / 2;
  // window: pulse out and back from the wall plus its full duration
  const double travel = (static_cast<double>(s.gap_cells) * 1.5 + 12.0 * s.pulse_cells) * s.dx;
  const auto steps = static_cast<std::size_t>(std::ceil((travel / kC0 + t0) / dt));

  const std::size_t big = wall + 8 * lead + static_cast<std::size_t>(layer);
  const auto open = run_line(big, 0, p, s.dx, dt, src, probe, steps, t0, tau);
  const auto cpml = run_line(wall + layer, layer, p, s.dx, dt, src, probe, steps, t0, tau);
  const auto pec = run_line(wall, 0, p, s.dx, dt, src, probe, steps, t0, tau);

  ReflectionResult r;
  r.reflected_energy = diff_energy(cpml, open);
  r.baseline_energy = diff_energy(pec, open);
  r.db = 10.0 * std::log10(r.reflected_energy / r.baseline_energy);
  return r;
}

}  // namespace lemp::fdtd
