#pragma once
// Per-axis CPML tables shared by the kernels.

#include <cstddef>
#include <vector>

#include "lemp/fdtd/grid.hpp"

namespace lemp::fdtd::detail {

/// CPML coefficients along one axis with n cells: integer nodes 0..n (E
/// positions for derivatives along this axis) and half nodes 0..n-1 (at
/// i + 1/2). Nodes inside either layer get a slot in the compact psi arrays.
template <class Real>
struct PmlAxis {
  std::size_t n = 0;
  std::vector<Real> be, ae, ike;  // integer nodes
  std::vector<Real> bh, ah, ikh;  // half nodes
  std::vector<std::size_t> nodes; // integer node indices that own a psi slot
  std::vector<int> slot;          // node -> slot or -1

  std::size_t slots() const { return nodes.size(); }

  static PmlAxis make(std::size_t n_cells, int lo, int hi, const CpmlProfile& p, double dt,
                      double dx, double eps_lo, double eps_hi) {
    PmlAxis a;
    a.n = n_cells;
    a.be.assign(n_cells + 1, Real(1));
    a.ae.assign(n_cells + 1, Real(0));
    a.ike.assign(n_cells + 1, Real(1));
    a.bh.assign(n_cells, Real(1));
    a.ah.assign(n_cells, Real(0));
    a.ikh.assign(n_cells, Real(1));
    a.slot.assign(n_cells + 1, -1);
    const double top = static_cast<double>(n_cells) - hi;
    auto fill = [&](double x, Real& b, Real& aa, Real& ik) {
      double xi = 0.0;
      double eps = 1.0;
      if (lo > 0 && x < lo) {
        xi = (lo - x) / lo;
        eps = eps_lo;
      } else if (hi > 0 && x > top) {
        xi = (x - top) / hi;
        eps = eps_hi;
      }
      if (xi <= 0.0) return;
      const CpmlCoeffs c = cpml_coeffs(p, xi, dt, dx, eps);
      b = static_cast<Real>(c.b);
      aa = static_cast<Real>(c.a);
      ik = static_cast<Real>(1.0 / c.kappa);
    };
    for (std::size_t i = 0; i <= n_cells; ++i) {
      fill(static_cast<double>(i), a.be[i], a.ae[i], a.ike[i]);
    }
    for (std::size_t i = 0; i < n_cells; ++i) {
      fill(static_cast<double>(i) + 0.5, a.bh[i], a.ah[i], a.ikh[i]);
    }
    for (std::size_t i = 0; i <= n_cells; ++i) {
      const bool in_lo = lo > 0 && i <= static_cast<std::size_t>(lo);
      const bool in_hi = hi > 0 && static_cast<double>(i) >= top;
      if (in_lo || in_hi) {
        a.slot[i] = static_cast<int>(a.nodes.size());
        a.nodes.push_back(i);
      }
    }
    return a;
  }
};

}  // namespace lemp::fdtd::detail
