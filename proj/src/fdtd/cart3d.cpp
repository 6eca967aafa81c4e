// Cartesian Yee kernel. Standard staggering with z measured from the bottom
// wall (interface at integer row kg):
//   Ex (i+1/2, j, k)   Ey (i, j+1/2, k)   Ez (i, j, k+1/2)
//   Hx (i, j+1/2, k+1/2)   Hy (i+1/2, j, k+1/2)   Hz (i+1/2, j+1/2, k)
// All six outer faces are perfect conductors behind the CPML.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "lemp/constants.hpp"
#include "lemp/errors.hpp"
#include "lemp/fdtd/simulation.hpp"
#include "pml_axis.hpp"

namespace lemp::fdtd {

namespace {

enum Comp { EX = 0, EY, EZ, HX, HY, HZ };

template <class Real>
class Cart3DKernel final : public Kernel {
 public:
  Cart3DKernel(const MtleModel& source, const GroundModel& ground, const GridSpec& grid,
               const CpmlProfile& pml, const SimulationOptions& opt)
      : model_(source), dx_(grid.dx), dt_(grid.dt()), source_enabled_(opt.source_enabled) {
    const auto c = grid.cells();
    nx_ = c[0];
    ny_ = c[1];
    nz_ = c[2];
    kg_ = grid.ground_level_index();
    sj_ = nz_ + 1;
    si_ = (ny_ + 1) * sj_;
    threads_ = opt.threads > 0 ? opt.threads : omp_get_max_threads();
    const bool pec = ground.is_pec();
    if (opt.mirror_source) throw ConfigError("mirror_source is only available in axi2d");
    if (!pec && kg_ == 0 && !(ground.sigma == 0.0 && ground.eps_r == 1.0)) {
      throw ConfigError("grid: a lossy ground needs ground_depth > 0");
    }
    lx0_ = pml.thickness[XLo];
    lx1_ = pml.thickness[XHi];
    ly0_ = pml.thickness[YLo];
    ly1_ = pml.thickness[YHi];
    lz0_ = (pec && kg_ == 0) ? 0 : pml.thickness[ZLo];
    lz1_ = pml.thickness[ZHi];
    if (static_cast<std::size_t>(lx0_ + lx1_) >= nx_ ||
        static_cast<std::size_t>(ly0_ + ly1_) >= ny_ ||
        static_cast<std::size_t>(lz0_ + lz1_) >= nz_) {
      throw ConfigError("grid: absorbing layers fill the domain");
    }

    const std::size_t n = (nx_ + 1) * si_;
    for (auto& f : field_) f.assign(n, Real(0));
    for (auto& f : ca_) f.assign(n, Real(0));
    for (auto& f : cb_) f.assign(n, Real(0));

    const MaterialCoeffs air = material_coeffs(0.0, 1.0, dt_, dx_);
    MaterialCoeffs soil{0.0, 0.0}, face{0.0, 0.0};
    eps_int_.assign(nz_ + 1, 1.0);
    eps_half_.assign(nz_ + 1, 1.0);
    if (!pec) {
      ground.validate();
      soil = material_coeffs(ground.sigma, ground.eps_r, dt_, dx_);
      face = material_coeffs(0.5 * ground.sigma, 0.5 * (ground.eps_r + 1.0), dt_, dx_);
    }
    for (std::size_t k = 0; k <= nz_; ++k) {
      if (k < kg_) {
        eps_int_[k] = eps_half_[k] = pec ? 0.0 : ground.eps_r;
      } else if (k == kg_) {
        eps_int_[k] = pec ? 0.0 : 0.5 * (ground.eps_r + 1.0);
      }
    }
    const Real hcoef = static_cast<Real>(dt_ / (kMu0 * dx_));
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i <= nx_; ++i) {
      for (std::size_t j = 0; j <= ny_; ++j) {
        for (std::size_t k = 0; k <= nz_; ++k) {
          const std::size_t id = i * si_ + j * sj_ + k;
          const MaterialCoeffs on_int = k < kg_ ? soil : (k == kg_ ? face : air);
          const MaterialCoeffs on_half = k < kg_ ? soil : air;
          const bool xi_in = i >= 1 && i < nx_, yj_in = j >= 1 && j < ny_,
                     zk_in = k >= 1 && k < nz_;
          if (i < nx_ && yj_in && zk_in) set(EX, id, on_int);
          if (xi_in && j < ny_ && zk_in) set(EY, id, on_int);
          if (xi_in && yj_in && k < nz_) set(EZ, id, on_half);
          if (j < ny_ && k < nz_) set_h(HX, id, hcoef);
          if (i < nx_ && k < nz_) set_h(HY, id, hcoef);
          if (i < nx_ && j < ny_) set_h(HZ, id, hcoef);
        }
      }
    }

    const double eps_soil = pec ? 1.0 : ground.eps_r;
    px_ = detail::PmlAxis<Real>::make(nx_, lx0_, lx1_, pml, dt_, dx_, 1.0, 1.0);
    py_ = detail::PmlAxis<Real>::make(ny_, ly0_, ly1_, pml, dt_, dx_, 1.0, 1.0);
    pz_ = detail::PmlAxis<Real>::make(nz_, lz0_, lz1_, pml, dt_, dx_, eps_soil, 1.0);
    const std::size_t nxs = px_.slots() * si_;
    const std::size_t nys = py_.slots() * (nx_ + 1) * sj_;
    const std::size_t nzs = pz_.slots() * (nx_ + 1) * (ny_ + 1);
    for (auto* p : {&psi_hy_x_, &psi_hz_x_, &psi_ey_x_, &psi_ez_x_}) p->assign(nxs, Real(0));
    for (auto* p : {&psi_hx_y_, &psi_hz_y_, &psi_ex_y_, &psi_ez_y_}) p->assign(nys, Real(0));
    for (auto* p : {&psi_hx_z_, &psi_hy_z_, &psi_ex_z_, &psi_ey_z_}) p->assign(nzs, Real(0));

    const double sx = grid.source_x.value_or(0.5 * grid.extents[0]);
    const double sy = grid.source_y.value_or(0.5 * grid.extents[1]);
    ic_ = static_cast<std::size_t>(std::llround(sx / dx_));
    jc_ = static_cast<std::size_t>(std::llround(sy / dx_));
    if (ic_ <= static_cast<std::size_t>(lx0_) || ic_ + lx1_ >= nx_ ||
        jc_ <= static_cast<std::size_t>(ly0_) || jc_ + ly1_ >= ny_) {
      throw ConfigError("grid: channel position lies inside the absorbing layer");
    }
    const double area = dx_ * dx_;
    for (std::size_t m = 0;; ++m) {
      const double zc = (static_cast<double>(m) + 0.5) * dx_;
      if (zc > source.channel_height) break;
      const std::size_t k = kg_ + m;
      if (k + static_cast<std::size_t>(lz1_) >= nz_) {
        throw ConfigError("grid: channel height " + std::to_string(source.channel_height) +
                          " m exceeds the domain minus the absorbing layer");
      }
      const std::size_t id = ic_ * si_ + jc_ * sj_ + k;
      src_.push_back({id, zc, static_cast<double>(cb_[EZ][id]) * dx_ / area});
    }
  }

  void update_h() override {
    const std::size_t nx = nx_, ny = ny_, nz = nz_, SI = si_, SJ = sj_;
    Real* hx = field_[HX].data();
    Real* hy = field_[HY].data();
    Real* hz = field_[HZ].data();
    const Real* ex = field_[EX].data();
    const Real* ey = field_[EY].data();
    const Real* ez = field_[EZ].data();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      const Real ikx = px_.ikh[i];
      const Real* ikz = pz_.ikh.data();
      for (std::size_t j = 0; j < ny; ++j) {
        const Real iky = py_.ikh[j];
        const std::size_t o = i * SI + j * SJ;
        const Real *dax = &ca_[HX][o], *dbx = &cb_[HX][o];
        const Real *day = &ca_[HY][o], *dby = &cb_[HY][o];
        const Real *daz = &ca_[HZ][o], *dbz = &cb_[HZ][o];
        for (std::size_t k = 0; k < nz; ++k) {
          const std::size_t id = o + k;
          hx[id] = dax[k] * hx[id] + dbx[k] * ((ey[id + 1] - ey[id]) * ikz[k] -
                                               (ez[id + SJ] - ez[id]) * iky);
          hy[id] = day[k] * hy[id] + dby[k] * ((ez[id + SI] - ez[id]) * ikx -
                                               (ex[id + 1] - ex[id]) * ikz[k]);
        }
        for (std::size_t k = 0; k <= nz; ++k) {
          const std::size_t id = o + k;
          hz[id] = daz[k] * hz[id] + dbz[k] * ((ex[id + SJ] - ex[id]) * iky -
                                               (ey[id + SI] - ey[id]) * ikx);
        }
      }
    }
    pml_h();
  }

  void update_e(double t) override {
    const std::size_t nx = nx_, ny = ny_, nz = nz_, SI = si_, SJ = sj_;
    Real* ex = field_[EX].data();
    Real* ey = field_[EY].data();
    Real* ez = field_[EZ].data();
    const Real* hx = field_[HX].data();
    const Real* hy = field_[HY].data();
    const Real* hz = field_[HZ].data();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      const Real ikx = px_.ike[i];
      const Real* ikz = pz_.ike.data();
      for (std::size_t j = 0; j < ny; ++j) {
        const Real iky = py_.ike[j];
        const std::size_t o = i * SI + j * SJ;
        const Real *cax = &ca_[EX][o], *cbx = &cb_[EX][o];
        const Real *cay = &ca_[EY][o], *cby = &cb_[EY][o];
        const Real *caz = &ca_[EZ][o], *cbz = &cb_[EZ][o];
        if (j >= 1) {
          for (std::size_t k = 1; k < nz; ++k) {
            const std::size_t id = o + k;
            ex[id] = cax[k] * ex[id] + cbx[k] * ((hz[id] - hz[id - SJ]) * iky -
                                                 (hy[id] - hy[id - 1]) * ikz[k]);
          }
        }
        if (i >= 1) {
          for (std::size_t k = 1; k < nz; ++k) {
            const std::size_t id = o + k;
            ey[id] = cay[k] * ey[id] + cby[k] * ((hx[id] - hx[id - 1]) * ikz[k] -
                                                 (hz[id] - hz[id - SI]) * ikx);
          }
          if (j >= 1) {
            for (std::size_t k = 0; k < nz; ++k) {
              const std::size_t id = o + k;
              ez[id] = caz[k] * ez[id] + cbz[k] * ((hy[id] - hy[id - SI]) * ikx -
                                                   (hx[id] - hx[id - SJ]) * iky);
            }
          }
        }
      }
    }
    pml_e();
    if (source_enabled_) {
      for (const auto& s : src_) {
        ez[s.id] -= static_cast<Real>(s.scale * mtle_current(s.z, t, model_));
      }
      if (!src_.empty()) charge_ += mtle_current(src_.front().z, t, model_) * dt_;
    }
  }

  double injected_charge() const override { return charge_; }

  ProbeStencil locate(const ProbeSpec& p) const override {
    const double x = static_cast<double>(ic_) * dx_ + p.point.r;
    const double y = static_cast<double>(jc_) * dx_;
    double fx = x / dx_, fy = y / dx_, fz = p.point.z / dx_ + static_cast<double>(kg_);
    ProbeStencil s;
    switch (p.component) {
      case FieldComponent::Ez:
        s.array = EZ;
        fz -= 0.5;
        if (p.point.z < dx_ * (1.0 - 1e-9)) {
          throw ConfigError("probe: Ez probes must sit at least one cell above the ground");
        }
        break;
      case FieldComponent::Er:
      case FieldComponent::Ex:
        s.array = EX;
        fx -= 0.5;
        break;
      case FieldComponent::Hphi:
        s.array = HY;
        fx -= 0.5;
        fz -= 0.5;
        break;
    }
    if (p.point.r < 0.0) throw ConfigError("probe: r must be >= 0");
    std::size_t i0[3];
    double w[3];
    const double f[3] = {fx, fy, fz};
    const double off[3] = {s.array == EX || s.array == HY ? 0.5 : 0.0, 0.0,
                           s.array == EX ? 0.0 : 0.5};
    const double lo[3] = {double(lx0_), double(ly0_), double(lz0_)};
    const double hi[3] = {double(nx_ - lx1_), double(ny_ - ly1_), double(nz_ - lz1_)};
    for (int a = 0; a < 3; ++a) {
      if (f[a] < -1e-9) throw ConfigError("probe lies outside the lattice");
      const double fl = std::floor(f[a] + 1e-9);
      i0[a] = static_cast<std::size_t>(std::max(0.0, fl));
      w[a] = std::max(0.0, f[a] - fl);
      if (w[a] < 1e-9) w[a] = 0.0;
      const double p0 = static_cast<double>(i0[a]) + off[a];
      const double p1 = p0 + (w[a] > 0.0 ? 1.0 : 0.0);
      if (p0 < lo[a] || p1 > hi[a]) {
        throw ConfigError("probe at r = " + std::to_string(p.point.r) + " m, z = " +
                          std::to_string(p.point.z) + " m lies inside the absorbing layer");
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int cc = 0; cc < 2; ++cc) {
          const double wt = (a ? w[0] : 1.0 - w[0]) * (b ? w[1] : 1.0 - w[1]) *
                            (cc ? w[2] : 1.0 - w[2]);
          if (wt == 0.0) continue;
          s.index.push_back((i0[0] + a) * si_ + (i0[1] + b) * sj_ + i0[2] + cc);
          s.weight.push_back(wt);
        }
      }
    }
    return s;
  }

  double sample(const ProbeStencil& s) const override {
    const auto& f = field_[s.array];
    double v = 0.0;
    for (std::size_t j = 0; j < s.index.size(); ++j) v += s.weight[j] * f[s.index[j]];
    return v;
  }

  FieldStats stats() const override {
    std::vector<FieldStats> planes(nx_ + 1);
    const double vol = dx_ * dx_ * dx_;
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i <= nx_; ++i) {
      FieldStats st;
      double we = 0.0, wh = 0.0;
      for (std::size_t j = 0; j <= ny_; ++j) {
        const std::size_t o = i * si_ + j * sj_;
        for (std::size_t k = 0; k <= nz_; ++k) {
          const double ex = field_[EX][o + k], ey = field_[EY][o + k], ez = field_[EZ][o + k];
          const double hx = field_[HX][o + k], hy = field_[HY][o + k], hz = field_[HZ][o + k];
          st.max_e = std::max({st.max_e, std::abs(ex), std::abs(ey), std::abs(ez)});
          st.max_h = std::max({st.max_h, std::abs(hx), std::abs(hy), std::abs(hz)});
          we += eps_int_[k] * (ex * ex + ey * ey) + eps_half_[k] * ez * ez;
          wh += hx * hx + hy * hy + hz * hz;
        }
      }
      st.energy = 0.5 * vol * (kEps0 * we + kMu0 * wh);
      planes[i] = st;
    }
    FieldStats total;
    for (const auto& st : planes) {
      total.max_e = std::max(total.max_e, st.max_e);
      total.max_h = std::max(total.max_h, st.max_h);
      total.energy += st.energy;
    }
    return total;
  }

  std::size_t allocated_bytes() const override {
    std::size_t n = 0;
    for (const auto& f : field_) n += f.size();
    for (const auto& f : ca_) n += f.size();
    for (const auto& f : cb_) n += f.size();
    for (const auto* p : {&psi_hy_x_, &psi_hz_x_, &psi_ey_x_, &psi_ez_x_, &psi_hx_y_,
                          &psi_hz_y_, &psi_ex_y_, &psi_ez_y_, &psi_hx_z_, &psi_hy_z_,
                          &psi_ex_z_, &psi_ey_z_}) {
      n += p->size();
    }
    return n * sizeof(Real);
  }

 private:
  struct SourceCell {
    std::size_t id;
    double z;
    double scale;
  };

  void set(int comp, std::size_t id, const MaterialCoeffs& m) {
    ca_[comp][id] = static_cast<Real>(m.ca);
    cb_[comp][id] = static_cast<Real>(m.cb);
  }
  void set_h(int comp, std::size_t id, Real db) {
    ca_[comp][id] = Real(1);
    cb_[comp][id] = db;
  }

  void pml_h() {
    const std::size_t nx = nx_, ny = ny_, nz = nz_, SI = si_, SJ = sj_;
    Real* hx = field_[HX].data();
    Real* hy = field_[HY].data();
    Real* hz = field_[HZ].data();
    const Real* ex = field_[EX].data();
    const Real* ey = field_[EY].data();
    const Real* ez = field_[EZ].data();
    const Real* dbx = cb_[HX].data();
    const Real* dby = cb_[HY].data();
    const Real* dbz = cb_[HZ].data();
    // x layers: d/dx terms of Hy, Hz
    const std::size_t nsx = px_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t s = 0; s < nsx; ++s) {
      const std::size_t i = px_.nodes[s];
      if (i >= nx) continue;
      const Real b = px_.bh[i], a = px_.ah[i];
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t o = i * SI + j * SJ;
        Real* py = &psi_hy_x_[s * SI + j * SJ];
        Real* pz = &psi_hz_x_[s * SI + j * SJ];
        for (std::size_t k = 0; k <= nz; ++k) {
          const std::size_t id = o + k;
          if (k < nz) {
            py[k] = b * py[k] + a * (ez[id + SI] - ez[id]);
            hy[id] += dby[id] * py[k];
          }
          pz[k] = b * pz[k] + a * (ey[id + SI] - ey[id]);
          hz[id] -= dbz[id] * pz[k];
        }
      }
    }
    // y layers: d/dy terms of Hx, Hz
    const std::size_t nsy = py_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t s = 0; s < nsy; ++s) {
        const std::size_t j = py_.nodes[s];
        if (j >= ny) continue;
        const Real b = py_.bh[j], a = py_.ah[j];
        const std::size_t o = i * SI + j * SJ;
        Real* px = &psi_hx_y_[(i * nsy + s) * SJ];
        Real* pz = &psi_hz_y_[(i * nsy + s) * SJ];
        for (std::size_t k = 0; k <= nz; ++k) {
          const std::size_t id = o + k;
          if (k < nz) {
            px[k] = b * px[k] + a * (ez[id + SJ] - ez[id]);
            hx[id] -= dbx[id] * px[k];
          }
          pz[k] = b * pz[k] + a * (ex[id + SJ] - ex[id]);
          hz[id] += dbz[id] * pz[k];
        }
      }
    }
    // z layers: d/dz terms of Hx, Hy
    const std::size_t nsz = pz_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t o = i * SI + j * SJ;
        Real* px = &psi_hx_z_[(i * (ny + 1) + j) * nsz];
        Real* py = &psi_hy_z_[(i * (ny + 1) + j) * nsz];
        for (std::size_t s = 0; s < nsz; ++s) {
          const std::size_t k = pz_.nodes[s];
          if (k >= nz) continue;
          const std::size_t id = o + k;
          px[s] = pz_.bh[k] * px[s] + pz_.ah[k] * (ey[id + 1] - ey[id]);
          hx[id] += dbx[id] * px[s];
          py[s] = pz_.bh[k] * py[s] + pz_.ah[k] * (ex[id + 1] - ex[id]);
          hy[id] -= dby[id] * py[s];
        }
      }
    }
  }

  void pml_e() {
    const std::size_t nx = nx_, ny = ny_, nz = nz_, SI = si_, SJ = sj_;
    Real* ex = field_[EX].data();
    Real* ey = field_[EY].data();
    Real* ez = field_[EZ].data();
    const Real* hx = field_[HX].data();
    const Real* hy = field_[HY].data();
    const Real* hz = field_[HZ].data();
    const Real* cbx = cb_[EX].data();
    const Real* cby = cb_[EY].data();
    const Real* cbz = cb_[EZ].data();
    // x layers: d/dx terms of Ey, Ez
    const std::size_t nsx = px_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t s = 0; s < nsx; ++s) {
      const std::size_t i = px_.nodes[s];
      if (i == 0 || i >= nx) continue;
      const Real b = px_.be[i], a = px_.ae[i];
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t o = i * SI + j * SJ;
        Real* py = &psi_ey_x_[s * SI + j * SJ];
        Real* pz = &psi_ez_x_[s * SI + j * SJ];
        for (std::size_t k = 0; k < nz; ++k) {
          const std::size_t id = o + k;
          py[k] = b * py[k] + a * (hz[id] - hz[id - SI]);
          ey[id] -= cby[id] * py[k];
          pz[k] = b * pz[k] + a * (hy[id] - hy[id - SI]);
          ez[id] += cbz[id] * pz[k];
        }
      }
    }
    // y layers: d/dy terms of Ex, Ez
    const std::size_t nsy = py_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t s = 0; s < nsy; ++s) {
        const std::size_t j = py_.nodes[s];
        if (j == 0 || j >= ny) continue;
        const Real b = py_.be[j], a = py_.ae[j];
        const std::size_t o = i * SI + j * SJ;
        Real* px = &psi_ex_y_[(i * nsy + s) * SJ];
        Real* pz = &psi_ez_y_[(i * nsy + s) * SJ];
        for (std::size_t k = 0; k < nz; ++k) {
          const std::size_t id = o + k;
          px[k] = b * px[k] + a * (hz[id] - hz[id - SJ]);
          ex[id] += cbx[id] * px[k];
          pz[k] = b * pz[k] + a * (hx[id] - hx[id - SJ]);
          ez[id] -= cbz[id] * pz[k];
        }
      }
    }
    // z layers: d/dz terms of Ex, Ey
    const std::size_t nsz = pz_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t o = i * SI + j * SJ;
        Real* px = &psi_ex_z_[(i * (ny + 1) + j) * nsz];
        Real* py = &psi_ey_z_[(i * (ny + 1) + j) * nsz];
        for (std::size_t s = 0; s < nsz; ++s) {
          const std::size_t k = pz_.nodes[s];
          if (k == 0 || k >= nz) continue;
          const std::size_t id = o + k;
          px[s] = pz_.be[k] * px[s] + pz_.ae[k] * (hy[id] - hy[id - 1]);
          ex[id] -= cbx[id] * px[s];
          py[s] = pz_.be[k] * py[s] + pz_.ae[k] * (hx[id] - hx[id - 1]);
          ey[id] += cby[id] * py[s];
        }
      }
    }
  }

  MtleModel model_;
  double dx_, dt_;
  bool source_enabled_;
  std::size_t nx_ = 0, ny_ = 0, nz_ = 0, kg_ = 0, si_ = 0, sj_ = 0;
  std::size_t ic_ = 0, jc_ = 0;
  int lx0_ = 0, lx1_ = 0, ly0_ = 0, ly1_ = 0, lz0_ = 0, lz1_ = 0;
  int threads_ = 1;
  double charge_ = 0.0;
  std::vector<Real> field_[6];
  std::vector<Real> ca_[6];
  std::vector<Real> cb_[6];
  std::vector<double> eps_int_, eps_half_;
  detail::PmlAxis<Real> px_, py_, pz_;
  std::vector<Real> psi_hy_x_, psi_hz_x_, psi_ey_x_, psi_ez_x_;
  std::vector<Real> psi_hx_y_, psi_hz_y_, psi_ex_y_, psi_ez_y_;
  std::vector<Real> psi_hx_z_, psi_hy_z_, psi_ex_z_, psi_ey_z_;
  std::vector<SourceCell> src_;
};

}  // namespace

std::unique_ptr<Kernel> make_cart3d_kernel(const MtleModel& source, const GroundModel& ground,
                                           const GridSpec& grid, const CpmlProfile& pml,
                                           const SimulationOptions& opt) {
  if (grid.precision == Precision::Single) {
    return std::make_unique<Cart3DKernel<float>>(source, ground, grid, pml, opt);
  }
  return std::make_unique<Cart3DKernel<double>>(source, ground, grid, pml, opt);
}

}  // namespace lemp::fdtd
