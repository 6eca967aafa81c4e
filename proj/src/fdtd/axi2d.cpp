// Axisymmetric (r, z) Yee kernel for the TM field set Ez, Er, Hphi.
//
// Lattice (z measured from the bottom wall, kg = interface row):
//   Ez(i, k)   at (i dx,       (k+1/2) dx)   i in [0, nr], k in [0, nz)
//   Er(i, k)   at ((i+1/2) dx, k dx)         i in [0, nr), k in [0, nz]
//   Hphi(i, k) at ((i+1/2) dx, (k+1/2) dx)   i in [0, nr), k in [0, nz)
// The outer radius, top and bottom are perfect conductors behind the CPML.

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

template <class Real>
class Axi2DKernel final : public Kernel {
 public:
  Axi2DKernel(const MtleModel& source, const GroundModel& ground, const GridSpec& grid,
              const CpmlProfile& pml, const SimulationOptions& opt)
      : src_model_(source), dx_(grid.dx), dt_(grid.dt()), source_enabled_(opt.source_enabled) {
    const auto c = grid.cells();
    nr_ = c[0];
    nz_ = c[2];
    kg_ = grid.ground_level_index();
    stride_ = nz_ + 1;
    threads_ = opt.threads > 0 ? opt.threads : omp_get_max_threads();
    const bool pec = ground.is_pec();
    lr_ = pml.thickness[XHi];
    lt_ = pml.thickness[ZHi];
    lb_ = (pec && kg_ == 0) ? 0 : pml.thickness[ZLo];
    if (!pec && kg_ == 0 && !(ground.sigma == 0.0 && ground.eps_r == 1.0)) {
      throw ConfigError("grid: a lossy ground needs ground_depth > 0");
    }
    if (static_cast<std::size_t>(lr_) >= nr_ ||
        static_cast<std::size_t>(lt_ + lb_) >= nz_) {
      throw ConfigError("grid: absorbing layers fill the domain");
    }

    const std::size_t n = (nr_ + 1) * stride_;
    ez_.assign(n, Real(0));
    er_.assign(n, Real(0));
    hp_.assign(n, Real(0));
    ca_ez_.assign(n, Real(0));
    cb_ez_.assign(n, Real(0));
    ca_er_.assign(n, Real(0));
    cb_er_.assign(n, Real(0));
    da_h_.assign(n, Real(0));
    db_h_.assign(n, Real(0));

    const MaterialCoeffs air = material_coeffs(0.0, 1.0, dt_, dx_);
    MaterialCoeffs soil{0.0, 0.0};
    MaterialCoeffs face{0.0, 0.0};
    eps_ez_.assign(nz_ + 1, 1.0);
    eps_er_.assign(nz_ + 1, 1.0);
    if (!pec) {
      ground.validate();
      soil = material_coeffs(ground.sigma, ground.eps_r, dt_, dx_);
      face = material_coeffs(0.5 * ground.sigma, 0.5 * (ground.eps_r + 1.0), dt_, dx_);
    }
    for (std::size_t k = 0; k <= nz_; ++k) {
      if (k < kg_) {
        eps_ez_[k] = pec ? 0.0 : ground.eps_r;
        eps_er_[k] = pec ? 0.0 : ground.eps_r;
      } else if (k == kg_) {
        eps_er_[k] = pec ? 0.0 : 0.5 * (ground.eps_r + 1.0);
      }
    }
    const double hcoef = dt_ / (kMu0 * dx_);
    for (std::size_t i = 0; i <= nr_; ++i) {
      for (std::size_t k = 0; k <= nz_; ++k) {
        const std::size_t id = i * stride_ + k;
        const MaterialCoeffs mz = k < kg_ ? soil : air;
        const MaterialCoeffs mr = k < kg_ ? soil : (k == kg_ ? face : air);
        if (i < nr_ && k < nz_) {
          ca_ez_[id] = static_cast<Real>(mz.ca);
          cb_ez_[id] = static_cast<Real>(mz.cb);
          da_h_[id] = Real(1);
          db_h_[id] = static_cast<Real>(hcoef);
        }
        if (i < nr_ && k >= 1 && k < nz_) {
          ca_er_[id] = static_cast<Real>(mr.ca);
          cb_er_[id] = static_cast<Real>(mr.cb);
        }
      }
    }

    const double eps_soil = pec ? 1.0 : ground.eps_r;
    pr_ = detail::PmlAxis<Real>::make(nr_, 0, lr_, pml, dt_, dx_, 1.0, 1.0);
    pz_ = detail::PmlAxis<Real>::make(nz_, lb_, lt_, pml, dt_, dx_, eps_soil, 1.0);
    psi_ez_r_.assign(pr_.slots() * stride_, Real(0));
    psi_hp_r_.assign(pr_.slots() * stride_, Real(0));
    psi_er_z_.assign(pz_.slots() * (nr_ + 1), Real(0));
    psi_hp_z_.assign(pz_.slots() * (nr_ + 1), Real(0));

    // channel cells: centres at (m + 1/2) dx above the interface, up to H
    const double area = kPi * 0.25 * dx_ * dx_;
    for (std::size_t m = 0;; ++m) {
      const double zc = (static_cast<double>(m) + 0.5) * dx_;
      if (zc > source.channel_height) break;
      const std::size_t k = kg_ + m;
      if (k + static_cast<std::size_t>(lt_) >= nz_) {
        throw ConfigError("grid: channel height " + std::to_string(source.channel_height) +
                          " m exceeds the domain minus the absorbing layer");
      }
      src_.push_back({k, zc, static_cast<double>(cb_ez_[k]) * dx_ / area});
      if (opt.mirror_source) {
        if (kg_ < m + 1 + static_cast<std::size_t>(lb_)) {
          throw ConfigError("grid: mirrored channel does not fit below the interface");
        }
        const std::size_t km = kg_ - 1 - m;
        src_.push_back({km, zc, static_cast<double>(cb_ez_[km]) * dx_ / area});
      }
    }
    if (opt.mirror_source && (pec || ground.sigma != 0.0 || ground.eps_r != 1.0)) {
      throw ConfigError("mirror_source needs a free-space lower half (sigma 0, eps_r 1)");
    }
  }

  void update_h() override {
    const std::size_t nr = nr_, nz = nz_, S = stride_;
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nr; ++i) {
      Real* h = &hp_[i * S];
      const Real* ez0 = &ez_[i * S];
      const Real* ez1 = &ez_[(i + 1) * S];
      const Real* er = &er_[i * S];
      const Real* da = &da_h_[i * S];
      const Real* db = &db_h_[i * S];
      const Real* ikz = pz_.ikh.data();
      const Real ikr = pr_.ikh[i];
      for (std::size_t k = 0; k < nz; ++k) {
        h[k] = da[k] * h[k] + db[k] * ((ez1[k] - ez0[k]) * ikr - (er[k + 1] - er[k]) * ikz[k]);
      }
    }
    // r layer
    const std::size_t nsr = pr_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t s = 0; s < nsr; ++s) {
      const std::size_t i = pr_.nodes[s];
      if (i >= nr) continue;
      const Real b = pr_.bh[i], a = pr_.ah[i];
      Real* psi = &psi_hp_r_[s * S];
      Real* h = &hp_[i * S];
      const Real* ez0 = &ez_[i * S];
      const Real* ez1 = &ez_[(i + 1) * S];
      const Real* db = &db_h_[i * S];
      for (std::size_t k = 0; k < nz; ++k) {
        psi[k] = b * psi[k] + a * (ez1[k] - ez0[k]);
        h[k] += db[k] * psi[k];
      }
    }
    // z layers
    const std::size_t nsz = pz_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nr; ++i) {
      Real* psi = &psi_hp_z_[i * nsz];
      Real* h = &hp_[i * S];
      const Real* er = &er_[i * S];
      const Real* db = &db_h_[i * S];
      for (std::size_t s = 0; s < nsz; ++s) {
        const std::size_t k = pz_.nodes[s];
        if (k >= nz) continue;
        psi[s] = pz_.bh[k] * psi[s] + pz_.ah[k] * (er[k + 1] - er[k]);
        h[k] -= db[k] * psi[s];
      }
    }
  }

  void update_e(double t) override {
    const std::size_t nr = nr_, nz = nz_, S = stride_;
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nr; ++i) {
      // Er row
      {
        Real* e = &er_[i * S];
        const Real* h = &hp_[i * S];
        const Real* ca = &ca_er_[i * S];
        const Real* cb = &cb_er_[i * S];
        const Real* ikz = pz_.ike.data();
        for (std::size_t k = 1; k < nz; ++k) {
          e[k] = ca[k] * e[k] - cb[k] * (h[k] - h[k - 1]) * ikz[k];
        }
      }
      // Ez row
      Real* e = &ez_[i * S];
      const Real* ca = &ca_ez_[i * S];
      const Real* cb = &cb_ez_[i * S];
      const Real* h1 = &hp_[i * S];
      if (i == 0) {
        for (std::size_t k = 0; k < nz; ++k) e[k] = ca[k] * e[k] + cb[k] * Real(4) * h1[k];
      } else {
        const Real* h0 = &hp_[(i - 1) * S];
        const Real wp = static_cast<Real>((static_cast<double>(i) + 0.5) / static_cast<double>(i));
        const Real wm = static_cast<Real>((static_cast<double>(i) - 0.5) / static_cast<double>(i));
        const Real ikr = pr_.ike[i];
        for (std::size_t k = 0; k < nz; ++k) {
          e[k] = ca[k] * e[k] + cb[k] * (wp * h1[k] - wm * h0[k]) * ikr;
        }
      }
    }
    const std::size_t nsr = pr_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t s = 0; s < nsr; ++s) {
      const std::size_t i = pr_.nodes[s];
      if (i == 0 || i >= nr) continue;
      const Real b = pr_.be[i], a = pr_.ae[i];
      const Real wp = static_cast<Real>((static_cast<double>(i) + 0.5) / static_cast<double>(i));
      const Real wm = static_cast<Real>((static_cast<double>(i) - 0.5) / static_cast<double>(i));
      Real* psi = &psi_ez_r_[s * S];
      Real* e = &ez_[i * S];
      const Real* cb = &cb_ez_[i * S];
      const Real* h1 = &hp_[i * S];
      const Real* h0 = &hp_[(i - 1) * S];
      for (std::size_t k = 0; k < nz; ++k) {
        psi[k] = b * psi[k] + a * (wp * h1[k] - wm * h0[k]);
        e[k] += cb[k] * psi[k];
      }
    }
    const std::size_t nsz = pz_.slots();
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i < nr; ++i) {
      Real* psi = &psi_er_z_[i * nsz];
      Real* e = &er_[i * S];
      const Real* h = &hp_[i * S];
      const Real* cb = &cb_er_[i * S];
      for (std::size_t s = 0; s < nsz; ++s) {
        const std::size_t k = pz_.nodes[s];
        if (k == 0 || k >= nz) continue;
        psi[s] = pz_.be[k] * psi[s] - pz_.ae[k] * (h[k] - h[k - 1]);
        e[k] += cb[k] * psi[s];
      }
    }
    if (source_enabled_) inject(t);
  }

  double injected_charge() const override { return charge_; }

  ProbeStencil locate(const ProbeSpec& p) const override {
    double fi = p.point.r / dx_;
    double fk = p.point.z / dx_ + static_cast<double>(kg_);
    int array = 0;
    switch (p.component) {
      case FieldComponent::Ez:
        array = 0;
        fk -= 0.5;
        if (p.point.z < dx_ * (1.0 - 1e-9)) {
          throw ConfigError("probe: Ez probes must sit at least one cell above the ground");
        }
        break;
      case FieldComponent::Er:
      case FieldComponent::Ex:
        array = 1;
        fi -= 0.5;
        break;
      case FieldComponent::Hphi:
        array = 2;
        fi -= 0.5;
        fk -= 0.5;
        break;
    }
    if (p.point.r < 0.0 || fi < -1e-9) {
      throw ConfigError("probe: r = " + std::to_string(p.point.r) + " m is off the lattice");
    }
    ProbeStencil s;
    s.array = array;
    const auto span = [](double f, std::size_t& i0, double& w) {
      const double fl = std::floor(f + 1e-9);
      i0 = static_cast<std::size_t>(std::max(0.0, fl));
      w = std::max(0.0, f - fl);
      if (w < 1e-9) w = 0.0;
    };
    std::size_t i0, k0;
    double wi, wk;
    span(fi, i0, wi);
    span(fk, k0, wk);
    const double r_hi = (static_cast<double>(i0) + (wi > 0 ? 1 : 0) + (array == 0 ? 0.0 : 0.5));
    const double r_pml = static_cast<double>(nr_ - lr_);
    const double z_lo = static_cast<double>(k0) + (array == 1 ? 0.0 : 0.5);
    const double z_hi = z_lo + (wk > 0 ? 1.0 : 0.0);
    if (r_hi > r_pml || z_lo < lb_ || z_hi > static_cast<double>(nz_ - lt_) || fk < 0.0) {
      throw ConfigError("probe at r = " + std::to_string(p.point.r) + " m, z = " +
                        std::to_string(p.point.z) + " m lies inside the absorbing layer");
    }
    for (int a = 0; a < 2; ++a) {
      const double wa = a ? wi : 1.0 - wi;
      if (wa == 0.0) continue;
      for (int b = 0; b < 2; ++b) {
        const double wb = b ? wk : 1.0 - wk;
        if (wb == 0.0) continue;
        s.index.push_back((i0 + a) * stride_ + k0 + b);
        s.weight.push_back(wa * wb);
      }
    }
    return s;
  }

  double sample(const ProbeStencil& s) const override {
    const std::vector<Real>& f = s.array == 0 ? ez_ : (s.array == 1 ? er_ : hp_);
    double v = 0.0;
    for (std::size_t j = 0; j < s.index.size(); ++j) v += s.weight[j] * f[s.index[j]];
    return v;
  }

  FieldStats stats() const override {
    std::vector<FieldStats> rows(nr_ + 1);
    const std::size_t S = stride_;
    const double vol = 2.0 * kPi * dx_ * dx_ * dx_;
#pragma omp parallel for schedule(static) num_threads(threads_)
    for (std::size_t i = 0; i <= nr_; ++i) {
      FieldStats st;
      const double r_int = i == 0 ? 0.125 : static_cast<double>(i);  // axis cell: pi (dx/2)^2 dx
      const double r_half = static_cast<double>(i) + 0.5;
      double we = 0.0, wh = 0.0;
      for (std::size_t k = 0; k < nz_; ++k) {
        const double ez = ez_[i * S + k];
        st.max_e = std::max(st.max_e, std::abs(ez));
        we += eps_ez_[k] * ez * ez * r_int;
        if (i < nr_) {
          const double er = er_[i * S + k];
          const double h = hp_[i * S + k];
          st.max_e = std::max(st.max_e, std::abs(er));
          st.max_h = std::max(st.max_h, std::abs(h));
          we += eps_er_[k] * er * er * r_half;
          wh += h * h * r_half;
        }
      }
      st.energy = 0.5 * vol * (kEps0 * we + kMu0 * wh);
      rows[i] = st;
    }
    FieldStats total;
    for (const auto& st : rows) {
      total.max_e = std::max(total.max_e, st.max_e);
      total.max_h = std::max(total.max_h, st.max_h);
      total.energy += st.energy;
    }
    return total;
  }

  std::size_t allocated_bytes() const override {
    const std::size_t n = ez_.size() + er_.size() + hp_.size() + ca_ez_.size() +
                          cb_ez_.size() + ca_er_.size() + cb_er_.size() + da_h_.size() +
                          db_h_.size() + psi_ez_r_.size() + psi_hp_r_.size() +
                          psi_er_z_.size() + psi_hp_z_.size();
    return n * sizeof(Real);
  }

 private:
  struct SourceCell {
    std::size_t k;
    double z;      // height on the channel [m]
    double scale;  // dt / (eps A (1 + loss)) [V/m per A]
  };

  void inject(double t) {
    for (const auto& c : src_) {
      const double current = mtle_current(c.z, t, src_model());
      ez_[c.k] -= static_cast<Real>(c.scale * current);
    }
    if (!src_.empty()) charge_ += mtle_current(src_.front().z, t, src_model()) * dt_;
  }

  const MtleModel& src_model() const { return src_model_; }

  MtleModel src_model_;
  std::vector<SourceCell> src_;
  double dx_, dt_;
  bool source_enabled_;
  std::size_t nr_ = 0, nz_ = 0, kg_ = 0, stride_ = 0;
  int lr_ = 0, lt_ = 0, lb_ = 0;
  int threads_ = 1;
  double charge_ = 0.0;
  std::vector<Real> ez_, er_, hp_;
  std::vector<Real> ca_ez_, cb_ez_, ca_er_, cb_er_, da_h_, db_h_;
  std::vector<double> eps_ez_, eps_er_;
  detail::PmlAxis<Real> pr_, pz_;
  std::vector<Real> psi_ez_r_, psi_hp_r_, psi_er_z_, psi_hp_z_;
};

}  // namespace

std::unique_ptr<Kernel> make_axi2d_kernel(const MtleModel& source, const GroundModel& ground,
                                          const GridSpec& grid, const CpmlProfile& pml,
                                          const SimulationOptions& opt) {
  if (grid.precision == Precision::Single) {
    return std::make_unique<Axi2DKernel<float>>(source, ground, grid, pml, opt);
  }
  return std::make_unique<Axi2DKernel<double>>(source, ground, grid, pml, opt);
}

}  // namespace lemp::fdtd
