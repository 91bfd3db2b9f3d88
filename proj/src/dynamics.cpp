#include "twosol/dynamics.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "twosol/errors.hpp"
#include "twosol/interaction.hpp"
#include "twosol/kernels.hpp"
#include "twosol/soliton.hpp"

namespace twosol {

Regime regime(double gamma) {
  if (gamma < 0.0) throw InvalidParameter("regime: gamma must be non-negative");
  if (gamma < 1.5) return Regime::Escape;
  if (gamma > 2.0) return Regime::Attraction;
  return Regime::Unresolved;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Escape: return "escape";
    case Regime::Attraction: return "attraction";
    case Regime::Unresolved: return "unresolved";
  }
  return "unresolved";
}

namespace {

constexpr double kHStep = 0.005;  // quadrature spacing for H(z) in the table

double htilde_from(double z, double p, double gamma, double h, double rho) {
  const double c = cp_constant(p);
  return (2.0 / q_mass(p)) * (h - 2.0 * gamma * c * c * std::exp(-z) * rho);
}

using Gauss = boost::math::quadrature::gauss<double, 10>;

}  // namespace

double htilde_direct(double z, double p, double gamma, const RefinedModeSolver& modes) {
  const double h = h_interaction(z, p, kHStep);
  const double rho = gamma == 0.0 ? 1.0 : modes.solve(gamma, z).rho;
  return htilde_from(z, p, gamma, h, rho);
}

struct ForceLaw::Impl {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
  std::vector<double> F;  // F at the nodes
  std::vector<double> G;  // int_{z_min}^{z_i} dz / (2 sqrt F)
  std::size_t positive_upto = 0;  // G valid for nodes < positive_upto
  double f_max = 0.0;
  double g_z0 = 0.0;
  double F_z0 = 0.0;
};

ForceLaw::ForceLaw(const ForceLawConfig& cfg) : cfg_(cfg) {
  ModelParams{cfg.p, cfg.gamma}.validate();
  if (!(cfg.z_min >= 4.0 && cfg.z_max > cfg.z_min + 3 * cfg.step && cfg.step > 0.0))
    throw InvalidParameter("ForceLaw: bad table range");
  if (cfg.z0 < cfg.z_min || cfg.z0 >= cfg.z_max) throw InvalidParameter("ForceLaw: z0 outside the table");
  sigma_sq_ = twosol::sigma_sq(cfg.p);

  const auto n = static_cast<std::size_t>(std::llround((cfg.z_max - cfg.z_min) / cfg.step)) + 1;
  nodes_.resize(n);
  const Grid1D grid = Grid1D::symmetric(cfg.grid_half_width, cfg.grid_n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i].z = snap_separation(cfg.z_min + cfg.step * i, grid.spacing());

  std::unique_ptr<RefinedModeSolver> modes;
  if (cfg.gamma != 0.0) modes = std::make_unique<RefinedModeSolver>(grid, cfg.p);
  kernels::for_each_index(n, [&](std::size_t i) {
    ForceNode& nd = nodes_[i];
    nd.h = h_interaction(nd.z, cfg.p, kHStep);
    nd.rho = modes ? modes->solve(cfg.gamma, nd.z).rho : 1.0;
    nd.htilde = htilde_from(nd.z, cfg.p, cfg.gamma, nd.h, nd.rho);
    nd.f = nd.htilde * std::exp(nd.z);
  });

  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = nodes_[i].f;
  const double step = (nodes_.back().z - nodes_.front().z) / static_cast<double>(n - 1);
  impl_ = std::make_unique<Impl>(Impl{
      boost::math::interpolators::cardinal_cubic_b_spline<double>(fv.begin(), fv.end(), nodes_.front().z, step),
      std::vector<double>(n), std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()), 0, fv.back(), 0.0,
      0.0});
  Impl& im = *impl_;
  im.F[n - 1] = im.f_max * std::exp(-nodes_.back().z);
  for (std::size_t i = n - 1; i-- > 0;)
    im.F[i] = im.F[i + 1] + Gauss::integrate([&](double z) { return htilde(z); }, nodes_[i].z, nodes_[i + 1].z);

  im.G[0] = 0.0;
  im.positive_upto = im.F[0] > 0.0 ? 1 : 0;
  for (std::size_t i = 1; i < n && im.positive_upto == i; ++i) {
    if (!(im.F[i] > 0.0)) break;
    im.G[i] = im.G[i - 1] + Gauss::integrate([&](double z) { return 0.5 / std::sqrt(big_f(z)); }, nodes_[i - 1].z,
                                             nodes_[i].z);
    im.positive_upto = i + 1;
  }
  if (im.positive_upto > 0 && nodes_.front().z <= cfg.z0) {
    im.F_z0 = big_f(cfg.z0);
    if (im.F_z0 > 0.0) {
      const auto k = static_cast<std::size_t>((cfg.z0 - nodes_.front().z) / step);
      if (k < im.positive_upto)
        im.g_z0 = im.G[k] + Gauss::integrate([&](double z) { return 0.5 / std::sqrt(big_f(z)); }, nodes_[k].z, cfg.z0);
    }
  }
}

ForceLaw::~ForceLaw() = default;
ForceLaw::ForceLaw(ForceLaw&&) noexcept = default;
ForceLaw& ForceLaw::operator=(ForceLaw&&) noexcept = default;

void ForceLaw::check_range(double z) const {
  if (!(z >= nodes_.front().z - 1e-12)) throw DomainError("ForceLaw: z below the tabulated range");
}

double ForceLaw::f(double z) const {
  check_range(z);
  if (z >= nodes_.back().z) return impl_->f_max;
  return impl_->spline(z);
}

double ForceLaw::htilde(double z) const { return f(z) * std::exp(-z); }

double ForceLaw::big_f(double z) const {
  check_range(z);
  const Impl& im = *impl_;
  if (z >= nodes_.back().z) return im.f_max * std::exp(-z);
  const double step = nodes_[1].z - nodes_[0].z;
  auto i = static_cast<std::size_t>((z - nodes_.front().z) / step);
  i = std::min(i, nodes_.size() - 2);
  return im.F[i + 1] + Gauss::integrate([&](double x) { return htilde(x); }, z, nodes_[i + 1].z);
}

double ForceLaw::classical_velocity(double z) const {
  const double F = big_f(z);
  if (!(F > 0.0)) throw RegimeError("classical_velocity: F(z) <= 0, no zero-energy orbit");
  return std::sqrt(F);
}

double ForceLaw::zeta(double z) const {
  check_range(z);
  const Impl& im = *impl_;
  if (!(im.F_z0 > 0.0)) throw RegimeError("zeta: F(z0) <= 0");
  const std::size_t n = nodes_.size();
  auto integrand = [&](double x) { return 0.5 / std::sqrt(big_f(x)); };
  double g;
  if (z >= nodes_.back().z) {
    if (im.positive_upto < n || !(im.f_max > 0.0)) throw RegimeError("zeta: F <= 0 inside the range");
    g = im.G[n - 1] + (std::exp(0.5 * z) - std::exp(0.5 * nodes_.back().z)) / std::sqrt(im.f_max);
  } else {
    const double step = nodes_[1].z - nodes_[0].z;
    auto i = static_cast<std::size_t>((z - nodes_.front().z) / step);
    i = std::min(i, n - 2);
    if (i >= im.positive_upto || !(big_f(z) > 0.0)) throw RegimeError("zeta: F <= 0 inside the range");
    g = im.G[i] + Gauss::integrate(integrand, nodes_[i].z, z);
  }
  return g - im.g_z0;
}

double ForceLaw::zeta_inf(double z) const {
  if (!(impl_->F_z0 > 0.0)) throw RegimeError("zeta_inf: F(z0) <= 0");
  const double r = 1.0 / std::sqrt(impl_->F_z0);
  // below z0 the continued F(z0) e^{z0 - z} integrates in closed form
  if (z < cfg_.z0) return r * std::exp(0.5 * (z - cfg_.z0));
  return zeta(z) + r;
}

double ForceLaw::zeta_inf_inverse(double s) const {
  if (!(s > 0.0)) throw DomainError("zeta_inf_inverse: time must be positive");
  const double lo = cfg_.z0;
  if (s <= zeta_inf(lo)) return lo + 2.0 * std::log(s * std::sqrt(impl_->F_z0));
  double hi = lo + 2.0;
  while (zeta_inf(hi) < s) {
    hi += 4.0;
    if (hi > 400.0) throw DomainError("zeta_inf_inverse: time beyond range");
  }
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve([&](double z) { return zeta_inf(z) - s; }, lo, hi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

double ForceLaw::energy(double z, double v) const { return v * v - big_f(z); }

Trajectory integrate_ode(const ForceLaw& law, double z_init, double v_init, double s0, double s1, double dt,
                         std::size_t record_every) {
  if (!(dt > 0.0)) throw InvalidParameter("integrate_ode: dt must be positive");
  if (record_every == 0) record_every = 1;
  const double zlo = law.table().front().z;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(s1 - s0) / dt - 1e-9));
  const double hstep = steps ? (s1 - s0) / static_cast<double>(steps) : 0.0;

  Trajectory tr;
  double z = z_init, v = v_init, s = s0;
  const double e0 = law.energy(z, v);
  tr.s.push_back(s);
  tr.z.push_back(z);
  tr.v.push_back(v);
  auto acc = [&](double zz) { return -law.htilde(zz); };
  for (std::size_t k = 1; k <= steps; ++k) {
    const double z1 = z, v1 = v;
    const double kz1 = 2 * v1, kv1 = acc(z1);
    const double z2 = z + 0.5 * hstep * kz1, v2 = v + 0.5 * hstep * kv1;
    if (z2 < zlo) { tr.truncated = true; break; }
    const double kz2 = 2 * v2, kv2 = acc(z2);
    const double z3 = z + 0.5 * hstep * kz2, v3 = v + 0.5 * hstep * kv2;
    if (z3 < zlo) { tr.truncated = true; break; }
    const double kz3 = 2 * v3, kv3 = acc(z3);
    const double z4 = z + hstep * kz3, v4 = v + hstep * kv3;
    if (z4 < zlo) { tr.truncated = true; break; }
    const double kz4 = 2 * v4, kv4 = acc(z4);
    const double zn = z + hstep / 6.0 * (kz1 + 2 * kz2 + 2 * kz3 + kz4);
    const double vn = v + hstep / 6.0 * (kv1 + 2 * kv2 + 2 * kv3 + kv4);
    if (zn < zlo || !std::isfinite(zn)) { tr.truncated = true; break; }
    z = zn;
    v = vn;
    s = s0 + hstep * static_cast<double>(k);
    tr.energy_drift = std::max(tr.energy_drift, std::abs(law.energy(z, v) - e0));
    if (k % record_every == 0 || k == steps) {
      tr.s.push_back(s);
      tr.z.push_back(z);
      tr.v.push_back(v);
    }
  }
  if (tr.truncated) tr.status = "left the tabulated range at s = " + std::to_string(s);
  return tr;
}

}  // namespace twosol
