#include "twosol/evolver.hpp"

#include <algorithm>
#include <cmath>

#include "twosol/errors.hpp"
#include "twosol/kernels.hpp"

namespace twosol {

double discrete_mass(const WaveField& u) {
  double s = 0.0;
  for (const auto& c : u.values) s += std::norm(c);
  return s * u.grid.spacing();
}

double discrete_energy(const WaveField& u, const ModelParams& mp) {
  const double h = u.grid.spacing();
  const auto& v = u.values;
  double grad = std::norm(v.front()) + std::norm(v.back());  // Dirichlet ghosts
  for (std::size_t j = 0; j + 1 < v.size(); ++j) grad += std::norm(v[j + 1] - v[j]);
  grad /= h;
  const double point = mp.gamma * std::norm(v[u.grid.zero_index()]);
  const double pot = kernels::abs_pow_sum(v, mp.p + 1.0) * h;
  return grad + point - 2.0 / (mp.p + 1.0) * pot;
}

namespace {

std::unique_ptr<TridiagLU<cplx>> factor_cn(const std::vector<cplx>& diag, double h, double dt) {
  const cplx a{0.0, 0.5 * dt};
  std::vector<cplx> d(diag.size()), off(diag.size() - 1, a * (-1.0 / (h * h)));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 + a * diag[i];
  return std::make_unique<TridiagLU<cplx>>(off, d, off);
}

}  // namespace

Evolver::Evolver(const Grid1D& grid, const EvolverConfig& cfg) : grid_(grid), cfg_(cfg) {
  cfg.params.validate();
  if (!(std::abs(cfg.dt) > 0.0) || !std::isfinite(cfg.dt)) throw InvalidParameter("Evolver: dt must be nonzero");
  const double h = grid.spacing();
  diag_.assign(grid.size(), cplx{2.0 / (h * h), 0.0});
  diag_[grid.zero_index()] += cfg.params.gamma / h;
  lhs_ = factor_cn(diag_, h, cfg.dt);
}

void Evolver::linear_step(WaveField& u, double dt) const {
  if (!(u.grid == grid_)) throw GridMismatch("Evolver: field on a different grid");
  const double h = grid_.spacing();
  const std::size_t n = diag_.size();
  const cplx a{0.0, -0.5 * dt};
  const cplx off = a * (-1.0 / (h * h));
  std::vector<cplx> rhs(n);
  const auto& v = u.values;
  for (std::size_t i = 0; i < n; ++i) {
    cplx r = (1.0 + a * diag_[i]) * v[i];
    if (i > 0) r += off * v[i - 1];
    if (i + 1 < n) r += off * v[i + 1];
    rhs[i] = r;
  }
  if (dt == cfg_.dt) {
    lhs_->solve_in_place(rhs);
  } else {
    factor_cn(diag_, h, dt)->solve_in_place(rhs);
  }
  u.values = std::move(rhs);
}

void Evolver::step(WaveField& u) const {
  const double dt = cfg_.dt;
  if (cfg_.nonlinear) kernels::nonlinear_phase(u.values, cfg_.params.p, 0.5 * dt);
  linear_step(u, dt);
  if (cfg_.nonlinear) kernels::nonlinear_phase(u.values, cfg_.params.p, 0.5 * dt);
}

WaveField step(const WaveField& u, const EvolverConfig& cfg) {
  const Evolver ev(u.grid, cfg);
  WaveField out = u;
  ev.step(out);
  return out;
}

EvolveResult evolve(const WaveField& u0, double t0, double t1, const EvolverConfig& cfg, const Observer& observe,
                    std::size_t observe_every) {
  const double span = (t1 - t0) / cfg.dt;
  if (span < -1e-9) throw InvalidParameter("evolve: dt has the wrong sign for [t0, t1]");
  const auto steps = static_cast<std::size_t>(std::llround(span));
  if (std::abs(span - static_cast<double>(steps)) > 1e-6 * std::max(1.0, span))
    throw InvalidParameter("evolve: (t1 - t0) / dt is not a whole number of steps");

  const Evolver ev(u0.grid, cfg);
  const ModelParams& mp = cfg.params;
  EvolveResult res{u0, t0, {}, 0.0, 0.0, 0.0, true, false, 0.0};
  const double m0 = discrete_mass(u0);
  const double e0 = discrete_energy(u0, mp);
  const double escale = std::max(std::abs(e0), 1e-300);
  res.log.push_back({t0, m0, e0});
  const std::size_t every = std::max<std::size_t>(1, cfg.conservation_check_every);
  const std::size_t gw = std::min(cfg.guard_width, u0.size() / 2);

  auto record = [&](double t) {
    const double m = discrete_mass(res.u), e = discrete_energy(res.u, mp);
    res.log.push_back({t, m, e});
    res.mass_drift = std::max(res.mass_drift, std::abs(m - m0) / m0);
    res.energy_drift = std::max(res.energy_drift, std::abs(e - e0) / escale);
  };

  for (std::size_t k = 1; k <= steps; ++k) {
    ev.step(res.u);
    const double t = t0 + cfg.dt * static_cast<double>(k);
    res.t = t;
    const auto& v = res.u.values;
    for (std::size_t j = 0; j < gw; ++j)
      res.boundary_max = std::max({res.boundary_max, std::abs(v[j]), std::abs(v[v.size() - 1 - j])});
    if (k % every == 0 || k == steps) {
      if (!res.u.all_finite()) {
        res.blowup = true;
        res.blowup_time = t;
        break;
      }
      record(t);
    }
    if (observe && ((observe_every && k % observe_every == 0) || k == steps))
      if (!observe(t, res.u)) break;
  }
  res.boundary_ok = res.boundary_max <= cfg.boundary_guard;
  return res;
}

std::pair<WaveField, ModelParams> rescale_solution(const WaveField& u, double omega, const ModelParams& mp,
                                                   const Grid1D& target) {
  if (!(omega > 0.0)) throw InvalidParameter("rescale_solution: omega must be positive");
  const double amp = std::pow(omega, 1.0 / (mp.p - 1.0));
  const double r = std::sqrt(omega);
  const Grid1D& src = u.grid;
  // content of u outside sqrt(omega) * [target range] would be dropped
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double x = src.x(i);
    if ((x < r * target.x_min() || x > r * target.x_max()) && std::abs(u.values[i]) > 1e-10)
      throw DomainError("rescale_solution: rescaled support exceeds the target grid");
  }
  WaveField out(target);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double y = r * target.x(i);
    const std::size_t k = src.nearest_index(y);
    // exact where the sample falls on a node
    out.values[i] = amp * (std::abs(src.x(k) - y) <= 1e-9 * src.spacing() ? u.values[k] : interpolate(u, y));
  }
  return {out, ModelParams{mp.p, mp.gamma * r}};
}

std::pair<WaveField, ModelParams> rescale_solution(const WaveField& u, double omega, const ModelParams& mp) {
  return rescale_solution(u, omega, mp, u.grid);
}

}  // namespace twosol
