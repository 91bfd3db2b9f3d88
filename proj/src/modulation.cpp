#include "twosol/modulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <functional>
#include <limits>

#include "twosol/cutoff.hpp"
#include "twosol/interaction.hpp"

namespace twosol {

namespace {

constexpr cplx I{0.0, 1.0};

// copy of xi translated by `shift` (out(y) = xi(y + shift)) and twisted by e^{i k y}
WaveField shift_twist(const WaveField& xi, double shift, double k, bool strict = true) {
  const Grid1D& g = xi.grid;
  const double h = g.spacing();
  const double q = shift / h;
  const bool aligned = std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
  const auto n = static_cast<long>(g.size());
  const long off = std::lround(q);

  // whatever leaves the grid must be negligible
  for (long j = 0; j < n; ++j) {
    const double x = g.x(static_cast<std::size_t>(j));
    const double y = x - shift;
    if (strict && (y < g.x_min() - 1e-9 * h || y > g.x_max() + 1e-9 * h) && std::abs(xi.values[j]) > 1e-10)
      throw DomainError("eta_from_xi: shifted support leaves the grid");
  }
  WaveField out(g);
  for (long j = 0; j < n; ++j) {
    const double y = g.x(static_cast<std::size_t>(j));
    cplx val;
    if (aligned) {
      const long src = j + off;
      val = (src >= 0 && src < n) ? xi.values[src] : cplx{};
    } else {
      val = interpolate(xi, y + shift);
    }
    out.values[j] = std::polar(1.0, k * y) * val;
  }
  return out;
}

cplx p_zero(double x, double z, double v, double p) {
  const double xp = x - 0.5 * z, xm = x + 0.5 * z;
  return std::polar(q_profile(xp, p), 0.5 * v * xp) + std::polar(q_profile(xm, p), -0.5 * v * xm);
}

// trapezoid weight of node j on n nodes
double tw(std::size_t j, std::size_t n) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; }

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

}  // namespace

WaveField eta_from_xi(const WaveField& xi, const SolitonState& st) { return shift_twist(xi, 0.5 * st.z, -0.5 * st.v); }

struct Modulator::Impl {
  TranslationalModeSolver solver;
  std::optional<Spline> t_spline;
  double t_z = -1.0;
  double t_lo = 0.0, t_hi = 0.0;

  Impl(const Grid1D& g, double p) : solver(g, p) {}

  void refresh(double gamma, double z) {
    const PerturbedMode m = solver.solve(gamma, z);
    const auto& vals = m.T.values;
    t_spline.emplace(vals.begin(), vals.end(), m.T.grid.x_min(), m.T.grid.spacing());
    t_z = m.z;
    t_lo = m.T.grid.x_min();
    t_hi = m.T.grid.x_max();
  }
  double T(double y) const { return (y <= t_lo || y >= t_hi) ? 0.0 : (*t_spline)(y); }
};

Modulator::Modulator(const ModelParams& mp, const Grid1D& eigen_grid, ModulationOptions opt)
    : mp_(mp), opt_(opt), impl_(std::make_unique<Impl>(eigen_grid, mp.p)) {
  mp.validate();
}
Modulator::~Modulator() = default;
Modulator::Modulator(Modulator&&) noexcept = default;
Modulator& Modulator::operator=(Modulator&&) noexcept = default;

namespace {

struct Conditions {
  const WaveField& u;
  double p;
  const std::function<double(double)>& T;
  Cutoff chi{};

  // <eta, phi_k> for the four test functions, computed on u's grid via x = w / lambda
  std::array<double, 4> operator()(const SolitonState& st) const {
    const Grid1D& g = u.grid;
    const std::size_t n = g.size();
    const double lam = st.lambda, z = st.z, v = st.v;
    const double amp = std::pow(lam, 2.0 / (p - 1.0));
    const cplx rot = std::polar(amp, -st.gamma_phase);
    const double wgt = g.spacing() / lam;
    std::array<double, 4> r{};
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.x(j) / lam;
      const double y = x - 0.5 * z;
      const double Qy = q_profile(y, p);
      if (Qy < 1e-300 && std::abs(u.values[j]) == 0.0) continue;
      const cplx xi = rot * u.values[j] - chi(x) * p_zero(x, z, v, p);
      // Re(xi conj(e^{ivy/2} phi)) = Re(xi e^{-ivy/2} conj(phi))
      const cplx e = xi * std::polar(tw(j, n) * wgt, -0.5 * v * y);
      r[0] += e.real() * Qy;
      r[1] += e.real() * y * Qy;
      r[2] += e.imag() * lambda_q(y, p);  // Re(e conj(i f)) = Im(e) f
      r[3] += e.imag() * T(y);
    }
    return r;
  }
};

std::array<double, 4> pack(const SolitonState& s) { return {s.lambda, s.gamma_phase, s.z, s.v}; }
SolitonState unpack(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }

}  // namespace

std::pair<std::array<double, 4>, std::array<std::array<double, 4>, 4>> Modulator::linearize(const WaveField& u,
                                                                                            const SolitonState& st) {
  if (impl_->t_z < 0.0) impl_->refresh(mp_.gamma, st.z);
  const std::function<double(double)> T = [this](double y) { return impl_->T(y); };
  const Conditions cond{u, mp_.p, T};
  const auto r = cond(st);
  std::array<std::array<double, 4>, 4> J{};
  const auto x0 = pack(st);
  for (int c = 0; c < 4; ++c) {
    auto xp = x0, xm = x0;
    xp[c] += opt_.fd_step;
    xm[c] -= opt_.fd_step;
    const auto rp = cond(unpack(xp)), rm = cond(unpack(xm));
    for (int k = 0; k < 4; ++k) J[k][c] = (rp[k] - rm[k]) / (2.0 * opt_.fd_step);
  }
  return {r, J};
}

ModulationResult Modulator::decompose(const WaveField& u, const SolitonState& guess, ModulationMode mode) {
  const double p = mp_.p;
  const bool full = mode == ModulationMode::Full;
  const int nk = full ? 4 : 3;
  if (!(guess.lambda > 0.0 && guess.z > 0.0)) throw InvalidParameter("decompose: bad guess");
  if (impl_->t_z < 0.0 || std::abs(guess.z - impl_->t_z) > opt_.t_refresh) impl_->refresh(mp_.gamma, guess.z);

  const std::function<double(double)> T = [this](double y) { return impl_->T(y); };
  auto worst = [&](const std::array<double, 4>& r) {
    double w = 0.0;
    for (int k = 0; k < nk; ++k) w = std::max(w, std::abs(r[k]));
    return w;
  };

  SolitonState st = guess;
  SolitonState best = st;
  double best_res = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (int pass = 0; pass < 3; ++pass) {
    const Conditions cond{u, p, T};
    auto r = cond(st);
    double res = worst(r);
    for (; iters < opt_.max_iterations && res > opt_.tolerance; ++iters) {
      Eigen::MatrixXd J(nk, nk);
      Eigen::VectorXd rhs(nk);
      const auto x0 = pack(st);
      for (int c = 0; c < nk; ++c) {
        auto xp = x0, xm = x0;
        xp[c] += opt_.fd_step;
        xm[c] -= opt_.fd_step;
        const auto rp = cond(unpack(xp)), rm = cond(unpack(xm));
        for (int k = 0; k < nk; ++k) J(k, c) = (rp[k] - rm[k]) / (2.0 * opt_.fd_step);
      }
      for (int k = 0; k < nk; ++k) rhs(k) = -r[k];
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (!(sv(nk - 1) > 1e-12 * sv(0))) throw SingularSystem("decompose: Jacobian is near-singular");
      const Eigen::VectorXd dx = svd.solve(rhs);

      // halve the step while the residual grows
      double t = 1.0;
      SolitonState trial;
      std::array<double, 4> rt{};
      for (int k = 0; k < 30; ++k, t *= 0.5) {
        auto x = x0;
        for (int c = 0; c < nk; ++c) x[c] += t * dx(c);
        trial = unpack(x);
        if (!(trial.lambda > 0.0 && trial.z > 0.0)) continue;
        rt = cond(trial);
        if (worst(rt) < res) break;
      }
      if (!(worst(rt) < res)) break;  // no descent left: at the rounding floor
      st = trial;
      r = rt;
      res = worst(r);
    }
    if (res < best_res) {
      best_res = res;
      best = st;
    }
    // T_z is frozen inside one solve; re-solve once z has moved far and go again
    if (!full || std::abs(st.z - impl_->t_z) <= opt_.t_refresh) break;
    impl_->refresh(mp_.gamma, st.z);
  }
  if (!(best_res <= opt_.accept))
    throw DecompositionError("decompose: Newton did not reach the residual tolerance", best_res, best);
  st = best;

  ModulationResult out{st, WaveField(u.grid.scaled(1.0 / st.lambda)), WaveField(u.grid), {}, iters};
  const double amp = std::pow(st.lambda, 2.0 / (p - 1.0));
  const cplx rot = std::polar(amp, -st.gamma_phase);
  const Cutoff chi{};
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = out.xi.grid.x(j);
    out.xi.values[j] = rot * u.values[j] - chi(x) * p_zero(x, st.z, st.v, p);
  }
  out.eta = shift_twist(out.xi, 0.5 * st.z, -0.5 * st.v, false);
  const Conditions cond{u, p, T};
  out.residuals = cond(st);
  return out;
}

ModulationResult decompose(const WaveField& u, const SolitonState& guess, const ModelParams& mp, ModulationMode mode) {
  Modulator m(mp);
  return m.decompose(u, guess, mode);
}

MVector mvec_estimate(const std::vector<SolitonState>& hist, double dt) {
  if (hist.size() < 3) throw InvalidParameter("mvec_estimate: need at least three states");
  if (!(dt != 0.0)) throw InvalidParameter("mvec_estimate: dt must be nonzero");
  const std::size_t c = hist.size() / 2;
  const SolitonState &a = hist[c - 1], &b = hist[c], &d = hist[c + 1];
  const double lr = (d.lambda - a.lambda) / (2.0 * dt) / b.lambda;
  const double zd = (d.z - a.z) / (2.0 * dt);
  const double gd = (d.gamma_phase - a.gamma_phase) / (2.0 * dt);
  const double vd = (d.v - a.v) / (2.0 * dt);
  return MVector::from_rates(b, lr, zd, gd, vd);
}

double localized_momentum(const WaveField& eta, double s) {
  if (!(s > std::exp(1.0))) throw InvalidParameter("localized_momentum: s must exceed e");
  const Grid1D& g = eta.grid;
  const double L = std::log(s);
  const auto d = derivative4(eta.values, g.spacing());
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = momentum_cutoff(std::abs(g.x(j)) / L);
    f[j] = w == 0.0 ? 0.0 : w * (std::conj(eta.values[j]) * d[j]).imag();
  }
  return trapezoid(f, g.spacing());
}

EnergyW energy_functional_w(const WaveField& xi, const SolitonState& st, const ModelParams& mp, double s) {
  const Grid1D& g = xi.grid;
  const double p = mp.p, h = g.spacing();
  const std::size_t n = g.size();
  const Cutoff chi{};
  const auto dxi = derivative4(xi.values, h);
  const WaveField P0 = free_two_soliton(g, st.z, st.v, p);
  const WaveField dP0 = free_two_soliton_dy(g, st.z, st.v, p);
  std::vector<double> dens(n);
  std::vector<double> cut(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = g.x(j);
    const cplx P = chi(y) * P0.values[j];
    const cplx x = xi.values[j];
    const double aP = std::abs(P);
    // -|P+xi|^{p+1} + |P|^{p+1} + (p+1)|P|^{p-1} Re(conj(P) xi): second order in xi
    const double nlin = -std::pow(std::abs(P + x), p + 1.0) + std::pow(aP, p + 1.0) +
                        (p + 1.0) * std::pow(aP, p - 1.0) * (std::conj(P) * x).real();
    dens[j] = std::norm(dxi[j]) + std::norm(x) + 2.0 / (p + 1.0) * nlin;
    const cplx ecut = 2.0 * chi.d1(y) * dP0.values[j] + chi.d2(y) * P0.values[j];
    cut[j] = (x * std::conj(ecut)).real();
  }
  EnergyW w;
  w.H = 0.5 * trapezoid(dens, h) + 0.5 * st.lambda * mp.gamma * std::norm(xi.values[g.zero_index()]) -
        trapezoid(cut, h);
  w.M1 = localized_momentum(eta_from_xi(xi, st), s);
  w.M2 = localized_momentum(shift_twist(xi, -0.5 * st.z, 0.5 * st.v), s);
  w.J = 0.5 * st.v * (w.M1 - w.M2);
  w.W = w.H - w.J;
  return w;
}

EinnerChecker::EinnerChecker(double p, const Grid1D& coarse) : p_(p), modes_(coarse, p) {}

EinnerCheck EinnerChecker::check(const SolitonState& st_in, double gamma, const MVector& m) const {
  if (!(st_in.z >= 4.0)) throw InvalidParameter("einner_check: z too small");
  const double p = p_;
  const double z = snap_separation(st_in.z, modes_.coarse().grid().spacing());
  SolitonState st = st_in;
  st.z = z;

  auto pairing = [&](const TranslationalModeSolver& s) {
    const Grid1D& g = s.grid();
    const PerturbedMode mode = s.solve(gamma, z);
    const WaveField E = error_field(g, st, m, p);
    // psi(y) = e^{iv(y - z/2)/2} T(y - z/2); z/2 is a whole number of nodes
    const auto k = static_cast<long>(std::lround(0.5 * z / g.spacing()));
    const auto n = static_cast<long>(g.size());
    WaveField psi(g);
    for (long j = 0; j < n; ++j) {
      const long src = j - k;
      if (src < 0 || src >= n) continue;
      const double x = g.x(static_cast<std::size_t>(src));
      psi.values[j] = std::polar(mode.T.values[src], 0.5 * st.v * x);
    }
    return real_inner(E, psi);
  };
  const double coarse = pairing(modes_.coarse());
  const double fine = pairing(modes_.fine());
  const ModeScalars ms = modes_.solve(gamma, z);

  EinnerCheck r;
  r.z = z;
  r.measured = (4.0 * fine - coarse) / 3.0;
  r.h = h_interaction(z, p, 0.005);
  r.t_at_delta = ms.t_at_delta;
  const double c = cp_constant(p);
  r.predicted = q_mass(p) * m.m4 + r.h - 2.0 * gamma * c * std::exp(-0.5 * z) * ms.t_at_delta;
  r.gap = r.measured - r.predicted;
  r.budget = std::exp(-z) * (m.norm() * z * z + st.v * st.v * z * z + std::exp(-0.5 * z));
  return r;
}

EinnerCheck einner_check(const SolitonState& st, const ModelParams& mp, const MVector& m) {
  return EinnerChecker(mp.p).check(st, mp.gamma, m);
}

}  // namespace twosol
