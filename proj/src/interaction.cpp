#include "twosol/interaction.hpp"

#include <cmath>
#include <vector>

#include "twosol/errors.hpp"
#include "twosol/kernels.hpp"

namespace twosol {

double ip_integral(double p, const Grid1D& g) {
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    f[i] = std::pow(q_profile(x, p), p) * std::exp(-x);
  }
  return trapezoid(f, g.spacing());
}

namespace {

constexpr double kTiny = 1e-30;

// Trapezoid of f on [a, b] with about spacing h, dropping the tail where |f| < kTiny.
template <class F>
double piece(F f, double a, double b, double h) {
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / h));
  const double hh = (b - a) / static_cast<double>(n);
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = f(a + static_cast<double>(i) * hh);
  std::size_t lo = 0, hi = n;
  while (lo < hi && std::abs(s[lo]) < kTiny) ++lo;
  while (hi > lo && std::abs(s[hi]) < kTiny) --hi;
  return trapezoid(std::span<const double>(s.data() + lo, hi - lo + 1), hh);
}

}  // namespace

double h_interaction(double z, double p, double h) {
  if (!(z >= 4.0)) throw DomainError("h_interaction: z must be at least 4");
  if (z > 120.0) throw DomainError("h_interaction: z beyond grid coverage");
  if (!(h > 0.0)) throw InvalidParameter("h_interaction: h must be positive");
  const double m = -0.5 * z;
  const double L = 60.0;
  const double right = piece(
      [&](double y) { return std::pow(q_profile(y, p), p - 1.0) * q_prime(y, p) * q_profile(y + z, p); }, m,
      m + z + L, h);
  const double left = piece(
      [&](double y) { return std::pow(q_profile(y + z, p), p - 1.0) * q_prime(y, p) * q_profile(y, p); },
      m - L, m, h);
  return p * (right + left);
}

GInnerCheck g_inner_check(double z, double v, double p, const Grid1D& g) {
  const WaveField G = interaction_g(g, z, v, p);
  WaveField t(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i) - 0.5 * z;
    t.values[i] = std::polar(q_prime(x, p), 0.5 * v * x);
  }
  GInnerCheck r;
  r.lhs = real_inner(G, t);
  r.rhs = h_interaction(z, p, g.spacing());
  r.gap = r.lhs - r.rhs;
  r.budget = std::exp(-z) * (v * v * z * z + std::exp(-0.5 * z));
  return r;
}

double gradient_sq(const WaveField& u) {
  const WaveField d(u.grid, derivative4(u.values, u.grid.spacing()));
  return real_inner(d, d);
}

Functionals action_and_nehari(const WaveField& u, const ModelParams& mp) {
  if (!u.all_finite()) throw InvalidParameter("action_and_nehari: non-finite field");
  const double p = mp.p;
  const double grad = gradient_sq(u);
  const double l2 = real_inner(u, u);
  const std::size_t n = u.size();
  double lp = kernels::abs_pow_sum(u.values, p + 1.0);
  lp -= 0.5 * (std::pow(std::abs(u.values[0]), p + 1.0) + std::pow(std::abs(u.values[n - 1]), p + 1.0));
  lp *= u.grid.spacing();
  const double point = mp.gamma * std::norm(u.values[u.grid.zero_index()]);
  Functionals f;
  f.energy = 0.5 * (grad + point) - lp / (p + 1.0);
  f.mass = 0.5 * l2;
  f.action = f.energy + f.mass;
  f.nehari = grad + l2 + point - lp;
  return f;
}

}  // namespace twosol
