#include "twosol/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "twosol/errors.hpp"

namespace twosol {

void ModelParams::validate(bool allow_negative_gamma) const {
  if (!(p > 2.0)) throw InvalidParameter("p must exceed 2");
  if (std::abs(p - 5.0) < 1e-12) throw InvalidParameter("p = 5 (mass critical) is excluded");
  if (!std::isfinite(gamma)) throw InvalidParameter("gamma must be finite");
  if (gamma < 0.0 && !allow_negative_gamma) throw InvalidParameter("gamma must be non-negative");
}

MVector MVector::from_rates(const SolitonState& s, double lr, double zd, double gd, double vd) {
  MVector m;
  m.m1 = lr;
  m.m2 = 0.5 * zd - s.v + lr * 0.5 * s.z;
  m.m3 = gd - 1.0 + 0.25 * s.v * s.v - lr * 0.25 * s.v * s.z - 0.25 * s.v * zd;
  m.m4 = 0.5 * vd - lr * 0.5 * s.v;
  return m;
}

double MVector::norm() const noexcept { return std::sqrt(m1 * m1 + m2 * m2 + m3 * m3 + m4 * m4); }

double cp_constant(double p) {
  if (!(p > 1.0)) throw InvalidParameter("cp_constant: p must exceed 1");
  return std::pow(2.0 * (p + 1.0), 1.0 / (p - 1.0));
}

namespace {

void require_p(double p) {
  if (!(p > 2.0)) throw InvalidParameter("profile: p must exceed 2");
}

// tanh(a x) and sech^2(a x) without overflow
double tanh_a(double x, double p) { return std::tanh(0.5 * (p - 1.0) * x); }
double sech2_a(double x, double p) {
  const double e = std::exp(-(p - 1.0) * std::abs(x));
  const double s = 2.0 * std::sqrt(e) / (1.0 + e);
  return s * s;
}

}  // namespace

double q_profile(double x, double p) {
  require_p(p);
  // c_p [2 cosh(a x)]^(-2/(p-1)) = c_p exp(-|x|) (1 + e^{-(p-1)|x|})^(-2/(p-1))
  const double ax = std::abs(x);
  return cp_constant(p) * std::exp(-ax - (2.0 / (p - 1.0)) * std::log1p(std::exp(-(p - 1.0) * ax)));
}

double q_prime(double x, double p) { return -tanh_a(x, p) * q_profile(x, p); }

double q_second(double x, double p) {
  const double t = tanh_a(x, p);
  return q_profile(x, p) * (t * t - 0.5 * (p - 1.0) * sech2_a(x, p));
}

double lambda_q(double x, double p) { return x * q_prime(x, p) + (2.0 / (p - 1.0)) * q_profile(x, p); }

double q_scaled(double x, double p, double omega) {
  if (!(omega > 0.0)) throw InvalidParameter("q_scaled: omega must be positive");
  return std::pow(omega, 1.0 / (p - 1.0)) * q_profile(std::sqrt(omega) * x, p);
}

double q_l2_sq(double p) {
  require_p(p);
  const double b = 2.0 / (p - 1.0);
  const double c = cp_constant(p);
  // int sech^{2b}(a x) dx = B(b, 1/2) / a with a = (p-1)/2
  return c * c * std::pow(4.0, -b) * std::beta(b, 0.5) / (0.5 * (p - 1.0));
}

double q_prime_l2_sq(double p) { return q_l2_sq(p) * (p - 1.0) / (p + 3.0); }

double q_mass(double p) { return 0.5 * q_l2_sq(p); }

double sigma_sq(double p) {
  const double c = cp_constant(p);
  return 4.0 * c * c / q_mass(p);
}

RealField q_field(const Grid1D& g, double p, double center) {
  RealField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = q_profile(g.x(i) - center, p);
  return f;
}

RealField q_prime_field(const Grid1D& g, double p, double center) {
  RealField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = q_prime(g.x(i) - center, p);
  return f;
}

ProfileResidual ode_residual(double p, const Grid1D& g) {
  require_p(p);
  ProfileResidual r;
  const RealField q = q_field(g, p);
  const auto qxx = second_derivative(q.values, g.spacing());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    const double qv = q.values[i];
    const double nl = std::pow(qv, p);
    r.analytic = std::max(r.analytic, std::abs(-q_second(x, p) + qv - nl));
    if (i > 0 && i + 1 < g.size()) r.fd = std::max(r.fd, std::abs(-qxx[i] + qv - nl));
  }
  return r;
}

double pohozaev_residual(double p, const Grid1D& g, double scale) {
  require_p(p);
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    const double qv = scale * q_profile(x, p);
    const double qp = scale * q_prime(x, p);
    r = std::max(r, std::abs(qp * qp + (2.0 / (p + 1.0)) * std::pow(qv, p + 1.0) - qv * qv));
  }
  return r;
}

namespace {

// e^{i v x / 2} Q(x) evaluated at x = y - z/2, and its mirror
cplx p_plus(double y, double z, double v, double p) {
  const double x = y - 0.5 * z;
  return std::polar(q_profile(x, p), 0.5 * v * x);
}
cplx p_minus(double y, double z, double v, double p) {
  const double x = y + 0.5 * z;
  return std::polar(q_profile(x, p), -0.5 * v * x);
}

cplx nl(const cplx& u, double p) {
  const double a = std::abs(u);
  return a == 0.0 ? cplx{} : std::pow(a, p - 1.0) * u;
}

}  // namespace

WaveField free_two_soliton(const Grid1D& g, double z, double v, double p) {
  if (!(z > 0.0)) throw InvalidParameter("free_two_soliton: z must be positive");
  WaveField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.x(i);
    f.values[i] = p_plus(y, z, v, p) + p_minus(y, z, v, p);
  }
  return f;
}

WaveField free_two_soliton_dy(const Grid1D& g, double z, double v, double p) {
  WaveField f(g);
  const cplx I{0.0, 1.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.x(i);
    const double xp = y - 0.5 * z, xm = y + 0.5 * z;
    f.values[i] = std::polar(1.0, 0.5 * v * xp) * (I * (0.5 * v) * q_profile(xp, p) + q_prime(xp, p)) +
                  std::polar(1.0, -0.5 * v * xm) * (-I * (0.5 * v) * q_profile(xm, p) + q_prime(xm, p));
  }
  return f;
}

WaveField approx_two_soliton(const Grid1D& g, double z, double v, double p, const Cutoff& chi) {
  WaveField f = free_two_soliton(g, z, v, p);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] *= chi(g.x(i));
  return f;
}

WaveField interaction_g(const Grid1D& g, double z, double v, double p) {
  WaveField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.x(i);
    const cplx a = p_plus(y, z, v, p), b = p_minus(y, z, v, p);
    f.values[i] = nl(a + b, p) - nl(a, p) - nl(b, p);
  }
  return f;
}

WaveField error_field(const Grid1D& g, const SolitonState& st, const MVector& m, double p, const Cutoff& chi) {
  const double z = st.z, v = st.v;
  const cplx I{0.0, 1.0};
  const WaveField P0 = free_two_soliton(g, z, v, p);
  const WaveField dP0 = free_two_soliton_dy(g, z, v, p);
  const WaveField G = interaction_g(g, z, v, p);
  WaveField e(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.x(i);
    const double xp = y - 0.5 * z, xm = y + 0.5 * z;
    const cplx right = m.m1 * I * lambda_q(xp, p) + m.m2 * I * q_prime(xp, p) + m.m3 * q_profile(xp, p) +
                       m.m4 * xp * q_profile(xp, p);
    const cplx left = -m.m1 * I * lambda_q(xm, p) + m.m2 * I * q_prime(xm, p) - m.m3 * q_profile(xm, p) +
                      m.m4 * xm * q_profile(xm, p);
    const cplx e0 = -std::polar(1.0, 0.5 * v * xp) * right + std::polar(1.0, -0.5 * v * xm) * left + G.values[i];
    const double c = chi(y), c1 = chi.d1(y), c2 = chi.d2(y);
    const cplx u = P0.values[i];
    e.values[i] = c * e0 + c * (std::pow(c, p - 1.0) - 1.0) * nl(u, p) + 2.0 * c1 * dP0.values[i] + c2 * u -
                  I * m.m1 * (y * c1) * u;
  }
  return e;
}

double pair_distance(double z1, double z2, double v, double omega, double p, const Grid1D& g) {
  const WaveField a = approx_two_soliton(g, z1, 0.0, p);
  WaveField b = approx_two_soliton(g, z2, v, p);
  const cplx ph = std::polar(1.0, omega);
  for (std::size_t i = 0; i < g.size(); ++i) b.values[i] = a.values[i] - ph * b.values[i];
  return real_inner(b, b);
}

}  // namespace twosol
