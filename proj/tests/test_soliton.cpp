#include <cmath>

#include "doctest.h"
#include "twosol/errors.hpp"
#include "twosol/soliton.hpp"

using namespace twosol;

namespace {

double h1_norm(const WaveField& f) { return norms(f).h1; }

WaveField minus(WaveField a, const WaveField& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

WaveField two_bumps(const Grid1D& g, double z, double p) {
  WaveField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = q_profile(g.x(i) - z / 2, p) + q_profile(g.x(i) + z / 2, p);
  return f;
}

double sup(const WaveField& f) { return norms(f).sup; }

double w1inf(const WaveField& f) {
  const auto d = derivative(f.values, f.grid.spacing());
  double m = 0.0;
  for (const auto& c : d) m = std::max(m, std::abs(c));
  return sup(f) + m;
}

}  // namespace

TEST_CASE("cp_constant") {
  CHECK(cp_constant(3.0) == doctest::Approx(2.8284271).epsilon(1e-7));
  CHECK(cp_constant(2.0) == doctest::Approx(6.0).epsilon(1e-14));
  for (double p : {2.5, 3.0, 4.0, 7.0}) CHECK(std::pow(cp_constant(p), p - 1) == doctest::Approx(2 * (p + 1)).epsilon(1e-13));
  CHECK_THROWS_AS(cp_constant(1.0), InvalidParameter);
}

TEST_CASE("model parameters") {
  CHECK_NOTHROW((ModelParams{3.0, 1.0}.validate()));
  CHECK_THROWS_AS((ModelParams{5.0, 1.0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((ModelParams{2.0, 1.0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((ModelParams{3.0, -1.0}.validate()), InvalidParameter);
  CHECK_NOTHROW((ModelParams{3.0, -1.0}.validate(true)));
}

TEST_CASE("profile values") {
  CHECK(q_profile(0.0, 3.0) == doctest::Approx(1.4142136).epsilon(1e-7));
  for (double p : {2.5, 3.0, 4.0, 7.0}) CHECK(q_prime(0.0, p) == 0.0);
  const double c = cp_constant(3.0);
  CHECK(q_profile(10.0, 3.0) / (c * std::exp(-10.0)) == doctest::Approx(1.0).epsilon(1e-8));
  // p = 3 closed form sqrt(2) sech x, and no overflow far out
  for (double x : {-7.3, -1.0, 0.4, 2.0, 25.0}) CHECK(q_profile(x, 3.0) == doctest::Approx(std::sqrt(2.0) / std::cosh(x)).epsilon(1e-13));
  CHECK(std::isfinite(q_profile(800.0, 4.0)));
  CHECK(q_profile(800.0, 4.0) >= 0.0);
  // Q' against a central difference
  for (double p : {3.0, 4.0, 7.0})
    for (double x : {-2.0, 0.3, 1.7}) {
      const double fd = (q_profile(x + 1e-5, p) - q_profile(x - 1e-5, p)) / 2e-5;
      CHECK(q_prime(x, p) == doctest::Approx(fd).epsilon(1e-8));
      const double fd2 = (q_prime(x + 1e-5, p) - q_prime(x - 1e-5, p)) / 2e-5;
      CHECK(q_second(x, p) == doctest::Approx(fd2).epsilon(1e-7));
    }
}

TEST_CASE("ode and Pohozaev residuals") {
  const Grid1D g = Grid1D::standard();
  for (double p : {3.0, 4.0, 7.0}) {
    const auto r = ode_residual(p, g);
    CHECK(r.analytic <= 1e-10);
    CHECK(pohozaev_residual(p, g) <= 1e-10);
  }
  const auto r1 = ode_residual(3.0, g);
  CHECK(r1.fd <= 5e-4);
  const auto r2 = ode_residual(3.0, g.refined());
  CHECK(r1.fd / r2.fd == doctest::Approx(4.0).epsilon(0.05));
  CHECK(pohozaev_residual(3.0, g, 1.0 + 1e-3) > 1e-4);
}

TEST_CASE("closed-form profile integrals match quadrature") {
  const Grid1D g = Grid1D::standard();
  for (double p : {2.5, 3.0, 4.0, 5.5, 7.0}) {
    const RealField q = q_field(g, p), qp = q_prime_field(g, p);
    CHECK(q_l2_sq(p) == doctest::Approx(real_inner(q, q)).epsilon(1e-9));
    CHECK(q_prime_l2_sq(p) == doctest::Approx(real_inner(qp, qp)).epsilon(1e-6));
  }
  CHECK(q_l2_sq(3.0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(q_prime_l2_sq(3.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(sigma_sq(3.0) == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("tail asymptotics |Q - c e^{-|x|}| <= C e^{-p|x|}") {
  for (double p : {3.0, 4.0, 7.0}) {
    const double c = cp_constant(p);
    auto ratio = [&](double x) { return std::abs(q_profile(x, p) - c * std::exp(-x)) / std::exp(-p * x); };
    const double C = 2.0 * ratio(5.0);
    for (double x = 5.0; x <= 20.0; x += 0.5) {
      CHECK(ratio(x) <= C);
      CHECK(ratio(-x) <= C);
    }
  }
}

TEST_CASE("rescaled profile solves the frequency-omega equation") {
  for (double p : {3.0, 4.0})
    for (double w : {0.25, 4.0}) {
      for (double x : {-3.0, -0.5, 0.0, 1.1, 4.0}) {
        const double qw = q_scaled(x, p, w);
        const double qw2 = std::pow(w, 1.0 / (p - 1.0)) * w * q_second(std::sqrt(w) * x, p);
        CHECK(std::abs(-qw2 + w * qw - std::pow(qw, p)) < 1e-12);
      }
    }
}

TEST_CASE("free two-soliton") {
  const Grid1D g = Grid1D::standard();
  const auto P0 = free_two_soliton(g, 20.0, 0.0, 3.0);
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(P0.values[i].imag() == 0.0);
    CHECK(P0.values[i].real() == doctest::Approx(P0.values[n - 1 - i].real()).epsilon(1e-14));
  }
  CHECK(std::abs(P0.values[g.zero_index()] - 2.0 * q_profile(10.0, 3.0)) < 1e-12);

  const auto base = two_bumps(g, 14.0, 3.0);
  const double C = 2.0 * h1_norm(minus(free_two_soliton(g, 14.0, 0.01, 3.0), base)) / 0.01;
  for (double v : {0.02, 0.05, 0.1, 0.2, 0.5})
    CHECK(h1_norm(minus(free_two_soliton(g, 14.0, v, 3.0), base)) <= C * v);
}

TEST_CASE("cutoff") {
  CHECK(cutoff_chi(0.5) == 0.0);
  CHECK(cutoff_chi(3.0) == 1.0);
  CHECK(cutoff_chi(1.0) == 0.0);
  CHECK(cutoff_chi(2.0) == 1.0);
  const double a = cutoff_chi(1.5);
  CHECK(a == cutoff_chi(-1.5));
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  double prev = 0.0;
  for (double y = 1.0; y <= 2.0; y += 0.01) {
    CHECK(cutoff_chi(y) >= prev);
    prev = cutoff_chi(y);
  }
  const Cutoff chi;
  for (double y : {-1.7, -1.2, 1.05, 1.5, 1.93}) {
    CHECK(chi.d1(y) == doctest::Approx((chi(y + 1e-6) - chi(y - 1e-6)) / 2e-6).epsilon(1e-6));
    CHECK(chi.d2(y) == doctest::Approx((chi.d1(y + 1e-6) - chi.d1(y - 1e-6)) / 2e-6).epsilon(1e-5));
  }
  CHECK(momentum_cutoff(0.05) == 1.0);
  CHECK(momentum_cutoff(0.2) == 0.0);
}

TEST_CASE("cut-off two-soliton") {
  const Grid1D g = Grid1D::standard();
  const auto P = approx_two_soliton(g, 20.0, 0.0, 3.0);
  const auto P0 = free_two_soliton(g, 20.0, 0.0, 3.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.x(i);
    if (std::abs(y) <= 1.0) CHECK(P.values[i] == cplx{});
    if (std::abs(y) >= 2.0) CHECK(P.values[i] == P0.values[i]);
  }
  CHECK(interpolate(P, 0.9) == cplx{});

  auto gap = [&](double z, double v) { return h1_norm(minus(approx_two_soliton(g, z, v, 3.0), two_bumps(g, z, 3.0))); };
  const double C = 2.0 * gap(8.0, 0.0) / std::exp(-4.0);
  for (double z = 8.0; z <= 20.0; z += 2.0)
    for (double v : {0.0, 0.01, 0.05}) CHECK(gap(z, v) <= C * (v + std::exp(-z / 2)) + 2.0 * gap(8.0, 0.01) / 0.01 * v);
}

TEST_CASE("interaction term") {
  const Grid1D g = Grid1D::standard();
  const double C = 2.0 * w1inf(interaction_g(g, 8.0, 0.0, 3.0)) / std::exp(-8.0);
  for (double z = 8.0; z <= 20.0; z += 1.0) CHECK(w1inf(interaction_g(g, z, 0.0, 3.0)) <= C * std::exp(-z));
  double prev = 1e300;
  for (double z = 10.0; z <= 24.0; z += 1.0) {
    const double s = sup(interaction_g(g, z, 0.0, 3.0));
    CHECK(s < prev);
    prev = s;
  }
  const auto G = interaction_g(g, 14.0, 0.0, 3.0);
  const auto Gv = interaction_g(g, 14.0, 0.07, 3.0);
  const auto Gm = interaction_g(g, 14.0, -0.07, 3.0);
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; i += 7) {
    CHECK(G.values[i].imag() == 0.0);
    CHECK(std::abs(G.values[i] - G.values[n - 1 - i]) <= 1e-14 * (1.0 + std::abs(G.values[i])));
    CHECK(std::abs(Gv.values[i] - Gv.values[n - 1 - i]) <= 1e-14);
    CHECK(std::abs(Gm.values[i] - std::conj(Gv.values[i])) <= 1e-14);
  }
}

// Substitute P = chi P0 with moving (z, v) directly into the rescaled equation
// and compare with the assembled error field.
TEST_CASE("error field matches direct substitution") {
  const Grid1D g = Grid1D::symmetric(40.0, 4001);
  const double p = 3.0;
  const Cutoff chi;
  const cplx I{0.0, 1.0};
  for (const double v : {0.0, 0.08}) {
    const SolitonState st{1.0, 0.0, 12.0, v};
    const double lr = 0.013, zd = 0.21, gd = 0.97, vd = -0.004;
    const MVector m = MVector::from_rates(st, lr, zd, gd, vd);
    const WaveField E = error_field(g, st, m, p, chi);

    const double eps = 1e-5;
    const auto Pz1 = free_two_soliton(g, st.z + eps, v, p), Pz0 = free_two_soliton(g, st.z - eps, v, p);
    const auto Pv1 = free_two_soliton(g, st.z, v + eps, p), Pv0 = free_two_soliton(g, st.z, v - eps, p);
    const auto P0 = free_two_soliton(g, st.z, v, p);
    const auto dP0 = free_two_soliton_dy(g, st.z, v, p);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double y = g.x(i);
      const double xp = y - st.z / 2, xm = y + st.z / 2;
      auto d2 = [&](double x, double sgn) {
        return std::polar(1.0, sgn * 0.5 * v * x) *
               (q_second(x, p) + sgn * I * v * q_prime(x, p) - 0.25 * v * v * q_profile(x, p));
      };
      const cplx p0xx = d2(xp, 1.0) + d2(xm, -1.0);
      const cplx ds = zd * (Pz1.values[i] - Pz0.values[i]) / (2 * eps) + vd * (Pv1.values[i] - Pv0.values[i]) / (2 * eps);
      const double c = chi(y), c1 = chi.d1(y), c2 = chi.d2(y);
      const cplx u0 = P0.values[i];
      const cplx P = c * u0;
      const cplx Pxx = c * p0xx + 2.0 * c1 * dP0.values[i] + c2 * u0;
      const cplx LamP = y * (c * dP0.values[i] + c1 * u0) + (2.0 / (p - 1.0)) * P;
      const cplx direct = I * c * ds + Pxx - P + std::pow(std::abs(P), p - 1) * P - I * lr * LamP + (1.0 - gd) * P;
      worst = std::max(worst, std::abs(direct - E.values[i]));
      scale = std::max(scale, std::abs(direct));
    }
    CHECK(worst <= 1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("static family member gives the expected defect vector") {
  const SolitonState st{1.0, 0.0, 20.0, 0.3};
  const MVector m = MVector::from_rates(st, 0.0, 0.0, 0.0, 0.0);
  CHECK(m.m1 == 0.0);
  CHECK(m.m2 == doctest::Approx(-0.3));
  CHECK(m.m3 == doctest::Approx(-1.0 + 0.09 / 4));
  CHECK(m.m4 == 0.0);
}

TEST_CASE("pair distance") {
  const Grid1D g = Grid1D::standard();
  CHECK(pair_distance(14.0, 14.0, 0.0, 0.0, 3.0, g) == doctest::Approx(0.0).epsilon(1e-20));
  const double c = (2.0 / 3.0) * std::pow(std::tanh(1.0), 3);
  CHECK(c == doctest::Approx(0.2945).epsilon(1e-3));
  for (double dz : {0.04, 0.2, 0.5}) CHECK(pair_distance(14.0, 14.0 + dz, 0.0, 0.0, 3.0, g) >= c * dz * dz / 4 - 10 * std::exp(-14.0));
  CHECK(pair_distance(14.0, 14.2, 0.0, 0.0, 3.0, g) < pair_distance(14.0, 14.2, 0.0, 0.1, 3.0, g));
  CHECK(pair_distance(14.0, 14.2, 0.0, 0.0, 3.0, g) < pair_distance(14.0, 14.2, 0.0, -0.1, 3.0, g));
}
