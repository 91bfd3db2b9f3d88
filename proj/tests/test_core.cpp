#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "twosol/errors.hpp"
#include "twosol/grid.hpp"
#include "twosol/kernels.hpp"
#include "twosol/soliton.hpp"
#include "twosol/tridiag.hpp"

using namespace twosol;

namespace {

WaveField fill(const Grid1D& g, auto fn) {
  WaveField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = fn(g.x(i));
  return f;
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("grid keeps the origin on a node") {
  const Grid1D g = Grid1D::standard();
  CHECK(g.size() == 6001);
  CHECK(g.spacing() == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(g.x(g.zero_index()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(Grid1D(-1.0, 2.0, 5), InvalidParameter);
  CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 2), InvalidParameter);
  const Grid1D s = g.shifted(-8.0);
  CHECK(s.x_min() == doctest::Approx(-68.0));
  CHECK(s.x(s.zero_index()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("complex_inner examples") {
  const Grid1D g(-1.0, 1.0, 201);
  const auto one = fill(g, [](double) { return cplx{1.0, 0.0}; });
  const auto ii = fill(g, [](double) { return cplx{0.0, 1.0}; });
  CHECK(std::abs(complex_inner(one, one) - 2.0) < 1e-12);
  CHECK(std::abs(complex_inner(one, ii) - cplx{0.0, 2.0}) < 1e-12);
  CHECK(std::abs(real_inner(one, ii)) < 1e-14);

  const Grid1D w(-40.0, 40.0, 4001);
  const auto s = fill(w, [](double x) { return cplx{sech(x), 0.0}; });
  CHECK(std::abs(complex_inner(s, s) - 2.0) < 1e-8);
  CHECK_THROWS_AS(complex_inner(one, s), GridMismatch);
}

TEST_CASE("inner product is hermitian and exact on odd integrands") {
  const Grid1D g = Grid1D::symmetric(10.0, 1001);
  const auto f = fill(g, [](double x) { return cplx{std::exp(-x * x), std::sin(x)}; });
  const auto h = fill(g, [](double x) { return cplx{x * std::exp(-x * x), std::cos(3 * x) * 0.2}; });
  const cplx a = complex_inner(f, h), b = complex_inner(h, f);
  CHECK(std::abs(a - std::conj(b)) < 1e-14);
  const auto odd = fill(g, [](double x) { return cplx{x * std::exp(-std::abs(x)), 0.0}; });
  const auto even = fill(g, [](double x) { return cplx{1.0 / (1 + x * x), 0.0}; });
  CHECK(std::abs(real_inner(odd, even)) < 1e-14);

  const Grid1D pg = Grid1D::standard();
  CHECK(std::abs(real_inner(q_field(pg, 3.0), q_prime_field(pg, 3.0))) < 1e-10);
}

TEST_CASE("norms") {
  const Grid1D g = Grid1D::symmetric(40.0, 4001);
  const Norms z = norms(WaveField(g));
  CHECK(z.l2 == 0.0);
  CHECK(z.h1 == 0.0);
  CHECK(z.sup == 0.0);
  const auto s = fill(g, [](double x) { return cplx{sech(x), 0.0}; });
  const Norms n = norms(s);
  CHECK(std::abs(n.l2 - std::sqrt(2.0)) < 1e-6);
  CHECK(std::abs(n.sup - 1.0) < 1e-12);
  // int (sech')^2 = int sech^2 tanh^2 = 2/3
  CHECK(std::abs(n.h1 - (std::sqrt(2.0) + std::sqrt(2.0 / 3.0))) < 1e-4);
}

TEST_CASE("derivatives converge at their stated order") {
  auto err = [](std::size_t n, bool fourth) {
    const Grid1D g = Grid1D::symmetric(4.0, n);
    const auto f = fill(g, [](double x) { return cplx{std::sin(x), std::cos(2 * x)}; });
    const auto d = fourth ? derivative4(f.values, g.spacing()) : derivative(f.values, g.spacing());
    double e = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double x = g.x(i);
      e = std::max(e, std::abs(d[i] - cplx{std::cos(x), -2 * std::sin(2 * x)}));
    }
    return e;
  };
  CHECK(err(201, false) / err(401, false) == doctest::Approx(4.0).epsilon(0.02));
  CHECK(err(201, true) / err(401, true) == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("cubic interpolation is exact at nodes and for cubics") {
  const Grid1D g = Grid1D::symmetric(2.0, 41);
  RealField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    f.values[i] = 1 - x + 0.5 * x * x - 0.25 * x * x * x;
  }
  CHECK(interpolate(f, g.x(7)) == f.values[7]);
  for (double x : {-1.97, -0.333, 0.01, 1.234, 1.99}) CHECK(interpolate(f, x) == doctest::Approx(1 - x + 0.5 * x * x - 0.25 * x * x * x).epsilon(1e-12));
  CHECK(interpolate(f, 3.0, -7.0) == -7.0);
}

TEST_CASE("tridiagonal_solve examples") {
  SUBCASE("identity") {
    std::vector<double> d(5, 1.0), o(4, 0.0), r{1, 2, 3, 4, 5};
    const auto x = tridiagonal_solve(d, o, r);
    for (int i = 0; i < 5; ++i) CHECK(x[i] == r[i]);
  }
  SUBCASE("laplacian plus identity against a dense solve") {
    const int n = 10;
    std::vector<double> d(n, 3.0), o(n - 1, -1.0), r(n, 1.0);
    const auto x = tridiagonal_solve(d, o, r);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = 3.0;
      if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -1.0;
    }
    const Eigen::VectorXd ref = A.fullPivLu().solve(Eigen::VectorXd::Ones(n));
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) < 1e-13);
    // away from the ends the solution tends to 1/(3-2) = 1
    CHECK(std::abs(x[n / 2] - 1.0) < 0.02);
  }
  SUBCASE("zero pivot") {
    std::vector<double> d{0.0, 0.0}, o{0.0}, r{1, 1};
    CHECK_THROWS_AS(tridiagonal_solve(d, o, r), SingularSystem);
  }
}

TEST_CASE("tridiagonal_solve matches a dense oracle on random systems") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n : {2, 3, 7, 50, 64}) {
    std::vector<double> d(n), o(n - 1), r(n);
    for (auto& v : o) v = U(rng);
    for (int i = 0; i < n; ++i) {
      d[i] = 2.5 * (U(rng) > 0 ? 1 : -1) + U(rng);
      r[i] = U(rng);
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = d[i];
      if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = o[i];
    }
    const Eigen::VectorXd ref = A.fullPivLu().solve(Eigen::Map<Eigen::VectorXd>(r.data(), n));
    const auto x = tridiagonal_solve(d, o, r);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) <= 1e-10 * ref.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("pivoted LU handles indefinite and non-symmetric complex systems") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int n = 40;
  std::vector<cplx> lo(n - 1), di(n), up(n - 1), r(n);
  for (auto& v : lo) v = {U(rng), U(rng)};
  for (auto& v : up) v = {U(rng), U(rng)};
  for (auto& v : di) v = {0.1 * U(rng), U(rng)};  // small diagonal forces row swaps
  for (auto& v : r) v = {U(rng), U(rng)};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = di[i];
    if (i + 1 < n) {
      A(i + 1, i) = lo[i];
      A(i, i + 1) = up[i];
    }
  }
  const Eigen::VectorXcd ref = A.fullPivLu().solve(Eigen::Map<Eigen::VectorXcd>(r.data(), n));
  const TridiagLU<cplx> lu(lo, di, up);
  const auto x = lu.solve(r);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) <= 1e-10 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("serial and OpenMP kernels agree") {
  const std::size_t n = 100001;
  std::vector<cplx> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1e-4 * static_cast<double>(i);
    a[i] = {std::sin(t), std::cos(3 * t)};
    b[i] = {std::exp(-t), t};
  }
  const cplx s1 = kernels::serial::conj_dot(a, b), s2 = kernels::omp::conj_dot(a, b);
  CHECK(std::abs(s1 - s2) <= 1e-12 * std::abs(s1));
  CHECK(kernels::serial::abs_pow_sum(a, 4.0) == doctest::Approx(kernels::omp::abs_pow_sum(a, 4.0)).epsilon(1e-12));
  auto u1 = a, u2 = a;
  kernels::serial::nonlinear_phase(u1, 3.0, 0.37);
  kernels::omp::nonlinear_phase(u2, 3.0, 0.37);
  CHECK(u1 == u2);
  for (std::size_t i = 0; i < n; i += 997) CHECK(std::abs(u1[i]) == doctest::Approx(std::abs(a[i])).epsilon(1e-14));
  std::vector<double> out(257, 0.0);
  kernels::omp::for_each_index(out.size(), [&](std::size_t i) { out[i] = std::sqrt(static_cast<double>(i)); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == std::sqrt(static_cast<double>(i)));
}
