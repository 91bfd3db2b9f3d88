#include "twosol/grid.hpp"

#include <algorithm>
#include <cmath>

#include "twosol/errors.hpp"
#include "twosol/kernels.hpp"

namespace twosol {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), h_(0.0), zero_(0) {
  if (n < 3) throw InvalidParameter("Grid1D: need at least 3 nodes");
  if (!(x_max > x_min)) throw InvalidParameter("Grid1D: x_max must exceed x_min");
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
  if (x_min > 0.0 || x_max < 0.0) throw InvalidParameter("Grid1D: origin outside grid");
  const double k = -x_min / h_;
  const double kr = std::round(k);
  if (std::abs(k - kr) > 1e-8 * std::max(1.0, std::abs(k)))
    throw InvalidParameter("Grid1D: x = 0 is not a node");
  zero_ = static_cast<std::size_t>(kr);
}

Grid1D Grid1D::symmetric(double half_width, std::size_t n) {
  if (n % 2 == 0) throw InvalidParameter("Grid1D::symmetric: n must be odd");
  return Grid1D(-half_width, half_width, n);
}

Grid1D Grid1D::standard() { return symmetric(60.0, 6001); }

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
  return out;
}

std::size_t Grid1D::nearest_index(double xv) const noexcept {
  const double k = std::round((xv - x_min_) / h_);
  if (!(k > 0.0)) return 0;
  if (k >= static_cast<double>(n_ - 1)) return n_ - 1;
  return static_cast<std::size_t>(k);
}

Grid1D Grid1D::refined() const { return Grid1D(x_min_, x_max_, 2 * n_ - 1); }

Grid1D Grid1D::shifted(double shift) const {
  const double k = shift / h_;
  if (std::abs(k - std::round(k)) > 1e-8 * std::max(1.0, std::abs(k)))
    throw InvalidParameter("Grid1D::shifted: shift is not a multiple of the spacing");
  const double s = std::round(k) * h_;
  return Grid1D(x_min_ + s, x_max_ + s, n_);
}

Grid1D Grid1D::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidParameter("Grid1D::scaled: factor must be positive");
  return Grid1D(x_min_ * factor, x_max_ * factor, n_);
}

bool Grid1D::operator==(const Grid1D& o) const noexcept {
  return n_ == o.n_ && x_min_ == o.x_min_ && x_max_ == o.x_max_;
}

WaveField::WaveField(const Grid1D& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw GridMismatch("WaveField: length differs from grid");
}

bool WaveField::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

RealField::RealField(const Grid1D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw GridMismatch("RealField: length differs from grid");
}

WaveField RealField::to_complex() const {
  std::vector<cplx> c(values.begin(), values.end());
  return WaveField(grid, std::move(c));
}

cplx complex_inner(const WaveField& f, const WaveField& g) {
  if (!(f.grid == g.grid)) throw GridMismatch("complex_inner: grids differ");
  const std::size_t n = f.size();
  cplx s = kernels::conj_dot(f.values, g.values);
  s -= 0.5 * (std::conj(f.values[0]) * g.values[0] + std::conj(f.values[n - 1]) * g.values[n - 1]);
  return s * f.grid.spacing();
}

double real_inner(const WaveField& f, const WaveField& g) { return complex_inner(f, g).real(); }

double real_inner(const RealField& f, const RealField& g) {
  if (!(f.grid == g.grid)) throw GridMismatch("real_inner: grids differ");
  const std::size_t n = f.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f.values[i] * g.values[i];
  s -= 0.5 * (f.values[0] * g.values[0] + f.values[n - 1] * g.values[n - 1]);
  return s * f.grid.spacing();
}

Norms norms(const WaveField& f) {
  Norms out;
  out.l2 = std::sqrt(std::max(0.0, real_inner(f, f)));
  WaveField d(f.grid, derivative(f.values, f.grid.spacing()));
  out.h1 = out.l2 + std::sqrt(std::max(0.0, real_inner(d, d)));
  for (const auto& c : f.values) out.sup = std::max(out.sup, std::abs(c));
  return out;
}

Norms norms(const RealField& f) { return norms(f.to_complex()); }

double trapezoid(std::span<const double> s, double h) {
  if (s.empty()) return 0.0;
  double acc = 0.0;
  for (double v : s) acc += v;
  acc -= 0.5 * (s.front() + s.back());
  return acc * h;
}

cplx trapezoid(std::span<const cplx> s, double h) {
  if (s.empty()) return {0.0, 0.0};
  cplx acc{0.0, 0.0};
  for (const auto& v : s) acc += v;
  acc -= 0.5 * (s.front() + s.back());
  return acc * h;
}

namespace {

template <class T>
std::vector<T> diff1(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  std::vector<T> d(n);
  if (n < 3) throw InvalidParameter("derivative: need at least 3 samples");
  const double inv = 1.0 / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
  return d;
}

}  // namespace

std::vector<cplx> derivative(std::span<const cplx> f, double h) { return diff1(f, h); }
std::vector<double> derivative(std::span<const double> f, double h) { return diff1(f, h); }

std::vector<double> second_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 4) throw InvalidParameter("second_derivative: need at least 4 samples");
  std::vector<double> d(n);
  const double inv = 1.0 / (h * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
  return d;
}

std::vector<cplx> derivative4(std::span<const cplx> f, double h) {
  const std::size_t n = f.size();
  std::vector<cplx> d = diff1(f, h);
  const double inv = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  return d;
}

namespace {

template <class T>
T lagrange4(const std::vector<T>& v, const Grid1D& g, double x, T outside) {
  const std::size_t n = g.size();
  const double t = (x - g.x_min()) / g.spacing();
  if (t < -1e-9 || t > static_cast<double>(n - 1) + 1e-9) return outside;
  const double tr = std::round(t);
  if (std::abs(t - tr) < 1e-12) return v[static_cast<std::size_t>(tr)];
  // stencil i0..i0+3 around t, kept inside the grid
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
  i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(n) - 4);
  T acc{};
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      w *= (t - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    acc += w * v[static_cast<std::size_t>(i0 + a)];
  }
  return acc;
}

}  // namespace

cplx interpolate(const WaveField& f, double x, cplx outside) {
  return lagrange4(f.values, f.grid, x, outside);
}

double interpolate(const RealField& f, double x, double outside) {
  return lagrange4(f.values, f.grid, x, outside);
}

}  // namespace twosol
