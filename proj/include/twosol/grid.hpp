#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace twosol {

using cplx = std::complex<double>;

/// Uniform grid on [x_min, x_max] with n nodes. The origin is always a node
/// so point interactions at x = 0 sit exactly on a sample.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n);

  /// Symmetric grid [-half_width, half_width]; n must be odd.
  static Grid1D symmetric(double half_width, std::size_t n);
  /// [-60, 60] with h = 0.02.
  static Grid1D standard();

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

  std::size_t zero_index() const noexcept { return zero_; }
  /// Index of the node nearest to x (clamped to the grid).
  std::size_t nearest_index(double x) const noexcept;
  bool contains(double x) const noexcept { return x >= x_min_ && x <= x_max_; }

  /// Same extent, spacing halved.
  Grid1D refined() const;
  /// Grid translated by `shift`; `shift` must be a multiple of the spacing.
  Grid1D shifted(double shift) const;
  /// Grid with every node multiplied by `factor` (> 0).
  Grid1D scaled(double factor) const;

  bool operator==(const Grid1D& other) const noexcept;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
  std::size_t zero_;
};

/// Complex samples on a grid.
struct WaveField {
  Grid1D grid;
  std::vector<cplx> values;

  explicit WaveField(const Grid1D& g) : grid(g), values(g.size(), cplx{0.0, 0.0}) {}
  WaveField(const Grid1D& g, std::vector<cplx> v);

  std::size_t size() const noexcept { return values.size(); }
  bool all_finite() const noexcept;
};

struct RealField {
  Grid1D grid;
  std::vector<double> values;

  explicit RealField(const Grid1D& g) : grid(g), values(g.size(), 0.0) {}
  RealField(const Grid1D& g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  WaveField to_complex() const;
};

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;
  double sup = 0.0;
};

/// Trapezoid approximation of the integral of conj(f) g.
cplx complex_inner(const WaveField& f, const WaveField& g);
/// Re of complex_inner.
double real_inner(const WaveField& f, const WaveField& g);
double real_inner(const RealField& f, const RealField& g);

Norms norms(const WaveField& f);
Norms norms(const RealField& f);

/// Trapezoid rule for samples on a uniform grid of spacing h.
double trapezoid(std::span<const double> samples, double h);
cplx trapezoid(std::span<const cplx> samples, double h);

/// Second-order centred first derivative, second-order one-sided at the ends.
std::vector<cplx> derivative(std::span<const cplx> f, double h);
std::vector<double> derivative(std::span<const double> f, double h);
/// Second-order second derivative, one-sided (second-order) at the ends.
std::vector<double> second_derivative(std::span<const double> f, double h);

/// Fourth-order centred first derivative (second-order near the ends). Used
/// where functionals must be evaluated to better than O(h^2).
std::vector<cplx> derivative4(std::span<const cplx> f, double h);

/// Cubic Lagrange interpolation of uniformly spaced samples; points outside
/// the grid return `outside`. Exact at nodes.
cplx interpolate(const WaveField& f, double x, cplx outside = {0.0, 0.0});
double interpolate(const RealField& f, double x, double outside = 0.0);

}  // namespace twosol
