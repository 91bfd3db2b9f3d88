#include "twosol/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twosol/errors.hpp"

namespace twosol {

template <class T>
TridiagLU<T>::TridiagLU(std::span<const T> lower, std::span<const T> diag, std::span<const T> upper)
    : dl_(lower.begin(), lower.end()),
      d_(diag.begin(), diag.end()),
      du_(upper.begin(), upper.end()),
      du2_(diag.size() > 2 ? diag.size() - 2 : 0, T{}),
      ipiv_(diag.size()) {
  const std::size_t n = d_.size();
  if (n == 0) throw InvalidParameter("TridiagLU: empty system");
  if (dl_.size() + 1 != n || du_.size() + 1 != n)
    throw InvalidParameter("TridiagLU: off-diagonal length must be n-1");
  for (std::size_t i = 0; i < n; ++i) ipiv_[i] = i;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      // no interchange
      if (d_[i] == T{}) throw SingularSystem("TridiagLU: zero pivot");
      const T fact = dl_[i] / d_[i];
      dl_[i] = fact;
      d_[i + 1] -= fact * du_[i];
    } else {
      // swap rows i and i+1
      const T fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const T temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      ipiv_[i] = i + 1;
    }
  }
  if (d_[n - 1] == T{}) throw SingularSystem("TridiagLU: zero pivot");
  dinv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) dinv_[i] = T{1} / d_[i];
}

template <class T>
void TridiagLU<T>::solve_in_place(std::span<T> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw InvalidParameter("TridiagLU: rhs length mismatch");
  // L y = P b
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ipiv_[i] == i) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const T temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  // U x = y
  b[n - 1] *= dinv_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) * dinv_[n - 2];
  if (n < 3) return;
  for (std::size_t k = n - 2; k-- > 0;) b[k] = (b[k] - du_[k] * b[k + 1] - du2_[k] * b[k + 2]) * dinv_[k];
}

template <class T>
std::vector<T> TridiagLU<T>::solve(std::span<const T> rhs) const {
  std::vector<T> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

template <class T>
double TridiagLU<T>::pivot_ratio() const noexcept {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : d_) {
    lo = std::min(lo, static_cast<double>(std::abs(v)));
    hi = std::max(hi, static_cast<double>(std::abs(v)));
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

template class TridiagLU<double>;
template class TridiagLU<std::complex<double>>;

namespace {

template <class T>
std::vector<T> symmetric_solve(std::span<const T> diag, std::span<const T> off, std::span<const T> rhs) {
  if (rhs.size() != diag.size()) throw InvalidParameter("tridiagonal_solve: rhs length mismatch");
  TridiagLU<T> lu(off, diag, off);
  return lu.solve(rhs);
}

}  // namespace

std::vector<double> tridiagonal_solve(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> rhs) {
  return symmetric_solve(diag, off, rhs);
}

std::vector<std::complex<double>> tridiagonal_solve(std::span<const std::complex<double>> diag,
                                                    std::span<const std::complex<double>> off,
                                                    std::span<const std::complex<double>> rhs) {
  return symmetric_solve(diag, off, rhs);
}

std::vector<double> tridiagonal_apply(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> x) {
  const std::size_t n = diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

}  // namespace twosol
