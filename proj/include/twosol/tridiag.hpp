#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace twosol {

/// LU factorization of a general tridiagonal matrix with partial pivoting
/// (the gttrf/gttrs scheme). Factor once, solve many right-hand sides.
template <class T>
class TridiagLU {
 public:
  /// lower[i] = A(i+1,i), diag[i] = A(i,i), upper[i] = A(i,i+1).
  TridiagLU(std::span<const T> lower, std::span<const T> diag, std::span<const T> upper);

  std::size_t size() const noexcept { return d_.size(); }
  std::vector<T> solve(std::span<const T> rhs) const;
  void solve_in_place(std::span<T> x) const;
  /// max |u_ii| / min |u_ii|, a cheap conditioning indicator.
  double pivot_ratio() const noexcept;

 private:
  std::vector<T> dl_, d_, du_, du2_;
  std::vector<T> dinv_;  // reciprocal pivots, so the solve only multiplies
  std::vector<std::size_t> ipiv_;
};

extern template class TridiagLU<double>;
extern template class TridiagLU<std::complex<double>>;

/// Solve the symmetric tridiagonal system with `diag` and `off_diag`
/// (length n-1). Throws SingularSystem on a zero pivot.
std::vector<double> tridiagonal_solve(std::span<const double> diag, std::span<const double> off_diag,
                                      std::span<const double> rhs);
std::vector<std::complex<double>> tridiagonal_solve(std::span<const std::complex<double>> diag,
                                                    std::span<const std::complex<double>> off_diag,
                                                    std::span<const std::complex<double>> rhs);

/// y = A x for the symmetric tridiagonal A.
std::vector<double> tridiagonal_apply(std::span<const double> diag, std::span<const double> off_diag,
                                      std::span<const double> x);

}  // namespace twosol
