#include "twosol/kernels.hpp"

#include <cmath>

#ifdef TWOSOL_HAVE_OPENMP
#include <omp.h>
#endif

namespace twosol::kernels {

namespace {

inline double modulus_power(const cplx& u, double p) {
  const double a2 = std::norm(u);
  // |u|^(p-1) = (|u|^2)^((p-1)/2); p = 3 is the common case.
  if (p == 3.0) return a2;
  if (a2 == 0.0) return 0.0;
  return std::pow(a2, 0.5 * (p - 1.0));
}

}  // namespace

namespace serial {

void nonlinear_phase(std::span<cplx> u, double p, double tau) {
  for (auto& val : u) val *= std::polar(1.0, tau * modulus_power(val, p));
}

cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx t = std::conj(f[j]) * g[j];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double abs_pow_sum(std::span<const cplx> f, double q) {
  double s = 0.0;
  for (const auto& val : f) s += std::pow(std::abs(val), q);
  return s;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace serial

namespace omp {

#ifdef TWOSOL_HAVE_OPENMP

void nonlinear_phase(std::span<cplx> u, double p, double tau) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  cplx* data = u.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) data[j] *= std::polar(1.0, tau * modulus_power(data[j], p));
}

cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  double re = 0.0;
  double im = 0.0;
#pragma omp parallel for reduction(+ : re, im) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const cplx t = std::conj(f[j]) * g[j];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double abs_pow_sum(std::span<const cplx> f, double q) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) s += std::pow(std::abs(f[j]), q);
  return s;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

#else

void nonlinear_phase(std::span<cplx> u, double p, double tau) { serial::nonlinear_phase(u, p, tau); }
cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g) { return serial::conj_dot(f, g); }
double abs_pow_sum(std::span<const cplx> f, double q) { return serial::abs_pow_sum(f, q); }
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
  serial::for_each_index(count, body);
}

#endif

}  // namespace omp

bool openmp_enabled() noexcept {
#ifdef TWOSOL_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef TWOSOL_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void nonlinear_phase(std::span<cplx> u, double p, double tau) { omp::nonlinear_phase(u, p, tau); }
cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g) { return omp::conj_dot(f, g); }
double abs_pow_sum(std::span<const cplx> f, double q) { return omp::abs_pow_sum(f, q); }
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
  omp::for_each_index(count, body);
}

}  // namespace twosol::kernels
