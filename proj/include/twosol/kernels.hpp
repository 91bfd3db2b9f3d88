#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP variant in `kernels::omp`; the unqualified
// entry points dispatch to the OpenMP variant when it was compiled in.
// The serial versions stay as the reference the tests compare against.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace twosol::kernels {

using cplx = std::complex<double>;

namespace serial {
/// u_j <- u_j * exp(i * tau * |u_j|^(p-1)).
void nonlinear_phase(std::span<cplx> u, double p, double tau);
/// sum_j conj(f_j) g_j
cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g);
/// sum_j |f_j|^q
double abs_pow_sum(std::span<const cplx> f, double q);
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);
}  // namespace serial

namespace omp {
void nonlinear_phase(std::span<cplx> u, double p, double tau);
cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g);
double abs_pow_sum(std::span<const cplx> f, double q);
/// Iterations run concurrently; `body` must not share mutable state.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);
}  // namespace omp

bool openmp_enabled() noexcept;
int max_threads() noexcept;

void nonlinear_phase(std::span<cplx> u, double p, double tau);
cplx conj_dot(std::span<const cplx> f, std::span<const cplx> g);
double abs_pow_sum(std::span<const cplx> f, double q);
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace twosol::kernels
