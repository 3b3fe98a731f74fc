#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dicke {

using cdouble = std::complex<double>;

// Execution policy for the hot loops. Serial is the reference implementation
// the tests compare against; Parallel is the OpenMP path. Auto picks Parallel
// unless the caller is already inside an OpenMP region.
enum class Exec { Serial, Parallel, Auto };

namespace kernels {

Exec resolve(Exec e);
int max_threads();
void set_threads(int n);

// y = a*x + y
void axpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n, Exec e = Exec::Auto);
// x *= a
void scal(cdouble a, cdouble* x, std::size_t n, Exec e = Exec::Auto);
// conj(x) . y
cdouble dot(const cdouble* x, const cdouble* y, std::size_t n, Exec e = Exec::Auto);
double nrm2(const cdouble* x, std::size_t n, Exec e = Exec::Auto);

// Runge-Kutta stage combination on raw doubles: y = base + h * sum_j c_j k_j.
void rk_combine(double* y, const double* base, double h, const double* const* stages,
                const double* coeff, int n_stages, std::size_t n, Exec e = Exec::Auto);

// Weighted RMS error norm: sqrt(mean((err_i / (atol + rtol*max(|y0_i|,|y1_i|)))^2)).
double error_norm(const double* err, const double* y0, const double* y1, double atol,
                  double rtol, std::size_t n, Exec e = Exec::Auto);

} // namespace kernels
} // namespace dicke
